#include "raqswipt/approx.hpp"

#include <algorithm>
#include <cmath>

#include "raqswipt/errors.hpp"

namespace raq {

namespace {

double checked_anchor(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + ": anchor must be positive");
  return std::max(x, kAnchorFloor);
}

}  // namespace

double LogBoundCoeffs::value(double x) const { return zeta * std::log2(x) + nu; }

LogBoundCoeffs log_bound(double x_hat) {
  const double x = checked_anchor(x_hat, "log_bound");
  LogBoundCoeffs c;
  c.anchor = x;
  c.zeta = x / (1.0 + x);
  c.nu = std::log2(1.0 + x) - c.zeta * std::log2(x);
  return c;
}

double MonomialBound::value(std::span<const double> x) const {
  double log_v = std::log(delta);
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] != 0.0) log_v += exponents[i] * std::log(x[i]);
  }
  return std::exp(log_v);
}

Monomial MonomialBound::to_monomial(std::span<const int> ids) const {
  if (ids.size() != exponents.size()) throw ProblemError("to_monomial: id count mismatch");
  std::vector<std::pair<int, double>> exps;
  for (std::size_t i = 0; i < ids.size(); ++i) exps.emplace_back(ids[i], exponents[i]);
  return Monomial(delta, std::move(exps));
}

MonomialBound amgm_bound(std::span<const double> A, double B, std::span<const double> ps_anchor,
                         double pp_anchor) {
  const std::size_t K = ps_anchor.size();
  if (A.size() != K) throw DomainError("amgm_bound: A and anchor sizes differ");
  if (!(B > 0.0)) throw DomainError("amgm_bound: B must be positive");
  for (double a : A) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("amgm_bound: A must be nonnegative");
  }
  const double pp = checked_anchor(pp_anchor, "amgm_bound");
  std::vector<double> ps(K);
  for (std::size_t j = 0; j < K; ++j) ps[j] = checked_anchor(ps_anchor[j], "amgm_bound");

  // 2K terms: B ps_j and pp A_j ps_j, each weighted by its share of the sum.
  double S = 0.0;
  for (std::size_t j = 0; j < K; ++j) S += B * ps[j] + pp * A[j] * ps[j];

  MonomialBound m;
  m.anchor.reserve(K + 1);
  m.anchor.push_back(pp);
  m.anchor.insert(m.anchor.end(), ps.begin(), ps.end());
  m.exponents.assign(K + 1, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    const double w_pp = pp * A[j] * ps[j] / S;
    m.exponents[0] += w_pp;
    m.exponents[j + 1] = B * ps[j] / S + w_pp;
  }
  double log_delta = std::log(S);
  for (std::size_t i = 0; i <= K; ++i) log_delta -= m.exponents[i] * std::log(m.anchor[i]);
  m.delta = std::exp(log_delta);
  return m;
}

double amgm_target(std::span<const double> A, double B, std::span<const double> ps, double pp) {
  double v = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) v += B * ps[j] + pp * A[j] * ps[j];
  return v;
}

MonomialBound product_bound(std::span<const double> x_hat) {
  MonomialBound m;
  double log_psi = 0.0;
  for (double xr : x_hat) {
    const double x = checked_anchor(xr, "product_bound");
    const double phi = x / (1.0 + x);
    m.anchor.push_back(x);
    m.exponents.push_back(phi);
    log_psi += std::log1p(x) - phi * std::log(x);
  }
  m.delta = std::exp(log_psi);
  return m;
}

double product_target(std::span<const double> x) {
  double v = 1.0;
  for (double xi : x) v *= 1.0 + xi;
  return v;
}

}  // namespace raq
