#pragma once

#include <span>
#include <vector>

#include "raqswipt/posynomial.hpp"

namespace raq {

/// Anchors below this are raised to it before coefficients are formed.
inline constexpr double kAnchorFloor = 1e-12;

/// Tangent minorant log2(1 + x) >= zeta log2(x) + nu at anchor x_hat.
struct LogBoundCoeffs {
  double zeta = 0.0;
  double nu = 0.0;
  double anchor = 0.0;

  double value(double x) const;
};

LogBoundCoeffs log_bound(double x_hat);

/// delta * prod_i x_i^{exponents_i}, a monomial minorant touching its target
/// at `anchor`.
struct MonomialBound {
  double delta = 0.0;
  std::vector<double> exponents;
  std::vector<double> anchor;

  double value(std::span<const double> x) const;
  /// Same bound as a GP monomial over the given variable ids.
  Monomial to_monomial(std::span<const int> ids) const;
};

/// Minorant of B sum_j ps_j + pp sum_j A_j ps_j. Variables are ordered
/// (pp, ps_1, ..., ps_K). Entries of A may be zero; their AM-GM terms then
/// carry zero weight.
MonomialBound amgm_bound(std::span<const double> A, double B, std::span<const double> ps_anchor,
                         double pp_anchor);

/// The target of amgm_bound at (pp, ps).
double amgm_target(std::span<const double> A, double B, std::span<const double> ps, double pp);

/// Minorant psi prod x_k^{phi_k} of prod (1 + x_k).
MonomialBound product_bound(std::span<const double> x_hat);

double product_target(std::span<const double> x);

}  // namespace raq
