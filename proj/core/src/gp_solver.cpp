#include "raqswipt/gp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "raqswipt/errors.hpp"

namespace raq {

using Eigen::MatrixXd;
using Eigen::VectorXd;

LseFunction::LseFunction(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ProblemError("LseFunction: no rows");
  for (const auto& r : rows_) {
    for (const auto& [id, a] : r.a) support_.push_back(id);
  }
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  local_.reserve(rows_.size());
  for (const auto& r : rows_) {
    std::vector<std::pair<int, double>> l;
    for (const auto& [id, a] : r.a) {
      const auto pos = std::lower_bound(support_.begin(), support_.end(), id) - support_.begin();
      l.emplace_back(static_cast<int>(pos), a);
    }
    local_.push_back(std::move(l));
  }
}

double LseFunction::value(const VectorXd& y) const {
  double zmax = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> z;
  z.resize(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double v = rows_[i].b;
    for (const auto& [id, a] : rows_[i].a) v += a * y(id);
    z[i] = v;
    zmax = std::max(zmax, v);
  }
  if (rows_.size() == 1) return z[0];
  double s = 0.0;
  for (double v : z) s += std::exp(v - zmax);
  return zmax + std::log(s);
}

double LseFunction::evaluate(const VectorXd& y, VectorXd& grad, MatrixXd& hess) const {
  const auto ns = static_cast<Eigen::Index>(support_.size());
  grad.setZero(ns);
  hess.setZero(ns, ns);
  if (rows_.size() == 1) {
    double v = rows_[0].b;
    for (const auto& [id, a] : rows_[0].a) v += a * y(id);
    for (const auto& [j, a] : local_[0]) grad(j) += a;
    return v;
  }
  thread_local std::vector<double> z;
  z.resize(rows_.size());
  double zmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double v = rows_[i].b;
    for (const auto& [id, a] : rows_[i].a) v += a * y(id);
    z[i] = v;
    zmax = std::max(zmax, v);
  }
  double s = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    s += v;
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double pi = z[i] / s;
    if (pi == 0.0) continue;
    for (const auto& [j, a] : local_[i]) {
      grad(j) += pi * a;
      for (const auto& [l, c] : local_[i]) hess(j, l) += pi * a * c;
    }
  }
  hess.noalias() -= grad * grad.transpose();
  return zmax + std::log(s);
}

namespace {

LseFunction::Row make_row(const Monomial& m, std::span<const double> log_scale, double extra_log = 0.0) {
  LseFunction::Row r;
  r.b = std::log(m.coeff()) + extra_log;
  for (const auto& [id, a] : m.exponents()) {
    r.a.emplace_back(id, a);
    r.b += a * log_scale[id];
  }
  return r;
}

}  // namespace

ConvexProgram to_convex(const GpProblem& problem, std::span<const double> scale) {
  problem.validate();
  const int n = problem.num_vars();
  std::vector<double> log_scale(n, 0.0);
  if (!scale.empty()) {
    if (static_cast<int>(scale.size()) != n) throw ProblemError("to_convex: scale size mismatch");
    for (int i = 0; i < n; ++i) {
      if (!(scale[i] > 0.0)) throw ProblemError("to_convex: scale must be positive");
      log_scale[i] = std::log(scale[i]);
    }
  }
  ConvexProgram cp;
  cp.n = n;
  {
    std::vector<LseFunction::Row> rows;
    for (const auto& t : problem.objective.terms()) rows.push_back(make_row(t, log_scale));
    cp.objective = LseFunction(std::move(rows));
  }
  for (const auto& c : problem.inequalities) {
    const Monomial inv = c.rhs.inverse();
    std::vector<LseFunction::Row> rows;
    for (const auto& t : c.lhs.terms()) rows.push_back(make_row(t * inv, log_scale));
    cp.inequalities.emplace_back(std::move(rows));
  }
  for (int i = 0; i < n; ++i) {
    // lo / x <= 1 and x / hi <= 1.
    cp.inequalities.emplace_back(std::vector<LseFunction::Row>{
        {{{i, -1.0}}, std::log(problem.lower[i]) - log_scale[i]}});
    if (std::isfinite(problem.upper[i])) {
      cp.inequalities.emplace_back(std::vector<LseFunction::Row>{
          {{{i, 1.0}}, log_scale[i] - std::log(problem.upper[i])}});
    }
  }
  const auto r = static_cast<Eigen::Index>(problem.equalities.size());
  cp.A_eq = MatrixXd::Zero(r, n);
  cp.b_eq = VectorXd::Zero(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& e = problem.equalities[i];
    const auto row = make_row(e.lhs / e.rhs, log_scale);
    for (const auto& [id, a] : row.a) cp.A_eq(i, id) += a;
    cp.b_eq(i) = -row.b;
  }
  return cp;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kMaxIter: return "max_iter";
  }
  return "unknown";
}

namespace {

constexpr double kInteriorMargin = 1e-3;

struct Subspace {
  MatrixXd Z;  // orthonormal basis of null(A); empty when there are no equalities
  VectorXd y_p;
  bool trivial = true;
};

Subspace equality_subspace(const ConvexProgram& cp, bool& consistent) {
  Subspace s;
  consistent = true;
  s.y_p = VectorXd::Zero(cp.n);
  if (cp.A_eq.rows() == 0) return s;
  s.trivial = false;
  Eigen::JacobiSVD<MatrixXd> svd(cp.A_eq, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  const auto rank = svd.rank();
  s.y_p = svd.solve(cp.b_eq);
  s.Z = svd.matrixV().rightCols(cp.n - rank);
  consistent = (cp.A_eq * s.y_p - cp.b_eq).norm() <= 1e-9 * (1.0 + cp.b_eq.norm());
  return s;
}

struct CoreResult {
  SolveStatus status = SolveStatus::kMaxIter;
  VectorXd y;
  VectorXd lambda;
  double kkt = 0.0;
  double gap = 0.0;
  int newton = 0;
  bool stopped_early = false;
};

// Primal-dual interior point on the convex image (the standard
// centrality-residual method), with equalities removed through the
// nullspace basis.
class PrimalDual {
 public:
  PrimalDual(const ConvexProgram& cp, const Subspace& sub, const GpSolverOptions& opt)
      : cp_(cp), sub_(sub), opt_(opt), m_(static_cast<int>(cp.inequalities.size())) {}

  CoreResult run(VectorXd y, int budget, std::vector<MeritStep>& trace,
                 const std::function<bool(const VectorXd&)>& stop_early) const {
    CoreResult res;
    const int n = cp_.n;
    State st;
    evaluate(y, st);
    VectorXd lambda(m_);
    for (int i = 0; i < m_; ++i) lambda(i) = -1.0 / (opt_.t0 * st.f(i));

    VectorXd dy, dlambda;
    for (;;) {
      const double gap = -st.f.dot(lambda);
      const VectorXd rd = reduced(dual_residual(st, lambda));
      res.kkt = rd.lpNorm<Eigen::Infinity>();
      res.gap = gap;
      if (res.kkt <= opt_.feas_tol && gap <= opt_.gap_tol * (1.0 + std::abs(st.f0))) {
        res.status = SolveStatus::kOptimal;
        break;
      }
      if (res.newton >= budget) {
        res.status = SolveStatus::kMaxIter;
        break;
      }
      const double t = m_ > 0 ? opt_.mu * m_ / gap : 1.0;

      // H_pd dy = -(grad F0 + sum grad F_i / (t (-F_i))).
      MatrixXd H = st.h0;
      VectorXd g = st.g0;
      for (int i = 0; i < m_; ++i) {
        const auto& fi = cp_.inequalities[i];
        scatter_hess(fi, lambda(i), lambda(i) / (-st.f(i)), st.lg[i], st.lh[i], H);
        scatter_grad(fi, 1.0 / (t * -st.f(i)), st.lg[i], g);
      }
      const VectorXd dv = solve_reduced(H, reduced(g));
      dy = sub_.trivial ? dv : VectorXd(sub_.Z * dv);
      dlambda.resize(m_);
      for (int i = 0; i < m_; ++i) {
        const double rc = -lambda(i) * st.f(i) - 1.0 / t;
        dlambda(i) = (rc - lambda(i) * directional(cp_.inequalities[i], st.lg[i], dy)) / st.f(i);
      }

      const double r0 = residual_norm(st, lambda, t);
      double step = 1.0;
      for (int i = 0; i < m_; ++i) {
        if (dlambda(i) < 0.0) step = std::min(step, -lambda(i) / dlambda(i));
      }
      step *= 0.99;
      State trial;
      VectorXd y1, l1;
      int halvings = 0;
      for (;; ++halvings) {
        y1 = y + step * dy;
        if (strictly_feasible(y1) || halvings > 80) break;
        step *= 0.5;
      }
      double r1 = 0.0;
      for (;; ++halvings) {
        l1 = lambda + step * dlambda;
        evaluate(y1, trial);
        r1 = residual_norm(trial, l1, t);
        if (r1 <= (1.0 - 0.01 * step) * r0 || halvings > 80) break;
        step *= 0.5;
        y1 = y + step * dy;
      }
      ++res.newton;
      if (!(r1 < r0) || !strictly_feasible(y1)) {
        // No progress at working precision; report what we have.
        res.status = res.kkt <= 1e3 * opt_.feas_tol ? SolveStatus::kOptimal : SolveStatus::kMaxIter;
        break;
      }
      trace.push_back({t, r0, r1});
      y = std::move(y1);
      lambda = std::move(l1);
      st = std::move(trial);
      if (stop_early && stop_early(y)) {
        res.status = SolveStatus::kOptimal;
        res.stopped_early = true;
        break;
      }
    }
    (void)n;
    res.y = y;
    res.lambda = lambda;
    return res;
  }

 private:
  struct State {
    double f0 = 0.0;
    VectorXd g0;  // dense gradient of F0
    MatrixXd h0;  // dense Hessian of F0
    VectorXd f;   // F_i
    std::vector<VectorXd> lg;  // local gradients
    std::vector<MatrixXd> lh;  // local Hessians
  };

  void evaluate(const VectorXd& y, State& st) const {
    const int n = cp_.n;
    VectorXd lg;
    MatrixXd lh;
    st.f0 = cp_.objective.evaluate(y, lg, lh);
    st.g0 = VectorXd::Zero(n);
    st.h0 = MatrixXd::Zero(n, n);
    scatter_grad(cp_.objective, 1.0, lg, st.g0);
    scatter_hess(cp_.objective, 1.0, 0.0, lg, lh, st.h0);
    st.f.resize(m_);
    st.lg.resize(m_);
    st.lh.resize(m_);
    for (int i = 0; i < m_; ++i) st.f(i) = cp_.inequalities[i].evaluate(y, st.lg[i], st.lh[i]);
  }

  VectorXd dual_residual(const State& st, const VectorXd& lambda) const {
    VectorXd r = st.g0;
    for (int i = 0; i < m_; ++i) scatter_grad(cp_.inequalities[i], lambda(i), st.lg[i], r);
    return r;
  }

  double residual_norm(const State& st, const VectorXd& lambda, double t) const {
    const VectorXd rd = reduced(dual_residual(st, lambda));
    double s = rd.squaredNorm();
    for (int i = 0; i < m_; ++i) {
      const double rc = -lambda(i) * st.f(i) - 1.0 / t;
      s += rc * rc;
    }
    return std::sqrt(s);
  }

  VectorXd reduced(const VectorXd& v) const {
    return sub_.trivial ? v : VectorXd(sub_.Z.transpose() * v);
  }

  bool strictly_feasible(const VectorXd& y) const {
    for (const auto& f : cp_.inequalities) {
      if (!(f.value(y) < 0.0)) return false;
    }
    return true;
  }

  static double directional(const LseFunction& f, const VectorXd& lg, const VectorXd& dy) {
    double s = 0.0;
    const auto& sup = f.support();
    for (std::size_t a = 0; a < sup.size(); ++a) s += lg(a) * dy(sup[a]);
    return s;
  }

  static void scatter_grad(const LseFunction& f, double w, const VectorXd& lg, VectorXd& g) {
    const auto& sup = f.support();
    for (std::size_t a = 0; a < sup.size(); ++a) g(sup[a]) += w * lg(a);
  }

  // H += wh * lh + wgg * lg lg^T, in global ids.
  static void scatter_hess(const LseFunction& f, double wh, double wgg, const VectorXd& lg,
                           const MatrixXd& lh, MatrixXd& H) {
    const auto& sup = f.support();
    const auto ns = sup.size();
    const bool curved = !f.affine();
    for (std::size_t a = 0; a < ns; ++a) {
      for (std::size_t b = 0; b < ns; ++b) {
        double v = wgg * lg(a) * lg(b);
        if (curved) v += wh * lh(a, b);
        H(sup[a], sup[b]) += v;
      }
    }
  }

  VectorXd solve_reduced(const MatrixXd& H, const VectorXd& gr) const {
    MatrixXd Hr = sub_.trivial ? H : MatrixXd(sub_.Z.transpose() * H * sub_.Z);
    double reg = opt_.hessian_reg;
    for (int attempt = 0; attempt < 12; ++attempt) {
      MatrixXd Hreg = Hr;
      Hreg.diagonal().array() += reg;
      Eigen::LLT<MatrixXd> llt(Hreg);
      if (llt.info() == Eigen::Success) {
        VectorXd d = -llt.solve(gr);
        if (d.allFinite()) return d;
      }
      reg = std::max(reg * 100.0, 1e-8 * (1.0 + Hr.diagonal().cwiseAbs().maxCoeff()));
    }
    return -gr;
  }

  const ConvexProgram& cp_;
  const Subspace& sub_;
  const GpSolverOptions& opt_;
  int m_;
};

double max_ineq(const ConvexProgram& cp, const VectorXd& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : cp.inequalities) worst = std::max(worst, f.value(y));
  return worst;
}

}  // namespace

SolveResult solve_gp(const GpProblem& problem, std::span<const double> x0,
                     const GpSolverOptions& options) {
  problem.validate();
  const int n = problem.num_vars();
  std::vector<double> scale(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const double start = (!x0.empty() && x0[i] > 0.0) ? x0[i] : 1.0;
    scale[i] = std::clamp(start, problem.lower[i], problem.upper[i]);
  }
  const ConvexProgram cp = to_convex(problem, scale);

  SolveResult out;
  bool consistent = true;
  const Subspace sub = equality_subspace(cp, consistent);
  if (!consistent) {
    out.status = SolveStatus::kInfeasible;
    out.message = "inconsistent equality constraints";
    out.x = scale;
    return out;
  }
  VectorXd y = sub.trivial ? VectorXd(VectorXd::Zero(n))
                           : VectorXd(sub.y_p + sub.Z * (sub.Z.transpose() * (-sub.y_p)));

  int budget = options.max_newton;
  // A start that only grazes the boundary gives multipliers near 1/eps, so
  // phase I also runs unless every constraint clears it by a margin.
  if (!(max_ineq(cp, y) < -kInteriorMargin)) {
    // Phase I: minimize s subject to F_i(y) <= s and s >= -1.
    ConvexProgram p1;
    p1.n = n + 1;
    p1.objective = LseFunction(std::vector<LseFunction::Row>{{{{n, 1.0}}, 0.0}});
    for (const auto& f : cp.inequalities) {
      auto rows = f.rows();
      for (auto& r : rows) r.a.emplace_back(n, -1.0);
      p1.inequalities.emplace_back(std::move(rows));
    }
    p1.inequalities.emplace_back(std::vector<LseFunction::Row>{{{{n, -1.0}}, -1.0}});
    p1.A_eq = MatrixXd::Zero(cp.A_eq.rows(), n + 1);
    p1.A_eq.leftCols(n) = cp.A_eq;
    p1.b_eq = cp.b_eq;
    Subspace sub1;
    sub1.y_p = VectorXd::Zero(n + 1);
    if (!sub.trivial) {
      sub1.trivial = false;
      sub1.y_p.head(n) = sub.y_p;
      sub1.Z = MatrixXd::Zero(n + 1, sub.Z.cols() + 1);
      sub1.Z.topLeftCorner(n, sub.Z.cols()) = sub.Z;
      sub1.Z(n, sub.Z.cols()) = 1.0;
    }
    VectorXd y1(n + 1);
    y1.head(n) = y;
    y1(n) = std::max(max_ineq(cp, y), -0.5) + 1.0;
    PrimalDual b1(p1, sub1, options);
    std::vector<MeritStep> trace1;
    const auto r1 = b1.run(y1, budget, trace1, [n](const VectorXd& v) { return v(n) < -kInteriorMargin; });
    out.phase1_iterations = r1.newton;
    out.phase1_value = r1.y(n);
    budget -= r1.newton;
    y = r1.y.head(n);
    bool failed = false;
    if (r1.status == SolveStatus::kMaxIter) {
      failed = true;
      out.status = SolveStatus::kMaxIter;
      out.message = "phase I hit the Newton step limit";
    } else if (!(max_ineq(cp, y) < 0.0)) {
      failed = true;
      out.status = SolveStatus::kInfeasible;
      out.message = "phase I optimum s = " + std::to_string(r1.y(n)) + " is not negative";
    }
    if (failed) {
      for (int i = 0; i < n; ++i) out.x.push_back(scale[i] * std::exp(y(i)));
      out.objective = problem.objective.eval(out.x);
      out.max_violation = problem.max_violation(out.x);
      return out;
    }
  }

  PrimalDual pd(cp, sub, options);
  const auto r = pd.run(y, budget, out.merit_trace, {});
  out.status = r.status;
  out.iterations = r.newton;
  out.kkt_residual = r.kkt;
  out.duality_gap = r.gap;
  out.multipliers.assign(r.lambda.data(), r.lambda.data() + r.lambda.size());
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = scale[i] * std::exp(r.y(i));
  out.objective = problem.objective.eval(out.x);
  out.max_violation = problem.max_violation(out.x);
  if (r.status == SolveStatus::kMaxIter) out.message = "Newton step limit reached";
  return out;
}

}  // namespace raq
