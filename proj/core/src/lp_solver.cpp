#include "raqswipt/lp_solver.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "raqswipt/errors.hpp"

namespace raq {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

LpProblem LpProblem::with_vars(int n) {
  LpProblem p;
  p.c = VectorXd::Zero(n);
  p.A_le.resize(0, n);
  p.A_eq.resize(0, n);
  p.lower = VectorXd::Zero(n);
  p.upper = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  return p;
}

void LpProblem::add_le(const RowVectorXd& row, double rhs) {
  A_le.conservativeResize(A_le.rows() + 1, num_vars());
  A_le.row(A_le.rows() - 1) = row;
  b_le.conservativeResize(b_le.size() + 1);
  b_le(b_le.size() - 1) = rhs;
}

void LpProblem::add_eq(const RowVectorXd& row, double rhs) {
  A_eq.conservativeResize(A_eq.rows() + 1, num_vars());
  A_eq.row(A_eq.rows() - 1) = row;
  b_eq.conservativeResize(b_eq.size() + 1);
  b_eq(b_eq.size() - 1) = rhs;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kEps = 1e-10;

// Dense tableau over standard form A x = b, x >= 0, b >= 0. The last row
// holds reduced costs, the last column the right-hand side.
class Tableau {
 public:
  Tableau(const MatrixXd& A, const VectorXd& b) : m_(A.rows()), N_(A.cols() + A.rows()) {
    // Columns: structural, then one artificial per row.
    tab_ = MatrixXd::Zero(m_ + 1, N_ + 1);
    tab_.topLeftCorner(m_, A.cols()) = A;
    tab_.block(0, A.cols(), m_, m_) = MatrixXd::Identity(m_, m_);
    tab_.topRightCorner(m_, 1) = b;
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = static_cast<int>(A.cols() + i);
    n_struct_ = static_cast<int>(A.cols());
  }

  void set_cost(const VectorXd& cost) {
    tab_.row(m_).setZero();
    tab_.row(m_).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = basis_[i] < cost.size() ? cost(basis_[i]) : 0.0;
      if (cb != 0.0) tab_.row(m_) -= cb * tab_.row(i);
    }
  }

  // Returns false when unbounded.
  bool optimize(int allowed_cols, int& pivots) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (tab_(m_, j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = tab_(i, enter);
        if (a > kEps) {
          const double ratio = tab_(i, N_) / a;
          if (ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = static_cast<int>(i);
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(int row, int col) {
    tab_.row(row) /= tab_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i != row && tab_(i, col) != 0.0) tab_.row(i) -= tab_(i, col) * tab_.row(row);
    }
    basis_[row] = col;
  }

  // Pivot artificials out of the basis where a structural column allows it.
  void expel_artificials(int& pivots) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_struct_) continue;
      for (int j = 0; j < n_struct_; ++j) {
        if (std::abs(tab_(i, j)) > 1e-9) {
          pivot(static_cast<int>(i), j);
          ++pivots;
          break;
        }
      }
    }
  }

  double objective() const { return -tab_(m_, N_); }

  VectorXd solution() const {
    VectorXd x = VectorXd::Zero(n_struct_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_struct_) x(basis_[i]) = tab_(i, N_);
    }
    return x;
  }

  int n_struct() const { return n_struct_; }

 private:
  Eigen::Index m_;
  Eigen::Index N_;
  int n_struct_ = 0;
  MatrixXd tab_;
  std::vector<int> basis_;
};

// Solves min c.x over the polyhedron in shifted standard form.
LpResult solve_standard(const MatrixXd& A, const VectorXd& b, const VectorXd& c) {
  LpResult res;
  Tableau tab(A, b);
  const int n = static_cast<int>(A.cols());
  VectorXd phase1 = VectorXd::Zero(n + A.rows());
  phase1.tail(A.rows()).setOnes();
  tab.set_cost(phase1);
  tab.optimize(n + static_cast<int>(A.rows()), res.pivots);
  if (tab.objective() > 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>())) {
    res.status = LpStatus::kInfeasible;
    return res;
  }
  tab.expel_artificials(res.pivots);
  tab.set_cost(c);
  if (!tab.optimize(n, res.pivots)) {
    res.status = LpStatus::kUnbounded;
    return res;
  }
  res.status = LpStatus::kOptimal;
  res.x = tab.solution();
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const int n = p.num_vars();
  if (p.lower.size() != n || p.upper.size() != n) throw ProblemError("solve_lp: bounds size mismatch");
  if (p.A_le.rows() > 0 && p.A_le.cols() != n) throw ProblemError("solve_lp: A_le width");
  if (p.A_eq.rows() > 0 && p.A_eq.cols() != n) throw ProblemError("solve_lp: A_eq width");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(p.lower(j))) throw ProblemError("solve_lp: lower bounds must be finite");
    if (p.upper(j) < p.lower(j)) {
      LpResult r;
      r.status = LpStatus::kInfeasible;
      return r;
    }
  }

  // x = lower + x', x' >= 0. Rows: A_le, finite upper bounds (with slacks),
  // then equalities. Rows with negative rhs are negated.
  std::vector<int> upper_rows;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.upper(j))) upper_rows.push_back(j);
  }
  const auto n_le = p.A_le.rows() + static_cast<Eigen::Index>(upper_rows.size());
  const auto n_eq = p.A_eq.rows();
  const auto rows = n_le + n_eq;
  const auto cols = n + n_le;
  MatrixXd A = MatrixXd::Zero(rows, cols);
  VectorXd b(rows);
  for (Eigen::Index i = 0; i < p.A_le.rows(); ++i) {
    A.row(i).head(n) = p.A_le.row(i);
    b(i) = p.b_le(i) - p.A_le.row(i).dot(p.lower);
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const auto i = p.A_le.rows() + static_cast<Eigen::Index>(u);
    A(i, upper_rows[u]) = 1.0;
    b(i) = p.upper(upper_rows[u]) - p.lower(upper_rows[u]);
  }
  for (Eigen::Index i = 0; i < n_le; ++i) A(i, n + i) = 1.0;
  for (Eigen::Index i = 0; i < n_eq; ++i) {
    A.row(n_le + i).head(n) = p.A_eq.row(i);
    b(n_le + i) = p.b_eq(i) - p.A_eq.row(i).dot(p.lower);
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (b(i) < 0.0) {
      A.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }

  VectorXd c = VectorXd::Zero(cols);
  c.head(n) = p.c;
  LpResult best = solve_standard(A, b, c);
  if (best.status != LpStatus::kOptimal) return best;
  int pivots = best.pivots;

  // Lexicographic tie-break: pin the objective, then minimize x_0, x_1, ...
  MatrixXd Ak = A;
  VectorXd bk = b;
  VectorXd xk = best.x;
  auto append_le = [&](const VectorXd& row, double rhs) {
    // row . x' <= rhs with a fresh slack column.
    const auto r = Ak.rows();
    const auto cc = Ak.cols();
    MatrixXd next = MatrixXd::Zero(r + 1, cc + 1);
    next.topLeftCorner(r, cc) = Ak;
    next.row(r).head(row.size()) = row.transpose();
    next(r, cc) = 1.0;
    VectorXd nb(r + 1);
    nb.head(r) = bk;
    nb(r) = rhs;
    if (rhs < 0.0) {
      next.row(r) *= -1.0;
      nb(r) *= -1.0;
    }
    Ak = std::move(next);
    bk = std::move(nb);
  };
  const double tol = 1e-9 * (1.0 + std::abs(best.objective));
  append_le(c.head(cols), best.objective + tol);
  for (int j = 0; j < n; ++j) {
    VectorXd cj = VectorXd::Zero(Ak.cols());
    cj(j) = 1.0;
    LpResult r = solve_standard(Ak, bk, cj);
    pivots += r.pivots;
    if (r.status != LpStatus::kOptimal) break;
    xk = r.x.head(cols);
    VectorXd pin = VectorXd::Zero(j + 1);
    pin(j) = 1.0;
    append_le(pin, r.x(j) + 1e-9 * (1.0 + std::abs(r.x(j))));
  }

  LpResult out;
  out.status = LpStatus::kOptimal;
  out.x = xk.head(n) + p.lower;
  out.objective = p.c.dot(out.x);
  out.pivots = pivots;
  return out;
}

}  // namespace raq
