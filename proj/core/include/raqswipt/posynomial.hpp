#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace raq {

/// coeff * prod_i x_i^{a_i}, exponents kept sorted by variable id with no
/// duplicates or zero powers.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(double coeff);
  Monomial(double coeff, std::vector<std::pair<int, double>> exponents);

  static Monomial variable(int id, double power = 1.0);

  double coeff() const { return coeff_; }
  const std::vector<std::pair<int, double>>& exponents() const { return exps_; }
  double exponent(int id) const;

  Monomial& operator*=(const Monomial& other);
  Monomial& operator*=(double c);
  Monomial pow(double power) const;
  Monomial inverse() const { return pow(-1.0); }

  double eval(std::span<const double> x) const;

 private:
  void normalize();

  double coeff_ = 1.0;
  std::vector<std::pair<int, double>> exps_;
};

Monomial operator*(Monomial a, const Monomial& b);
Monomial operator*(Monomial a, double c);
Monomial operator*(double c, Monomial a);
Monomial operator/(Monomial a, const Monomial& b);

/// Sum of monomials. Empty means zero, which a GP constraint never allows.
class Posynomial {
 public:
  Posynomial() = default;
  Posynomial(Monomial m);  // NOLINT(google-explicit-constructor)

  const std::vector<Monomial>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Posynomial& operator+=(const Monomial& m);
  Posynomial& operator+=(const Posynomial& p);
  Posynomial& operator*=(const Monomial& m);

  double eval(std::span<const double> x) const;

 private:
  std::vector<Monomial> terms_;
};

Posynomial operator+(Posynomial a, const Posynomial& b);
Posynomial operator*(Posynomial a, const Monomial& m);
Posynomial operator*(const Posynomial& a, const Posynomial& b);

/// lhs <= rhs, i.e. lhs / rhs <= 1.
struct GpInequality {
  Posynomial lhs;
  Monomial rhs;
  std::string label;
};

/// lhs == rhs.
struct GpEquality {
  Monomial lhs;
  Monomial rhs;
  std::string label;
};

/// minimize objective subject to inequalities, equalities and a positive box.
struct GpProblem {
  std::vector<std::string> names;
  std::vector<double> lower;  // > 0
  std::vector<double> upper;  // may be +inf
  Posynomial objective;
  std::vector<GpInequality> inequalities;
  std::vector<GpEquality> equalities;

  int num_vars() const { return static_cast<int>(names.size()); }
  int add_variable(std::string name, double lo, double hi);
  void add(Posynomial lhs, Monomial rhs, std::string label = {});
  void add_equal(Monomial lhs, Monomial rhs, std::string label = {});

  /// Throws ProblemError on non-positive coefficients, bad ids or bounds.
  void validate() const;

  /// Largest relative violation max(lhs/rhs - 1), including equalities and
  /// the box, at x.
  double max_violation(std::span<const double> x) const;
};

/// Text dump: a header line "vars N", one "var name lo hi" line per
/// variable, then "obj", "le" and "eq" lines. Each posynomial is a list of
/// terms "coeff id:exp id:exp" separated by '|'; "le" and "eq" lines hold
/// "lhs ; rhs".
void write_problem(std::ostream& out, const GpProblem& problem);
GpProblem read_problem(std::istream& in);

}  // namespace raq
