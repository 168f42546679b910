#include "raqswipt/posynomial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "raqswipt/errors.hpp"

namespace raq {

Monomial::Monomial(double coeff) : coeff_(coeff) {}

Monomial::Monomial(double coeff, std::vector<std::pair<int, double>> exponents)
    : coeff_(coeff), exps_(std::move(exponents)) {
  normalize();
}

Monomial Monomial::variable(int id, double power) { return Monomial(1.0, {{id, power}}); }

double Monomial::exponent(int id) const {
  auto it = std::lower_bound(exps_.begin(), exps_.end(), std::make_pair(id, -std::numeric_limits<double>::infinity()));
  return it != exps_.end() && it->first == id ? it->second : 0.0;
}

void Monomial::normalize() {
  std::sort(exps_.begin(), exps_.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> merged;
  for (const auto& [id, a] : exps_) {
    if (!merged.empty() && merged.back().first == id) {
      merged.back().second += a;
    } else {
      merged.emplace_back(id, a);
    }
  }
  std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });
  exps_ = std::move(merged);
}

Monomial& Monomial::operator*=(const Monomial& other) {
  coeff_ *= other.coeff_;
  exps_.insert(exps_.end(), other.exps_.begin(), other.exps_.end());
  normalize();
  return *this;
}

Monomial& Monomial::operator*=(double c) {
  coeff_ *= c;
  return *this;
}

Monomial Monomial::pow(double power) const {
  Monomial m(std::pow(coeff_, power), exps_);
  for (auto& e : m.exps_) e.second *= power;
  m.normalize();
  return m;
}

double Monomial::eval(std::span<const double> x) const {
  double v = coeff_;
  for (const auto& [id, a] : exps_) v *= std::pow(x[id], a);
  return v;
}

Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }
Monomial operator*(Monomial a, double c) { return a *= c; }
Monomial operator*(double c, Monomial a) { return a *= c; }
Monomial operator/(Monomial a, const Monomial& b) { return a *= b.inverse(); }

Posynomial::Posynomial(Monomial m) { terms_.push_back(std::move(m)); }

Posynomial& Posynomial::operator+=(const Monomial& m) {
  terms_.push_back(m);
  return *this;
}

Posynomial& Posynomial::operator+=(const Posynomial& p) {
  terms_.insert(terms_.end(), p.terms_.begin(), p.terms_.end());
  return *this;
}

Posynomial& Posynomial::operator*=(const Monomial& m) {
  for (auto& t : terms_) t *= m;
  return *this;
}

double Posynomial::eval(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.eval(x);
  return v;
}

Posynomial operator+(Posynomial a, const Posynomial& b) { return a += b; }
Posynomial operator*(Posynomial a, const Monomial& m) { return a *= m; }

Posynomial operator*(const Posynomial& a, const Posynomial& b) {
  Posynomial out;
  for (const auto& s : a.terms()) {
    for (const auto& t : b.terms()) out += s * t;
  }
  return out;
}

int GpProblem::add_variable(std::string name, double lo, double hi) {
  names.push_back(std::move(name));
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

void GpProblem::add(Posynomial lhs, Monomial rhs, std::string label) {
  inequalities.push_back({std::move(lhs), std::move(rhs), std::move(label)});
}

void GpProblem::add_equal(Monomial lhs, Monomial rhs, std::string label) {
  equalities.push_back({std::move(lhs), std::move(rhs), std::move(label)});
}

namespace {

void check_monomial(const Monomial& m, int n, const std::string& where) {
  if (!(m.coeff() > 0.0) || !std::isfinite(m.coeff())) {
    throw ProblemError(where + ": coefficient must be positive and finite");
  }
  for (const auto& [id, a] : m.exponents()) {
    if (id < 0 || id >= n) throw ProblemError(where + ": variable id out of range");
    if (!std::isfinite(a)) throw ProblemError(where + ": non-finite exponent");
  }
}

void check_posynomial(const Posynomial& p, int n, const std::string& where) {
  if (p.empty()) throw ProblemError(where + ": empty posynomial");
  for (const auto& t : p.terms()) check_monomial(t, n, where);
}

}  // namespace

void GpProblem::validate() const {
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw ProblemError("bounds size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (!(lower[i] > 0.0) || !(upper[i] >= lower[i])) {
      throw ProblemError("variable '" + names[i] + "': need 0 < lower <= upper");
    }
  }
  check_posynomial(objective, n, "objective");
  for (const auto& c : inequalities) {
    check_posynomial(c.lhs, n, "constraint " + c.label);
    check_monomial(c.rhs, n, "constraint " + c.label);
  }
  for (const auto& c : equalities) {
    check_monomial(c.lhs, n, "equality " + c.label);
    check_monomial(c.rhs, n, "equality " + c.label);
  }
}

double GpProblem::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (const auto& c : inequalities) worst = std::max(worst, c.lhs.eval(x) / c.rhs.eval(x) - 1.0);
  for (const auto& c : equalities) {
    worst = std::max(worst, std::abs(c.lhs.eval(x) / c.rhs.eval(x) - 1.0));
  }
  for (int i = 0; i < num_vars(); ++i) {
    worst = std::max(worst, lower[i] / x[i] - 1.0);
    if (std::isfinite(upper[i])) worst = std::max(worst, x[i] / upper[i] - 1.0);
  }
  return worst;
}

namespace {

void write_monomial(std::ostream& out, const Monomial& m) {
  out << m.coeff();
  for (const auto& [id, a] : m.exponents()) out << ' ' << id << ':' << a;
}

void write_posynomial(std::ostream& out, const Posynomial& p) {
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    if (i > 0) out << " | ";
    write_monomial(out, p.terms()[i]);
  }
}

Monomial parse_monomial(const std::string& text) {
  std::istringstream in(text);
  double coeff = 0.0;
  if (!(in >> coeff)) throw ProblemError("dump: missing coefficient in '" + text + "'");
  std::vector<std::pair<int, double>> exps;
  std::string tok;
  while (in >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw ProblemError("dump: bad term '" + tok + "'");
    exps.emplace_back(std::stoi(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
  }
  return Monomial(coeff, std::move(exps));
}

Posynomial parse_posynomial(const std::string& text) {
  Posynomial p;
  std::size_t start = 0;
  for (;;) {
    const auto bar = text.find('|', start);
    p += parse_monomial(text.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return p;
}

std::pair<std::string, std::string> split_sides(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw ProblemError("dump: constraint without ';'");
  return {text.substr(0, semi), text.substr(semi + 1)};
}

}  // namespace

void write_problem(std::ostream& out, const GpProblem& problem) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "vars " << problem.num_vars() << '\n';
  for (int i = 0; i < problem.num_vars(); ++i) {
    out << "var " << problem.names[i] << ' ' << problem.lower[i] << ' ' << problem.upper[i] << '\n';
  }
  out << "obj ";
  write_posynomial(out, problem.objective);
  out << '\n';
  for (const auto& c : problem.inequalities) {
    out << "le ";
    write_posynomial(out, c.lhs);
    out << " ; ";
    write_monomial(out, c.rhs);
    out << '\n';
  }
  for (const auto& c : problem.equalities) {
    out << "eq ";
    write_monomial(out, c.lhs);
    out << " ; ";
    write_monomial(out, c.rhs);
    out << '\n';
  }
  out.precision(old_precision);
}

GpProblem read_problem(std::istream& in) {
  GpProblem p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    std::string rest;
    std::getline(ls, rest);
    if (kind == "vars") {
      continue;
    } else if (kind == "var") {
      std::istringstream vs(rest);
      std::string name, lo, hi;
      if (!(vs >> name >> lo >> hi)) throw ProblemError("dump: bad var line");
      p.add_variable(name, std::stod(lo), std::stod(hi));
    } else if (kind == "obj") {
      p.objective = parse_posynomial(rest);
    } else if (kind == "le") {
      auto [lhs, rhs] = split_sides(rest);
      p.add(parse_posynomial(lhs), parse_monomial(rhs));
    } else if (kind == "eq") {
      auto [lhs, rhs] = split_sides(rest);
      p.add_equal(parse_monomial(lhs), parse_monomial(rhs));
    } else {
      throw ProblemError("dump: unknown line kind '" + kind + "'");
    }
  }
  p.validate();
  return p;
}

}  // namespace raq
