#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "raqswipt/errors.hpp"
#include "raqswipt/posynomial.hpp"

using namespace raq;

TEST_CASE("monomial algebra") {
  const Monomial x = Monomial::variable(0), y = Monomial::variable(1);
  const Monomial m = 3.0 * x * y.pow(2.0) / x;
  CHECK(m.exponents().size() == 1);
  CHECK(m.exponent(0) == 0.0);
  CHECK(m.exponent(1) == 2.0);
  const std::vector<double> v{5.0, 2.0};
  CHECK(m.eval(v) == doctest::Approx(12.0));
  CHECK(m.inverse().eval(v) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("posynomial sums and products") {
  const Monomial x = Monomial::variable(0), y = Monomial::variable(1);
  Posynomial p = Posynomial(x) + Posynomial(2.0 * y);
  Posynomial q = p * p;
  const std::vector<double> v{1.5, 0.25};
  CHECK(q.eval(v) == doctest::Approx(std::pow(1.5 + 0.5, 2)));
  CHECK((p * Monomial(4.0)).eval(v) == doctest::Approx(8.0));
}

TEST_CASE("problem validation") {
  GpProblem P;
  const int x = P.add_variable("x", 0.1, 10.0);
  P.objective = Monomial::variable(x);
  CHECK_NOTHROW(P.validate());
  P.add(Posynomial(Monomial(-1.0) * Monomial::variable(x)), Monomial(1.0));
  CHECK_THROWS_AS(P.validate(), ProblemError);

  GpProblem Q;
  Q.add_variable("y", 0.0, 1.0);
  Q.objective = Monomial::variable(0);
  CHECK_THROWS_AS(Q.validate(), ProblemError);

  GpProblem R;
  R.add_variable("z", 1.0, 2.0);
  R.objective = Monomial::variable(5);
  CHECK_THROWS_AS(R.validate(), ProblemError);
}

TEST_CASE("max violation and dump round trip") {
  GpProblem P;
  const int x = P.add_variable("x", 0.5, std::numeric_limits<double>::infinity());
  const int y = P.add_variable("y", 0.5, 4.0);
  P.objective = Monomial::variable(x, -1.0) * Monomial::variable(y, -1.0);
  P.add(Posynomial(Monomial::variable(x)) + Posynomial(Monomial::variable(y)), Monomial(3.0), "sum");
  P.add_equal(Monomial::variable(x), Monomial(2.0) * Monomial::variable(y, 0.5), "link");
  const std::vector<double> v{2.0, 1.0};
  CHECK(P.max_violation(v) == doctest::Approx(0.0).epsilon(1e-12));
  const std::vector<double> w{2.5, 1.0};
  CHECK(P.max_violation(w) == doctest::Approx(0.25));

  std::stringstream ss;
  write_problem(ss, P);
  const GpProblem back = read_problem(ss);
  CHECK(back.num_vars() == 2);
  CHECK(back.inequalities.size() == 1);
  CHECK(back.equalities.size() == 1);
  CHECK(std::isinf(back.upper[0]));
  for (const auto& pt : {v, w}) {
    CHECK(back.objective.eval(pt) == doctest::Approx(P.objective.eval(pt)));
    CHECK(back.max_violation(pt) == doctest::Approx(P.max_violation(pt)));
  }
}
