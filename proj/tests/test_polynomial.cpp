#include "mvf/polynomial.hpp"

#include <doctest.h>

#include "mvf/error.hpp"
#include "support.hpp"

using namespace mvf;
using test::random_point;
using test::random_polynomial;
using test::random_rational;

namespace {

Polynomial mono(int n, Exponents e, Rational c = Rational(1)) {
  return Polynomial::monomial(n, std::move(e), std::move(c));
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-3/2") == Rational(-3, 2));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational(" -0.5 ") == Rational(-1, 2));
  CHECK(rational_to_string(Rational(-3, 2)) == "-3/2");
  CHECK(rational_to_string(make_rational(4, 2)) == "2");
  CHECK_THROWS_AS(parse_rational("a/b"), parse_error);
  CHECK_THROWS_AS(parse_rational(""), parse_error);
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
}

TEST_CASE("canonical form and structural equality") {
  // duplicate exponents merge; zero coefficients vanish
  Polynomial p(2, {{{1, 1}, Rational(2)}, {{1, 1}, Rational(-2)}, {{2, 0}, Rational(1)}});
  CHECK(p.terms().size() == 1);
  CHECK(p == mono(2, {2, 0}));

  // graded lex: degree first
  Polynomial q = mono(2, {0, 3}) + mono(2, {1, 0});
  CHECK(q.terms().front().exps == Exponents{1, 0});
  CHECK(q.terms().back().exps == Exponents{0, 3});
  CHECK(q.total_degree() == 3);
  CHECK(q.lowest_degree() == 1);
}

TEST_CASE("formal partial derivatives") {
  // d(xy)/dx = y
  Polynomial xy = mono(2, {1, 1});
  CHECK(xy.partial(0) == mono(2, {0, 1}));

  // d(x^2 y + x^5)/dx = 2xy + 5x^4
  Polynomial p = mono(2, {2, 1}) + mono(2, {5, 0});
  CHECK(p.partial(0) == mono(2, {1, 1}, Rational(2)) + mono(2, {4, 0}, Rational(5)));

  CHECK(Polynomial::zero(2).partial(0).is_zero());
  CHECK_THROWS_AS(p.partial(2), domain_error);
  CHECK_THROWS_AS(p.partial(-1), domain_error);
}

TEST_CASE("partial derivative is linear and satisfies the product rule") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const Polynomial a = random_polynomial(rng, 3, 4, 4, false);
    const Polynomial b = random_polynomial(rng, 3, 4, 4, false);
    const int var = rng.uniform_int(0, 2);
    CHECK((a + b).partial(var) == a.partial(var) + b.partial(var));
    CHECK((a * b).partial(var) == a.partial(var) * b + a * b.partial(var));
  }
}

TEST_CASE("homogeneous decomposition") {
  Polynomial xy = mono(2, {1, 1});
  auto parts = xy.homogeneous_parts();
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].first == 2);
  CHECK(parts[0].second == xy);

  Polynomial p = mono(2, {2, 1}) + mono(2, {5, 0});
  parts = p.homogeneous_parts();
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].first == 3);
  CHECK(parts[1].first == 5);
  CHECK(parts[0].second == mono(2, {2, 1}));
  CHECK(parts[1].second == mono(2, {5, 0}));

  CHECK_THROWS_AS(Polynomial::zero(2).homogeneous_parts(), domain_error);
}

TEST_CASE("homogeneous parts sum back to the input") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Polynomial p = random_polynomial(rng, 4, 6, 6, false);
    Polynomial sum(4);
    for (const auto& [degree, part] : p.homogeneous_parts()) {
      CHECK(part.lowest_degree() == degree);
      CHECK(part.total_degree() == degree);
      sum = sum + part;
    }
    CHECK(sum == p);
  }
}

TEST_CASE("Euler residual vanishes") {
  Polynomial xy = mono(2, {1, 1});
  std::vector<double> p35{3.0, 5.0};
  CHECK(euler_residual(xy, p35) == doctest::Approx(0.0).epsilon(1e-14));

  Polynomial p = mono(2, {2, 1}) + mono(2, {5, 0});
  std::vector<double> ones{1.0, 1.0};
  CHECK(euler_residual(p, ones) == doctest::Approx(0.0).epsilon(1e-14));

  // exact arithmetic: identically zero on random rational data
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial q = random_polynomial(rng, 3, 5, 5, false);
    std::vector<Rational> point{random_rational(rng), random_rational(rng), random_rational(rng)};
    CHECK(euler_residual_exact(q, point) == Rational(0));
  }
}

TEST_CASE("evaluation agrees between exact and floating point") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial p = random_polynomial(rng, 3, 4, 5, false);
    std::vector<Rational> qpoint{random_rational(rng), random_rational(rng),
                                 random_rational(rng)};
    std::vector<double> dpoint;
    for (const auto& q : qpoint) dpoint.push_back(to_double(q));
    const double exact = to_double(p.eval_exact(qpoint));
    CHECK(p.eval(dpoint) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("printing uses variable names") {
  Polynomial p = mono(2, {1, 1}, Rational(-3, 2)) + mono(2, {0, 2});
  std::vector<std::string> names{"x", "y"};
  CHECK(p.to_string(names) == "-3/2*x*y + y^2");
  CHECK(Polynomial::zero(2).to_string(names) == "0");
}
