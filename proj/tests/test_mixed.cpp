#include "mvf/mixed.hpp"

#include <doctest.h>

#include <complex>

#include "mvf/error.hpp"
#include "support.hpp"

using namespace mvf;
using test::data_path;
using test::random_cpoint;
using test::random_mixed;

namespace {

MixedPolynomial mono1(Exponents z, Exponents zb, ComplexRational c = {Rational(1), Rational(0)}) {
  const int n = static_cast<int>(z.size());
  return MixedPolynomial(n, {MixedTerm{std::move(z), std::move(zb), c}});
}

constexpr std::complex<double> I{0.0, 1.0};

}  // namespace

TEST_CASE("Wirtinger frames of the basic examples") {
  Eigen::VectorXcd z1(1);

  // f = z^2 at 1+i: holomorphic, dbar f = 0
  z1[0] = std::complex<double>(1, 1);
  const auto f1 = wirtinger_frame(mono1({2}, {0}), z1);
  CHECK(std::abs(f1.dholo[0] - (2.0 + 2.0 * I)) < 1e-14);
  CHECK(std::abs(f1.dantiholo[0]) == 0.0);

  // f = z zbar at 1+i: df = conj(z), dbar f = z
  const auto f2 = wirtinger_frame(mono1({1}, {1}), z1);
  CHECK(std::abs(f2.dholo[0] - (1.0 - 1.0 * I)) < 1e-14);
  CHECK(std::abs(f2.dantiholo[0] - (1.0 + 1.0 * I)) < 1e-14);

  // f = z + zbar^2 at 1: pairing = conj(1) * conj(2) = 2
  z1[0] = 1.0;
  const auto f3 = wirtinger_frame(mono1({1}, {0}) + mono1({0}, {2}), z1);
  CHECK(std::abs(f3.dholo[0] - 1.0) < 1e-14);
  CHECK(std::abs(f3.dantiholo[0] - 2.0) < 1e-14);
  CHECK(std::abs(f3.pairing - 2.0) < 1e-14);
}

TEST_CASE("realification of the basic examples") {
  // z^2 -> (x^2 - y^2, 2xy)
  const PolyMapGerm r = realify(mono1({2}, {0}), {"z"});
  const Polynomial x2 = Polynomial::monomial(2, {2, 0}, Rational(1));
  const Polynomial y2 = Polynomial::monomial(2, {0, 2}, Rational(1));
  const Polynomial xy = Polynomial::monomial(2, {1, 1}, Rational(1));
  CHECK(r.component(0) == x2 - y2);
  CHECK(r.component(1) == xy.scaled(Rational(2)));
  CHECK(r.var_names() == std::vector<std::string>{"z_re", "z_im"});

  // z zbar -> (x^2 + y^2, 0); the zero component is not a germ component
  const auto [u, v] = realify_parts(mono1({1}, {1}));
  CHECK(u == x2 + y2);
  CHECK(v.is_zero());
  CHECK_THROWS_AS(realify(mono1({1}, {1})), domain_error);
}

TEST_CASE("realified gradients match the Wirtinger identifications") {
  // grad u = conj(df) + dbar f and grad v = i (conj(df) - dbar f)
  SplitMix64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.uniform_int(1, 3);
    const MixedPolynomial f = random_mixed(rng, n, 3, 4);
    auto [u, v] = realify_parts(f);
    const Eigen::VectorXcd z = random_cpoint(rng, n);
    const Eigen::VectorXd x = realify_point(z);
    const std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
    const WirtingerFrame frame = wirtinger_frame(f, z);

    const int degree = f.total_degree();
    const double scale = 1.0 + std::pow(x.norm(), degree);
    for (int j = 0; j < n; ++j) {
      const std::complex<double> grad_u(u.partial(2 * j).eval(xs), u.partial(2 * j + 1).eval(xs));
      const std::complex<double> grad_v(v.partial(2 * j).eval(xs), v.partial(2 * j + 1).eval(xs));
      const std::complex<double> expected_u = std::conj(frame.dholo[j]) + frame.dantiholo[j];
      const std::complex<double> expected_v =
          I * (std::conj(frame.dholo[j]) - frame.dantiholo[j]);
      CHECK(std::abs(grad_u - expected_u) <= 1e-10 * scale);
      CHECK(std::abs(grad_v - expected_v) <= 1e-10 * scale);
    }

    // value identification too
    const std::complex<double> via_real(u.eval(xs), v.eval(xs));
    CHECK(std::abs(via_real - frame.value) <= 1e-10 * scale);
  }
}

TEST_CASE("realified components expose the lowest homogeneous degree") {
  // z1^4 - z3 over C^2 as the holomorphic block piece: the real part starts
  // at degree 1 because of the -x3 term
  MixedPolynomial f = mono1({4, 0}, {0, 0}) - mono1({0, 1}, {0, 0});
  auto [u, v] = realify_parts(f);
  CHECK(u.lowest_degree() == 1);
  CHECK(u.total_degree() == 4);
  const auto parts = u.homogeneous_parts();
  CHECK(parts.front().first == 1);
}

TEST_CASE("realification preserves the total degree") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    const MixedPolynomial f = random_mixed(rng, 2, 4, 4);
    auto [u, v] = realify_parts(f);
    const int du = u.is_zero() ? -1 : u.total_degree();
    const int dv = v.is_zero() ? -1 : v.total_degree();
    CHECK(std::max(du, dv) == f.total_degree());
  }
}

TEST_CASE("MSL check") {
  // holomorphic functions pass in both modes
  SplitMix64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const MixedPolynomial f = random_mixed(rng, rng.uniform_int(1, 3), 4, 4, true);
    CHECK(f.is_holomorphic());
    CHECK(msl_check(f, MslMode::full).ok);
    CHECK(msl_check(f, MslMode::im_only).ok);
  }

  // the four-variable example passes the full check
  const MixedInput msl4 = load_mixed_file(data_path("mixed/msl4.json"));
  CHECK(msl_check(msl4.poly, MslMode::full).ok);

  // f = z + zbar^2 fails with pairing witness 2z
  const MixedPolynomial bad = mono1({1}, {0}) + mono1({0}, {2});
  const MslVerdict verdict = msl_check(bad, MslMode::full);
  CHECK_FALSE(verdict.ok);
  CHECK(verdict.witness == "(2)*z1");

  // full implies im_only on random mixed functions
  for (int trial = 0; trial < 30; ++trial) {
    const MixedPolynomial f = random_mixed(rng, 2, 3, 4);
    if (msl_check(f, MslMode::full).ok) CHECK(msl_check(f, MslMode::im_only).ok);
  }
}

TEST_CASE("MSL generation") {
  // the documented four-variable construction
  const MslRecipe recipe = load_recipe_file(data_path("recipes/msl4.json"));
  const MixedPolynomial generated = msl_generate(recipe);
  const MixedInput msl4 = load_mixed_file(data_path("mixed/msl4.json"));
  CHECK(generated == msl4.poly);
  CHECK(msl_check(generated, MslMode::full).ok);

  // single bilinear pair z1 conj(z2)
  MslRecipe simple;
  simple.n = 2;
  simple.block = {0};
  simple.f = {Polynomial::variable(1, 0)};
  simple.g = {Polynomial::variable(1, 0)};
  CHECK(msl_generate(simple) == mono1({1, 0}, {0, 1}));

  // wrong-block arity is rejected
  CHECK_THROWS_AS(load_recipe_file(data_path("recipes/bad_block.json")), parse_error);

  // random recipes always pass the exact full check
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const MslRecipe r = random_recipe(4, 2, 3, seed);
    CHECK(msl_check(msl_generate(r), MslMode::full).ok);
  }
}

TEST_CASE("separable products") {
  const MixedPolynomial f = mono1({1}, {0});  // f(y) = y
  const MixedPolynomial g = mono1({1}, {1});  // g(x) = x conj(x)
  const MixedPolynomial F = separable_product(f, g);
  CHECK(F == mono1({1, 1}, {0, 1}));

  CHECK(separable_product(mono1({1}, {0}), mono1({1}, {0})) == mono1({1, 1}, {0, 0}));
  CHECK(separable_product(mono1({2}, {0}), mono1({0}, {1})) == mono1({2, 0}, {0, 1}));
}

TEST_CASE("separable product identities") {
  const MixedPolynomial f = mono1({1}, {0});
  const MixedPolynomial g = mono1({1}, {1});

  Eigen::VectorXcd point(2);
  point << std::complex<double>(2, 0), std::complex<double>(1, 1);  // (y, x) blocks
  const auto res = product_identity_residuals(f, g, point);
  CHECK(res.grad_residual <= 1e-10 * (1.0 + res.grad_scale));
  CHECK(res.omega_residual <= 1e-10 * (1.0 + res.omega_scale));

  // bilinear case: the expansion is exact
  const MixedPolynomial z1 = mono1({1}, {0});
  Eigen::VectorXcd q(2);
  q << std::complex<double>(0.3, -0.4), std::complex<double>(-1.2, 0.9);
  const auto bi = product_identity_residuals(z1, z1, q);
  CHECK(bi.grad_residual <= 1e-12 * (1.0 + bi.grad_scale));
  CHECK(bi.omega_residual <= 1e-12 * (1.0 + bi.omega_scale));

  // random mixed factors
  SplitMix64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const MixedPolynomial a = random_mixed(rng, rng.uniform_int(1, 2), 3, 3);
    const MixedPolynomial b = random_mixed(rng, rng.uniform_int(1, 2), 3, 3);
    const Eigen::VectorXcd z = random_cpoint(rng, a.num_cvars() + b.num_cvars());
    const auto r = product_identity_residuals(a, b, z);
    CHECK(r.grad_residual <= 1e-10 * (1.0 + r.grad_scale));
    CHECK(r.omega_residual <= 1e-10 * (1.0 + r.omega_scale));
  }
}

TEST_CASE("mixed document parsing") {
  const MixedInput in = load_mixed_file(data_path("mixed/z_plus_zbar2.json"));
  CHECK(in.poly.num_cvars() == 1);
  CHECK(in.poly.terms().size() == 2);
  const std::string serialized = serialize_mixed(in.poly, in.cvar_names);
  CHECK(serialize_mixed(parse_mixed(serialized).poly, in.cvar_names) == serialized);

  CHECK_THROWS_AS(parse_mixed(R"({"kind":"mixed","cvars":["z"],"terms":[]})"), parse_error);
  CHECK_THROWS_AS(
      parse_mixed(
          R"({"kind":"mixed","cvars":["z"],"terms":[{"coef":["1","0"],"zexp":[0],"zbarexp":[0]}]})"),
      parse_error);
}
