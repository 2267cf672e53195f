#include "mvf/germ.hpp"

#include <doctest.h>

#include <cmath>

#include "mvf/error.hpp"
#include "support.hpp"

using namespace mvf;
using test::cone_germ;
using test::cone_point;
using test::data_path;
using test::random_germ;
using test::random_point;

TEST_CASE("germ document parsing and round trip") {
  const PolyMapGerm germ = load_germ_file(data_path("germs/xy_xz.json"));
  CHECK(germ.num_vars() == 3);
  CHECK(germ.num_components() == 2);
  CHECK(germ.var_names() == std::vector<std::string>{"x", "y", "z"});
  CHECK(germ.component(0) == cone_germ().component(0));

  const std::string serialized = serialize_germ(germ);
  const PolyMapGerm reparsed = parse_germ(serialized);
  CHECK(serialize_germ(reparsed) == serialized);
}

TEST_CASE("germ document errors") {
  CHECK_THROWS_AS(parse_germ("not json"), parse_error);
  // p > m or empty
  CHECK_THROWS_AS(parse_germ(R"({"kind":"real","vars":[],"components":[]})"), parse_error);
  CHECK_THROWS_AS(
      parse_germ(
          R"({"kind":"real","vars":["x"],"components":[[{"coef":"1","exps":[1]}],[{"coef":"1","exps":[2]}]]})"),
      parse_error);
  // nonzero constant term
  CHECK_THROWS_AS(
      parse_germ(R"({"kind":"real","vars":["x"],"components":[[{"coef":"1","exps":[0]}]]})"),
      parse_error);
  // zero polynomial component
  CHECK_THROWS_AS(parse_germ(R"({"kind":"real","vars":["x"],"components":[[]]})"), parse_error);
  // wrong exponent arity
  CHECK_THROWS_AS(
      parse_germ(R"({"kind":"real","vars":["x","y"],"components":[[{"coef":"1","exps":[1]}]]})"),
      parse_error);
  // wrong kind
  CHECK_THROWS_AS(
      parse_germ(R"({"kind":"mixed","vars":["x"],"components":[[{"coef":"1","exps":[1]}]]})"),
      parse_error);
}

TEST_CASE("eight-variable germ document") {
  const PolyMapGerm germ = load_germ_file(data_path("germs/lmap8.json"));
  CHECK(germ.num_vars() == 8);
  CHECK(germ.num_components() == 2);
  CHECK(germ.multiplicities() == std::vector<int>{2, 2});
}

TEST_CASE("eval frame at the reference Milnor point") {
  const PolyMapGerm germ = cone_germ();
  const Eigen::VectorXd p = cone_point();
  const EvalFrame frame = germ.eval_frame(p);
  const double s2 = std::sqrt(2.0);

  CHECK(frame.values[0] == doctest::Approx(s2).epsilon(1e-14));
  CHECK(frame.values[1] == doctest::Approx(s2).epsilon(1e-14));

  Eigen::MatrixXd expected_jac(2, 3);
  expected_jac << 1, s2, 0, 1, 0, s2;
  CHECK((frame.jacobian - expected_jac).norm() == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::VectorXd expected_gn(3);
  expected_gn << 4 * s2, 4, 4;
  CHECK((frame.grad_norm_sq - expected_gn).norm() == doctest::Approx(0.0).epsilon(1e-13));
  CHECK((frame.grad_rho - 2.0 * p).norm() == 0.0);
}

TEST_CASE("eval frame on the singular axis and at the origin") {
  const PolyMapGerm germ = cone_germ();

  Eigen::VectorXd e1(3);
  e1 << 1, 0, 0;
  const EvalFrame frame = germ.eval_frame(e1);
  CHECK(frame.values.norm() == 0.0);
  Eigen::MatrixXd expected(2, 3);
  expected << 0, 1, 0, 0, 0, 1;
  CHECK((frame.jacobian - expected).norm() == 0.0);

  const EvalFrame at0 = germ.eval_frame(Eigen::VectorXd::Zero(3));
  CHECK(at0.values.norm() == 0.0);
  CHECK(at0.grad_rho.norm() == 0.0);

  Eigen::VectorXd bad(2);
  bad << 1, 2;
  CHECK_THROWS_AS(germ.eval_frame(bad), domain_error);
}

TEST_CASE("grad ||G||^2 matches twice the Jacobian-weighted values") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const PolyMapGerm germ = random_germ(rng, 4, rng.uniform_int(1, 3), 4);
    const Eigen::VectorXd x = random_point(rng, 4);
    const EvalFrame frame = germ.eval_frame(x);
    const Eigen::VectorXd direct = 2.0 * frame.jacobian.transpose() * frame.values;
    const double scale = 1.0 + direct.norm();
    CHECK((frame.grad_norm_sq - direct).norm() <= 1e-10 * scale);
  }
}

TEST_CASE("finite-difference Jacobian oracle") {
  const PolyMapGerm germ = cone_germ();
  const Eigen::VectorXd p = cone_point();

  const Eigen::MatrixXd fd = fd_jacobian_oracle(germ, p, 1e-5);
  const Eigen::MatrixXd exact = germ.eval_jacobian(p);
  CHECK((fd - exact).norm() / exact.norm() < 1e-6);

  // linear germ: the central difference is exact up to round-off
  const PolyMapGerm linear = load_germ_file(data_path("germs/linear_xy.json"));
  const Eigen::MatrixXd fd_lin = fd_jacobian_oracle(linear, p, 1e-5);
  const Eigen::MatrixXd exact_lin = linear.eval_jacobian(p);
  CHECK((fd_lin - exact_lin).norm() < 1e-10);

  // at the origin the Jacobian of (xy, xz) vanishes
  const Eigen::MatrixXd fd0 = fd_jacobian_oracle(germ, Eigen::VectorXd::Zero(3), 1e-5);
  CHECK(fd0.norm() < 1e-4);

  CHECK_THROWS_AS(fd_jacobian_oracle(germ, p, 0.0), domain_error);
}

TEST_CASE("multiplicities and the Euler excess weights") {
  const PolyMapGerm germ = cone_germ();
  CHECK(germ.multiplicities() == std::vector<int>{2, 2});
  CHECK(germ.min_multiplicity() == 2);
  CHECK(germ.euler_excess(0).is_zero());  // homogeneous component

  Polynomial inhom = Polynomial::monomial(1, {2}, Rational(1)) +
                     Polynomial::monomial(1, {5}, Rational(3));
  const PolyMapGerm single({inhom});
  // excess of 3 x^5 above degree 2 is (5-2) * 3 x^5
  CHECK(single.euler_excess(0) == Polynomial::monomial(1, {5}, Rational(9)));
}
