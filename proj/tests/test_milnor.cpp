#include "mvf/milnor.hpp"

#include <doctest.h>

#include <cmath>

#include "mvf/error.hpp"
#include "support.hpp"

using namespace mvf;
using test::cone_germ;
using test::cone_point;
using test::data_path;

namespace {

MixedPolynomial mixed_mono(Exponents z, Exponents zb) {
  const int n = static_cast<int>(z.size());
  return MixedPolynomial(n, {MixedTerm{std::move(z), std::move(zb), {Rational(1), Rational(0)}}});
}

}  // namespace

TEST_CASE("Milnor residual at reference points") {
  const PolyMapGerm germ = cone_germ();

  // P is on the Milnor set: grad rho lies in the row space exactly
  const auto at_p = milnor_residual(germ, cone_point());
  CHECK(at_p.residual < 1e-12);
  CHECK(at_p.sing_gap > 0.5);

  // (1,0,0): grad rho = (2,0,0) orthogonal to rowspace span{e2,e3}
  Eigen::VectorXd e1(3);
  e1 << 1, 0, 0;
  const auto at_e1 = milnor_residual(germ, e1);
  CHECK(at_e1.residual == doctest::Approx(1.0).epsilon(1e-12));

  // (0,y,z): the Jacobian rows are parallel, the rank gap flags it
  Eigen::VectorXd sing(3);
  sing << 0, 0.3, 0.4;
  const auto at_sing = milnor_residual(germ, sing);
  CHECK(at_sing.sing_gap < 1e-9 * germ.eval_jacobian(sing).norm());

  CHECK_THROWS_AS(milnor_residual(germ, Eigen::VectorXd::Zero(3)), domain_error);
}

TEST_CASE("D and M matrices at the reference point") {
  const PolyMapGerm germ = cone_germ();
  const auto dm = build_D_M(germ, cone_point());

  Eigen::Matrix2d expected_d;
  expected_d << 32, 0, 0, 8;
  Eigen::Matrix2d expected_m;
  expected_m << 64, 0, 0, 8;
  CHECK((dm.D - expected_d).norm() < 1e-9);
  CHECK((dm.M - expected_m).norm() < 1e-9);
  CHECK(dm.D.determinant() == doctest::Approx(256.0).epsilon(1e-10));
  CHECK(dm.M.determinant() == doctest::Approx(512.0).epsilon(1e-10));

  // V_G point rejected
  Eigen::VectorXd e1(3);
  e1 << 1, 0, 0;
  CHECK_THROWS_AS(build_D_M(germ, e1), domain_error);

  // Sing proxy rejected
  Eigen::VectorXd sing(3);
  sing << 0, 0.3, 0.4;
  CHECK_THROWS_AS(build_D_M(germ, sing), domain_error);
}

TEST_CASE("omega vectors live in the row space of the Jacobian") {
  const PolyMapGerm germ = cone_germ();
  const AnalysisPoint ap = analyze_point(germ, cone_point());
  REQUIRE(ap.omegas.rows() == 1);
  Eigen::VectorXd expected(3);
  expected << 0, -2, 2;
  CHECK((ap.omegas.row(0).transpose() - expected).norm() < 1e-12);

  // row-space membership: express the omega in the Jacobian rows
  const Eigen::MatrixXd jac = ap.frame.jacobian;
  const Eigen::VectorXd omega = ap.omegas.row(0);
  const Eigen::VectorXd coeffs =
      jac.transpose().jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(omega);
  const double scale = omega.norm();
  CHECK((jac.transpose() * coeffs - omega).norm() <= 1e-10 * scale);
}

TEST_CASE("a(x) by every route at the reference point") {
  const PolyMapGerm germ = cone_germ();
  const Eigen::VectorXd p = cone_point();
  for (ARoute route :
       {ARoute::cramer, ARoute::alpha, ARoute::matrix_identity, ARoute::leading_term}) {
    CHECK(a_coefficient(germ, p, route) == doctest::Approx(0.5).epsilon(1e-10));
  }

  // off the Milnor set the coefficient is undefined
  Eigen::VectorXd off(3);
  off << 0.3, 0.1, 0.0;
  REQUIRE(milnor_residual(germ, off).residual > 1e-3);
  CHECK_THROWS_AS(a_coefficient(germ, off, ARoute::cramer), domain_error);
}

TEST_CASE("Newton sampling lands on the cone x^2 = y^2 + z^2") {
  const PolyMapGerm germ = cone_germ();
  for (double radius : {1e-1, 1e-2}) {
    const auto samples = sample_milnor_set(germ, radius, 60, 1e-9, 7);
    CHECK(samples.size() >= 20);
    for (const auto& ap : samples) {
      const auto& x = ap.frame.point;
      CHECK(std::abs(x.norm() - radius) <= radius * 1e-9);
      CHECK(std::abs(x[0] * x[0] - x[1] * x[1] - x[2] * x[2]) < 1e-9);
      CHECK(ap.milnor_residual < 1e-9);
      CHECK_FALSE(ap.on_v_proxy);
      CHECK_FALSE(ap.on_sing_proxy);
      // on the cone ||G|| = r^2/2 exactly
      CHECK(ap.frame.values.norm() == doctest::Approx(radius * radius / 2).epsilon(1e-8));
    }
  }
  CHECK(sample_milnor_set(germ, 0.1, 0, 1e-9, 7).empty());
}

TEST_CASE("route agreement and positivity on sampled points") {
  const PolyMapGerm germ = cone_germ();
  const auto samples = sample_milnor_set(germ, 1e-2, 40, 1e-9, 3);
  REQUIRE(!samples.empty());
  for (const auto& ap : samples) {
    const double a_cramer = ap.a_values.at("cramer");
    const double a_alpha = ap.a_values.at("alpha");
    const double a_matrix = ap.a_values.at("matrix");
    const double a_leading = ap.a_values.at("leading");
    CHECK(a_cramer > 0);
    CHECK(std::abs(a_cramer - a_alpha) <= 1e-8 * (1 + std::abs(a_cramer)));
    CHECK(std::abs(a_cramer - a_matrix) <= 1e-8 * (1 + std::abs(a_cramer)));
    // homogeneous equal-degree germ: no higher-order tail
    CHECK(std::abs(a_leading - a_alpha) <= 1e-10 * (1 + std::abs(a_alpha)));
    CHECK(ap.det_M > 0);
    CHECK(ap.radial_pairing() > 0);
  }
}

TEST_CASE("chart independence where both charts are usable") {
  const PolyMapGerm germ = cone_germ();
  const auto samples = sample_milnor_set(germ, 1e-1, 40, 1e-9, 11);
  int checked = 0;
  for (const auto& ap : samples) {
    const auto& values = ap.frame.values;
    const double norm_g = values.norm();
    if (std::abs(values[0]) < 0.1 * norm_g || std::abs(values[1]) < 0.1 * norm_g) continue;
    const double a0 = a_coefficient(germ, ap.frame.point, ARoute::cramer, {}, 0);
    const double a1 = a_coefficient(germ, ap.frame.point, ARoute::cramer, {}, 1);
    CHECK(std::abs(a0 - a1) <= 1e-8 * (1 + std::abs(a0)));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("the linear germ's Milnor set is the plane z = 0") {
  // For G = (x, y) on R^3 the Gram determinant of {grad rho, e1, e2} is
  // proportional to z^2, so the Milnor set is {z = 0} and every sampled
  // point sits on the circle x^2 + y^2 = r^2 with ||G|| = r.
  const PolyMapGerm germ = load_germ_file(data_path("germs/linear_xy.json"));
  const double radius = 1e-2;
  const auto samples = sample_milnor_set(germ, radius, 40, 1e-9, 5);
  CHECK(samples.size() >= 20);
  for (const auto& ap : samples) {
    CHECK(std::abs(ap.frame.point[2]) < radius * 1e-8);
    CHECK(ap.frame.values.norm() == doctest::Approx(radius).epsilon(1e-10));
    CHECK(ap.a_values.at("alpha") == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("structural criteria") {
  const StructuralCriteria cone = check_structural_criteria(cone_germ());
  CHECK(cone.same_multiplicity);
  CHECK(cone.multiplicities == std::vector<int>{2, 2});
  CHECK_FALSE(cone.orthogonal_gradients.holds);
  CHECK(cone.orthogonal_gradients.witness.find("y*z") != std::string::npos);
  CHECK_FALSE(cone.equal_gradient_norms.holds);
  CHECK_FALSE(cone.simple_L_map);
  // equal-degree homogeneous pair with p = 2: <grad rho, Omega> == 0 identically,
  // and for this germ <grad ||G||^2, Omega> = -2x^4 yz + 2x^4 yz == 0 as well
  CHECK(cone.omega_rho_orthogonal.holds);
  CHECK(cone.omega_normsq_orthogonal.holds);

  const StructuralCriteria lmap =
      check_structural_criteria(load_germ_file(data_path("germs/lmap8.json")));
  CHECK(lmap.orthogonal_gradients.holds);
  CHECK(lmap.equal_gradient_norms.holds);
  CHECK(lmap.simple_L_map);

  // realifications of holomorphic functions are simple L-maps (Cauchy-Riemann)
  SplitMix64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const MixedPolynomial f = test::random_mixed(rng, rng.uniform_int(1, 2), 4, 3, true);
    const StructuralCriteria sc = check_structural_criteria(realify(f));
    CHECK(sc.simple_L_map);
  }
}

TEST_CASE("the eight-variable pair is the realification of an MSL function") {
  // z1^2 conj(z2)^2 + z3 conj(z4) realified in the interleaved order equals
  // the stored eight-variable pair under the variable correspondence
  // (x,y,z,w,a,b,c,d) = (z1_re, z1_im, z2_re, z2_im, z3_re, z3_im, z4_re, z4_im).
  const MixedPolynomial f =
      mixed_mono({2, 0, 0, 0}, {0, 2, 0, 0}) + mixed_mono({0, 0, 1, 0}, {0, 0, 0, 1});
  const PolyMapGerm realified = realify(f);
  const PolyMapGerm stored = load_germ_file(data_path("germs/lmap8.json"));

  CHECK(realified.num_vars() == stored.num_vars());
  CHECK(realified.component(0) == stored.component(0));
  CHECK(realified.component(1) == stored.component(1));
}

TEST_CASE("the eight-variable pair has Milnor points with a = 4/r^6") {
  // Solving x in span{grad G_1, grad G_2} for the stored pair gives the
  // surface {z3 = z4 = 0, |z1| = |z2|, matched phases}; at
  // (t, 0, t, 0, 0, 0, 0, 0) with 2t^2 = r^2 the alpha pairing evaluates to
  // a = 1/(2 t^6) = 4/r^6. Computed by hand, checked through every route.
  const PolyMapGerm germ = load_germ_file(data_path("germs/lmap8.json"));
  const double r = 0.1;
  const double t = r / std::sqrt(2.0);
  Eigen::VectorXd point = Eigen::VectorXd::Zero(8);
  point[0] = t;
  point[2] = t;

  CHECK(milnor_residual(germ, point).residual < 1e-12);
  const double expected = 4.0 / std::pow(r, 6);
  for (ARoute route : {ARoute::cramer, ARoute::alpha, ARoute::matrix_identity}) {
    CHECK(a_coefficient(germ, point, route) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
  // G_1 is pure degree 4 at this point while its multiplicity is 2, so the
  // leading route sees exactly half the pairing.
  CHECK(a_coefficient(germ, point, ARoute::leading_term) ==
        doctest::Approx(expected / 2).epsilon(1e-9));

  // The gap between the two routes is exactly the excess-weight tail:
  // a_matrix - a_leading = <V A, G> / ||G||^2 with V the per-component
  // sum of (degree - multiplicity)-weighted terms.
  const EvalFrame frame = germ.eval_frame(point);
  const std::span<const double> xs(point.data(), static_cast<size_t>(point.size()));
  Eigen::VectorXd excess(2);
  for (int k = 0; k < 2; ++k) excess[k] = germ.euler_excess(k).eval(xs);
  const Eigen::MatrixXd gram = frame.jacobian * frame.jacobian.transpose();
  const double tail = excess.dot(gram.ldlt().solve(frame.values)) / frame.values.squaredNorm();
  const double gap = a_coefficient(germ, point, ARoute::matrix_identity) -
                     a_coefficient(germ, point, ARoute::leading_term);
  CHECK(gap == doctest::Approx(tail).epsilon(1e-9));
  CHECK(std::abs(tail) > 1.0);  // genuinely inhomogeneous here
}

TEST_CASE("Milnor condition (c) equals det D for two components") {
  const PolyMapGerm germ = cone_germ();
  const Eigen::VectorXd p = cone_point();
  CHECK(milnor_condition_c(germ, p) == doctest::Approx(256.0).epsilon(1e-12));

  const auto dm = build_D_M(germ, p);
  CHECK(milnor_condition_c(germ, p) == doctest::Approx(dm.D.determinant()).epsilon(1e-9));

  // scaled point stays positive (homogeneity)
  CHECK(milnor_condition_c(germ, 0.01 * p) > 0);

  const PolyMapGerm three(
      {Polynomial::variable(3, 0), Polynomial::variable(3, 1), Polynomial::variable(3, 2)});
  CHECK_THROWS_AS(milnor_condition_c(three, p), domain_error);

  // agreement on refined samples at a smaller radius
  const auto samples = sample_milnor_set(germ, 1e-2, 20, 1e-9, 13);
  REQUIRE(!samples.empty());
  for (const auto& ap : samples) {
    const auto dm2 = build_D_M(germ, ap.frame.point);
    const double det_d = dm2.D.determinant();
    CHECK(std::abs(milnor_condition_c(germ, ap.frame.point) - det_d) <=
          1e-9 * (1 + std::abs(det_d)));
  }
}

TEST_CASE("vanishing alpha pairing flags rank-deficient D") {
  // G = (x, y^3 - y) on R^2: every point is Milnor (p = m) and
  // <alpha, G> = 0 along x^2 = y^2 (1 - y^2)/(3y^2 - 1).
  const Polynomial gx = Polynomial::variable(2, 0);
  const Polynomial gy =
      Polynomial::monomial(2, {0, 3}, Rational(1)) - Polynomial::monomial(2, {0, 1}, Rational(1));
  const PolyMapGerm germ({gx, gy}, {"x", "y"});

  const double y = 0.8;
  const double x = std::sqrt(y * y * (1 - y * y) / (3 * y * y - 1));
  Eigen::VectorXd zero_pt(2), generic_pt(2);
  zero_pt << x, y;
  generic_pt << 0.5, 0.2;

  const double a_zero = a_coefficient(germ, zero_pt, ARoute::alpha);
  CHECK(std::abs(a_zero) < 1e-12);
  const auto dm_zero = build_D_M(germ, zero_pt);
  const double scale = dm_zero.M.determinant();
  CHECK(std::abs(dm_zero.D.determinant()) < 1e-10 * scale);

  const double a_generic = a_coefficient(germ, generic_pt, ARoute::alpha);
  CHECK(std::abs(a_generic) > 1e-3);
  const auto dm_generic = build_D_M(germ, generic_pt);
  CHECK(std::abs(dm_generic.D.determinant()) > 1e-6 * dm_generic.M.determinant());
}

TEST_CASE("tube-condition evidence for the cone germ") {
  const PolyMapGerm germ = cone_germ();
  const auto evidence = eqmain_evidence(germ, {1e-1, 1e-2, 1e-3}, 25, 9);
  CHECK(evidence.verdict == "supported");
  REQUIRE(evidence.per_radius.size() == 3);
  for (const auto& stat : evidence.per_radius) {
    CHECK(stat.accepted > 0);
    // closed form on the cone: min ||G|| = r^2 / 2
    CHECK(stat.min_norm_g == doctest::Approx(stat.radius * stat.radius / 2).epsilon(1e-6));
  }
  CHECK(evidence.kappa_valid);
  CHECK(evidence.kappa == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(evidence.label.find("not a proof") != std::string::npos);
}

TEST_CASE("tube-condition evidence for the linear germ and the mixed product") {
  // linear (x, y) on R^3: on the Milnor circle ||G|| = r, so kappa = 1
  const PolyMapGerm linear = load_germ_file(data_path("germs/linear_xy.json"));
  const auto lin = eqmain_evidence(linear, {1e-1, 1e-2, 1e-3}, 20, 3);
  CHECK(lin.verdict == "supported");
  CHECK(lin.kappa == doctest::Approx(1.0).epsilon(1e-6));
  for (const auto& stat : lin.per_radius) {
    CHECK(stat.min_norm_g == doctest::Approx(stat.radius).epsilon(1e-9));
  }

  // realified y ||x||^2: finite positive minima at each radius
  const MixedPolynomial F =
      separable_product(mixed_mono({1}, {0}), mixed_mono({1}, {1}));
  const auto prod = eqmain_evidence(realify(F), {1e-1, 1e-2}, 30, 3);
  CHECK(prod.verdict == "supported");
  for (const auto& stat : prod.per_radius) {
    CHECK(stat.accepted > 0);
    CHECK(stat.min_norm_g > 0);
  }
}

TEST_CASE("product propagation for the holomorphic product z1 z2") {
  // M(F) for F = z1 z2 is {|z1| = |z2|, matched phases}; there
  // a = 2/r^2 and each identity block carries a_f = a_g = 1.
  const MixedPolynomial f = mixed_mono({1}, {0});
  const MixedPolynomial F = separable_product(f, f);
  const PolyMapGerm rF = realify(F);

  const double radius = 0.1;
  const auto samples = sample_milnor_set(rF, radius, 30, 1e-9, 19);
  REQUIRE(samples.size() >= 10);
  for (const auto& ap : samples) {
    CHECK(ap.a_values.at("alpha") ==
          doctest::Approx(2.0 / (radius * radius)).epsilon(1e-8));
    Eigen::VectorXcd z(2);
    z[0] = std::complex<double>(ap.frame.point[0], ap.frame.point[1]);
    z[1] = std::complex<double>(ap.frame.point[2], ap.frame.point[3]);
    const auto pp = product_propagation_check(f, f, z);
    CHECK(pp.x_in_milnor_f);
    CHECK(pp.y_in_milnor_g);
    CHECK(pp.residual_f < 1e-8);
    CHECK(pp.residual_g < 1e-8);
  }
}

TEST_CASE("product propagation for F = y ||x||^2") {
  const MixedPolynomial f = mixed_mono({1}, {0});  // f(y) = y
  const MixedPolynomial g = mixed_mono({1}, {1});  // g(x) = x conj(x)
  const MixedPolynomial F = separable_product(f, g);
  const PolyMapGerm rF = realify(F);

  const auto samples = sample_milnor_set(rF, 0.1, 30, 1e-9, 21);
  REQUIRE(samples.size() >= 5);
  for (const auto& ap : samples) {
    Eigen::VectorXcd z(2);
    z[0] = std::complex<double>(ap.frame.point[0], ap.frame.point[1]);
    z[1] = std::complex<double>(ap.frame.point[2], ap.frame.point[3]);
    const auto pp = product_propagation_check(f, g, z);
    CHECK(pp.x_in_milnor_f);
    CHECK(pp.y_in_milnor_g);
    CHECK(pp.residual_f < 1e-8);
    CHECK(pp.residual_g < 1e-8);
    // blocks of the sampled Milnor set satisfy |y|^2 = |x|^2 / 2
    CHECK(std::norm(z[0]) == doctest::Approx(std::norm(z[1]) / 2).epsilon(1e-6));
  }

  // second block on V_g is rejected
  Eigen::VectorXcd bad(2);
  bad << std::complex<double>(0.1, 0.0), std::complex<double>(0.0, 0.0);
  CHECK_THROWS_AS(product_propagation_check(f, g, bad), domain_error);
}
