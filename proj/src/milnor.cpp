#include "mvf/milnor.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mvf/error.hpp"
#include "mvf/rng.hpp"

namespace mvf {

namespace {

constexpr double kRankCutoff = 1e-13;  // relative numerical-rank threshold

/// Projection of v onto the row space of jac (numerical rank via SVD).
Eigen::VectorXd row_space_projection(const Eigen::MatrixXd& jac, const Eigen::VectorXd& v,
                                     double* smallest_sigma) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(v.size());
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > smax * kRankCutoff) {
      const Eigen::VectorXd dir = svd.matrixV().col(i);
      proj += dir.dot(v) * dir;
    }
  }
  if (smallest_sigma) *smallest_sigma = sigma.size() > 0 ? sigma[sigma.size() - 1] : 0.0;
  return proj;
}

int choose_chart(const Eigen::VectorXd& values, int forced_chart) {
  if (forced_chart >= 0) {
    if (forced_chart >= values.size()) throw domain_error("forced chart out of range");
    return forced_chart;
  }
  int chart = 0;
  for (int j = 1; j < values.size(); ++j) {
    if (std::abs(values[j]) > std::abs(values[chart])) chart = j;
  }
  return chart;
}

Eigen::MatrixXd compute_omegas(const EvalFrame& frame, int chart, std::vector<int>* indices) {
  const int p = static_cast<int>(frame.values.size());
  const int m = static_cast<int>(frame.point.size());
  Eigen::MatrixXd omegas(p - 1, m);
  if (indices) indices->clear();
  int row = 0;
  for (int k = 0; k < p; ++k) {
    if (k == chart) continue;
    omegas.row(row) =
        frame.values[chart] * frame.jacobian.row(k) - frame.values[k] * frame.jacobian.row(chart);
    if (indices) indices->push_back(k);
    ++row;
  }
  return omegas;
}

/// Adjugate via cofactors; exact enough for the small Gram systems here and
/// well-defined where the matrix is singular.
Eigen::MatrixXd adjugate(const Eigen::MatrixXd& S) {
  const int n = static_cast<int>(S.rows());
  Eigen::MatrixXd adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
    return adj;
  }
  Eigen::MatrixXd minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc) = S(r, c);
          ++mc;
        }
        ++mr;
      }
      const double cofactor = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
      adj(j, i) = cofactor;
    }
  }
  return adj;
}

double halton(long index, int base) {
  double f = 1.0, value = 0.0;
  long i = index;
  while (i > 0) {
    f /= base;
    value += f * static_cast<double>(i % base);
    i /= base;
  }
  return value;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

/// Low-discrepancy direction on S^{m-1}: Box-Muller over Halton coordinates.
Eigen::VectorXd sphere_seed(int m, long index) {
  Eigen::VectorXd v(m);
  const int pairs = (m + 1) / 2;
  for (int j = 0; j < pairs; ++j) {
    const double u1 = std::max(halton(index, kPrimes[(2 * j) % 24]), 1e-12);
    const double u2 = halton(index, kPrimes[(2 * j + 1) % 24]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    v[2 * j] = radius * std::cos(angle);
    if (2 * j + 1 < m) v[2 * j + 1] = radius * std::sin(angle);
  }
  const double norm = v.norm();
  if (norm < 1e-12) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / norm;
}

struct GramState {
  Eigen::MatrixXd W;  // rows: grad rho, grad G_1, ..., grad G_p
  Eigen::MatrixXd S;  // Gram matrix of the rows
  double scale = 0;   // product of the diagonal
  double g1 = 0;      // det(S)/scale, dimensionless in [0, 1]
  double g2 = 0;      // (||x||^2 - r^2)/r^2
};

bool eval_gram_state(const PolyMapGerm& germ, const Eigen::VectorXd& x, double radius,
                     GramState& st) {
  const int p = germ.num_components();
  const int m = germ.num_vars();
  st.W.resize(p + 1, m);
  st.W.row(0) = 2.0 * x.transpose();
  st.W.bottomRows(p) = germ.eval_jacobian(x);
  st.S = st.W * st.W.transpose();
  const Eigen::VectorXd diag = st.S.diagonal();
  if (!(diag.minCoeff() > 1e-300)) return false;  // a gradient vanished
  st.scale = diag.prod();
  st.g1 = st.S.determinant() / st.scale;
  st.g2 = (x.squaredNorm() - radius * radius) / (radius * radius);
  return std::isfinite(st.g1) && std::isfinite(st.g2);
}

/// Final sharpening on the projection-residual system, which vanishes to
/// first order across the Milnor set: the Gram determinant alone cannot be
/// resolved much below its round-off floor (about residual 1e-9), while the
/// a(x) routes downstream benefit from membership errors near 1e-13.
void polish_on_projection_residual(const PolyMapGerm& germ, double radius, Eigen::VectorXd& x) {
  const int m = germ.num_vars();
  const double fd_step = 1e-7 * radius;

  auto system = [&](const Eigen::VectorXd& at, Eigen::VectorXd& out) -> bool {
    const Eigen::MatrixXd jac = germ.eval_jacobian(at);
    const Eigen::VectorXd grad_rho = 2.0 * at;
    const double norm = grad_rho.norm();
    if (norm == 0.0) return false;
    double gap = 0.0;
    const Eigen::VectorXd proj = row_space_projection(jac, grad_rho, &gap);
    out.resize(m + 1);
    out.head(m) = (grad_rho - proj) / norm;
    out[m] = (at.squaredNorm() - radius * radius) / (radius * radius);
    return true;
  };

  Eigen::VectorXd best = x;
  double best_residual = milnor_residual(germ, x).residual;
  Eigen::VectorXd current = x;
  for (int iter = 0; iter < 6; ++iter) {
    Eigen::VectorXd value;
    if (!system(current, value)) break;
    Eigen::MatrixXd jac(m + 1, m);
    Eigen::VectorXd shifted = current, forward, backward;
    bool ok = true;
    for (int l = 0; l < m && ok; ++l) {
      shifted[l] = current[l] + fd_step;
      ok = system(shifted, forward);
      shifted[l] = current[l] - fd_step;
      ok = ok && system(shifted, backward);
      shifted[l] = current[l];
      if (ok) jac.col(l) = (forward - backward) / (2.0 * fd_step);
    }
    if (!ok) break;
    const Eigen::VectorXd delta =
        jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-value);
    if (!delta.allFinite() || delta.norm() > 0.1 * radius) break;
    current += delta;
    current *= radius / current.norm();
    const double residual = milnor_residual(germ, current).residual;
    if (residual < best_residual) {
      best = current;
      best_residual = residual;
    }
    if (best_residual < 1e-14) break;
  }
  x = best;
}

/// Damped Gauss-Newton on (normalized Gram determinant, sphere constraint).
/// The Gram residual vanishes to second order across the Milnor set, so the
/// step amplifies that component by 2; the merit check keeps it safe.
bool refine_onto_milnor_set(const PolyMapGerm& germ, double radius, double tol_residual,
                            Eigen::VectorXd& x) {
  const int p = germ.num_components();
  const int m = germ.num_vars();
  constexpr int kMaxIters = 200;
  double lambda = 0.0;

  GramState st;
  if (!eval_gram_state(germ, x, radius, st)) return false;

  for (int iter = 0; iter < kMaxIters; ++iter) {
    if (std::abs(st.g2) < 1e-12) {
      const MilnorResidual mr = milnor_residual(germ, x);
      if (mr.residual < tol_residual) {
        polish_on_projection_residual(germ, radius, x);
        x *= radius / x.norm();  // exact sphere landing
        return true;
      }
      // Gram determinant exhausted without membership: a rank-drop sheet.
      if (st.g1 < 1e-24 && mr.residual > tol_residual) return false;
    }

    // Hessian columns of each component feed d(grad G_k)/dx_l.
    std::vector<Eigen::MatrixXd> hess(p);
    {
      const std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
      for (int k = 0; k < p; ++k) {
        hess[k].resize(m, m);
        for (int i = 0; i < m; ++i) {
          for (int j = i; j < m; ++j) {
            hess[k](i, j) = hess[k](j, i) = germ.hessian(k, i, j).eval(xs);
          }
        }
      }
    }

    const Eigen::MatrixXd adj = adjugate(st.S);
    const Eigen::VectorXd diag = st.S.diagonal();
    Eigen::VectorXd grad_g1(m);
    Eigen::MatrixXd dW(p + 1, m);
    for (int l = 0; l < m; ++l) {
      dW.setZero();
      dW(0, l) = 2.0;
      for (int k = 0; k < p; ++k) dW.row(k + 1) = hess[k].col(l).transpose();
      const Eigen::MatrixXd cross = dW * st.W.transpose();
      const Eigen::MatrixXd dS = cross + cross.transpose();
      const double ddet = (adj.cwiseProduct(dS)).sum();  // both symmetric
      double dscale_rel = 0.0;
      for (int i = 0; i <= p; ++i) dscale_rel += dS(i, i) / diag[i];
      grad_g1[l] = ddet / st.scale - st.g1 * dscale_rel;
    }

    Eigen::MatrixXd J(2, m);
    J.row(0) = grad_g1.transpose();
    J.row(1) = 2.0 * x.transpose() / (radius * radius);
    const Eigen::Matrix2d JJt = J * J.transpose();
    const Eigen::Vector2d step_residual(2.0 * st.g1, st.g2);
    const double merit = st.g1 * st.g1 + st.g2 * st.g2;

    bool advanced = false;
    for (int attempt = 0; attempt < 10 && !advanced; ++attempt) {
      Eigen::Matrix2d A = JJt;
      A.diagonal() += lambda * JJt.diagonal() + Eigen::Vector2d::Constant(1e-300);
      const Eigen::Vector2d y = A.fullPivLu().solve(step_residual);
      const Eigen::VectorXd delta = -J.transpose() * y;
      if (!delta.allFinite()) {
        lambda = lambda == 0.0 ? 1e-4 : lambda * 8.0;
        continue;
      }
      GramState trial_state;
      const Eigen::VectorXd trial = x + delta;
      if (eval_gram_state(germ, trial, radius, trial_state) &&
          trial_state.g1 * trial_state.g1 + trial_state.g2 * trial_state.g2 < merit) {
        x = trial;
        st = trial_state;
        lambda = lambda < 1e-12 ? 0.0 : lambda / 4.0;
        advanced = true;
      } else {
        lambda = lambda == 0.0 ? 1e-4 : lambda * 8.0;
      }
    }
    if (!advanced) {
      // Stalled: accept only if already converged at looser sphere accuracy.
      const MilnorResidual mr = milnor_residual(germ, x);
      if (std::abs(st.g2) < 1e-10 && mr.residual < tol_residual) {
        polish_on_projection_residual(germ, radius, x);
        x *= radius / x.norm();
        return true;
      }
      return false;
    }
  }
  return false;
}

PolyMapGerm realify_block(const MixedPolynomial& h) {
  auto [u, v] = realify_parts(h);
  if (v.is_zero()) return PolyMapGerm({std::move(u)});
  if (u.is_zero()) return PolyMapGerm({std::move(v)});
  return PolyMapGerm({std::move(u), std::move(v)});
}

}  // namespace

double value_floor(const PolyMapGerm& germ, double radius, const Tolerances& tol) {
  return tol.tol_v * std::pow(radius, germ.min_multiplicity());
}

MilnorResidual milnor_residual(const PolyMapGerm& germ, const Eigen::VectorXd& point) {
  if (point.size() != germ.num_vars()) throw domain_error("point has wrong dimension");
  if (point.norm() == 0.0) throw domain_error("the Milnor residual is undefined at the origin");
  const Eigen::MatrixXd jac = germ.eval_jacobian(point);
  const Eigen::VectorXd grad_rho = 2.0 * point;
  double sing_gap = 0.0;
  const Eigen::VectorXd proj = row_space_projection(jac, grad_rho, &sing_gap);
  return {(grad_rho - proj).norm() / grad_rho.norm(), sing_gap};
}

AnalysisPoint analyze_point(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                            const Tolerances& tol, int forced_chart) {
  AnalysisPoint ap;
  ap.frame = germ.eval_frame(point);
  const double radius = point.norm();
  if (radius == 0.0) throw domain_error("analysis point must not be the origin");

  const MilnorResidual mr = milnor_residual(germ, point);
  ap.milnor_residual = mr.residual;
  ap.sing_gap = mr.sing_gap;
  const double norm_g = ap.frame.values.norm();
  ap.on_v_proxy = norm_g < value_floor(germ, radius, tol);
  ap.on_sing_proxy = ap.sing_gap < tol.tol_s * ap.frame.jacobian.norm();
  ap.in_milnor_set = mr.residual < tol.tol_m || ap.on_sing_proxy;

  if (norm_g > 0.0) {
    ap.chart = choose_chart(ap.frame.values, forced_chart);
    ap.omegas = compute_omegas(ap.frame, ap.chart, &ap.omega_indices);
  }

  if (!ap.on_v_proxy && !ap.on_sing_proxy && ap.chart >= 0) {
    const int p = germ.num_components();
    Eigen::MatrixXd W(p, germ.num_vars());
    W.row(0) = ap.frame.grad_norm_sq.transpose();
    W.bottomRows(p - 1) = ap.omegas;
    const Eigen::MatrixXd M = W * W.transpose();
    Eigen::MatrixXd D = M;
    D.col(0) = W * ap.frame.grad_rho;
    ap.det_D = D.determinant();
    ap.det_M = M.determinant();
    if (mr.residual < tol.tol_m) {
      for (ARoute route : {ARoute::cramer, ARoute::alpha, ARoute::matrix_identity,
                           ARoute::leading_term}) {
        ap.a_values[route_name(route)] = a_coefficient(germ, point, route, tol, ap.chart);
      }
    }
  }
  return ap;
}

DMPair build_D_M(const PolyMapGerm& germ, const Eigen::VectorXd& point, const Tolerances& tol,
                 int forced_chart) {
  const EvalFrame frame = germ.eval_frame(point);
  const double radius = point.norm();
  if (radius == 0.0) throw domain_error("D/M matrices are undefined at the origin");
  const double norm_g = frame.values.norm();
  if (norm_g < value_floor(germ, radius, tol)) {
    throw domain_error("vanishing chart: the point lies on the zero-set proxy of G");
  }
  const MilnorResidual mr = milnor_residual(germ, point);
  if (mr.sing_gap < tol.tol_s * frame.jacobian.norm()) {
    throw domain_error("rank-deficient Jacobian: the point lies on the Sing proxy");
  }
  const int chart = choose_chart(frame.values, forced_chart);
  const Eigen::MatrixXd omegas = compute_omegas(frame, chart, nullptr);

  const int p = germ.num_components();
  Eigen::MatrixXd W(p, germ.num_vars());
  W.row(0) = frame.grad_norm_sq.transpose();
  W.bottomRows(p - 1) = omegas;
  DMPair out;
  out.M = W * W.transpose();
  out.D = out.M;
  out.D.col(0) = W * frame.grad_rho;
  return out;
}

const char* route_name(ARoute route) {
  switch (route) {
    case ARoute::cramer: return "cramer";
    case ARoute::alpha: return "alpha";
    case ARoute::matrix_identity: return "matrix";
    case ARoute::leading_term: return "leading";
  }
  return "?";
}

double a_coefficient(const PolyMapGerm& germ, const Eigen::VectorXd& point, ARoute route,
                     const Tolerances& tol, int forced_chart) {
  const EvalFrame frame = germ.eval_frame(point);
  const double radius = point.norm();
  if (radius == 0.0) throw domain_error("a(x) is undefined at the origin");
  const double norm_g = frame.values.norm();
  if (norm_g < value_floor(germ, radius, tol)) {
    throw domain_error("a(x) is undefined on the zero-set proxy of G");
  }
  const MilnorResidual mr = milnor_residual(germ, point);
  if (mr.sing_gap < tol.tol_s * frame.jacobian.norm()) {
    throw domain_error("a(x) is undefined on the Sing proxy");
  }
  if (mr.residual >= tol.tol_m) {
    throw domain_error("point is not on the Milnor set (residual " +
                       std::to_string(mr.residual) + ")");
  }

  switch (route) {
    case ARoute::cramer: {
      const DMPair dm = build_D_M(germ, point, tol, forced_chart);
      return dm.D.determinant() / dm.M.determinant();
    }
    case ARoute::alpha: {
      const Eigen::MatrixXd basis = frame.jacobian.transpose();  // m x p
      const Eigen::VectorXd alpha =
          basis.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(point);
      const double rel = (basis * alpha - point).norm() / point.norm();
      if (rel >= tol.tol_m) {
        throw domain_error("least-squares residual " + std::to_string(rel) +
                           " exceeds the Milnor tolerance");
      }
      return alpha.dot(frame.values) / frame.values.squaredNorm();
    }
    case ARoute::matrix_identity: {
      const Eigen::MatrixXd gram = frame.jacobian * frame.jacobian.transpose();
      const Eigen::VectorXd w = frame.jacobian * point;  // <grad G_i, x>
      const Eigen::VectorXd ag = gram.ldlt().solve(frame.values);
      return w.dot(ag) / frame.values.squaredNorm();
    }
    case ARoute::leading_term: {
      const Eigen::MatrixXd gram = frame.jacobian * frame.jacobian.transpose();
      Eigen::VectorXd weighted(frame.values.size());
      const auto& mult = germ.multiplicities();
      for (int i = 0; i < weighted.size(); ++i) weighted[i] = mult[i] * frame.values[i];
      const Eigen::VectorXd ag = gram.ldlt().solve(frame.values);
      return weighted.dot(ag) / frame.values.squaredNorm();
    }
  }
  throw domain_error("unknown route");
}

std::vector<AnalysisPoint> sample_milnor_set(const PolyMapGerm& germ, double radius, int count,
                                             double tol, uint64_t seed,
                                             const Tolerances& tolerances) {
  if (radius <= 0.0) throw domain_error("sampling radius must be positive");
  if (count < 0) throw domain_error("sample count must be non-negative");
  std::vector<AnalysisPoint> accepted;
  if (count == 0) return accepted;

  Tolerances effective = tolerances;
  effective.tol_m = tol;

  const long offset = 1 + static_cast<long>((seed * 7919ULL) % 1000003ULL);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x = radius * sphere_seed(germ.num_vars(), offset + i);
    if (!refine_onto_milnor_set(germ, radius, tol, x)) continue;
    AnalysisPoint ap = analyze_point(germ, x, effective, -1);
    if (ap.on_v_proxy || ap.on_sing_proxy) continue;
    if (ap.milnor_residual >= tol) continue;
    accepted.push_back(std::move(ap));
  }
  return accepted;
}

namespace {

std::string pair_witness(const std::string& label, const Polynomial& poly,
                         std::span<const std::string> names) {
  const Polynomial single(poly.num_vars(), {poly.terms().front()});
  return label + " has term " + single.to_string(names);
}

}  // namespace

StructuralCriteria check_structural_criteria(const PolyMapGerm& germ) {
  StructuralCriteria out;
  out.multiplicities = germ.multiplicities();
  out.same_multiplicity = std::all_of(out.multiplicities.begin(), out.multiplicities.end(),
                                      [&](int d) { return d == out.multiplicities.front(); });

  const int p = germ.num_components();
  const int m = germ.num_vars();
  const auto& names = germ.var_names();

  out.orthogonal_gradients.holds = true;
  out.equal_gradient_norms.holds = true;
  for (int i = 0; i < p && out.orthogonal_gradients.holds; ++i) {
    for (int j = i + 1; j < p && out.orthogonal_gradients.holds; ++j) {
      Polynomial ip(m);
      for (int l = 0; l < m; ++l) ip = ip + germ.gradient(i, l) * germ.gradient(j, l);
      if (!ip.is_zero()) {
        out.orthogonal_gradients.holds = false;
        out.orthogonal_gradients.witness = pair_witness(
            "<grad G_" + std::to_string(i + 1) + ", grad G_" + std::to_string(j + 1) + ">", ip,
            names);
      }
    }
  }
  for (int i = 0; i < p && out.equal_gradient_norms.holds; ++i) {
    for (int j = i + 1; j < p && out.equal_gradient_norms.holds; ++j) {
      Polynomial diff(m);
      for (int l = 0; l < m; ++l) {
        diff = diff + germ.gradient(i, l) * germ.gradient(i, l) -
               germ.gradient(j, l) * germ.gradient(j, l);
      }
      if (!diff.is_zero()) {
        out.equal_gradient_norms.holds = false;
        out.equal_gradient_norms.witness =
            pair_witness("||grad G_" + std::to_string(i + 1) + "||^2 - ||grad G_" +
                             std::to_string(j + 1) + "||^2",
                         diff, names);
      }
    }
  }
  out.simple_L_map = out.orthogonal_gradients.holds && out.equal_gradient_norms.holds;

  // Omega identities on the first chart.
  out.omega_normsq_orthogonal.holds = true;
  out.omega_rho_orthogonal.holds = true;
  for (int j = 1; j < p; ++j) {
    std::vector<Polynomial> omega;
    omega.reserve(m);
    for (int l = 0; l < m; ++l) {
      omega.push_back(germ.component(0) * germ.gradient(j, l) -
                      germ.component(j) * germ.gradient(0, l));
    }
    Polynomial with_norm(m), with_rho(m);
    for (int l = 0; l < m; ++l) {
      with_norm = with_norm + germ.grad_norm_sq_poly(l) * omega[l];
      with_rho = with_rho + Polynomial::variable(m, l).scaled(Rational(2)) * omega[l];
    }
    if (!with_norm.is_zero() && out.omega_normsq_orthogonal.holds) {
      out.omega_normsq_orthogonal.holds = false;
      out.omega_normsq_orthogonal.witness =
          pair_witness("<grad ||G||^2, Omega_" + std::to_string(j + 1) + ">", with_norm, names);
    }
    if (!with_rho.is_zero() && out.omega_rho_orthogonal.holds) {
      out.omega_rho_orthogonal.holds = false;
      out.omega_rho_orthogonal.witness =
          pair_witness("<grad rho, Omega_" + std::to_string(j + 1) + ">", with_rho, names);
    }
  }
  return out;
}

double milnor_condition_c(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                          const Tolerances& tol) {
  if (germ.num_components() != 2) {
    throw domain_error("the Milnor condition (c) expression needs exactly two components");
  }
  const AnalysisPoint ap = analyze_point(germ, point, tol);
  if (ap.on_v_proxy) throw domain_error("point lies on the zero-set proxy of G");
  if (ap.on_sing_proxy) throw domain_error("point lies on the Sing proxy");
  const Eigen::VectorXd w = ap.omegas.row(0);
  const Eigen::VectorXd& gn = ap.frame.grad_norm_sq;
  const Eigen::VectorXd& gr = ap.frame.grad_rho;
  return w.squaredNorm() * gr.dot(gn) - w.dot(gn) * w.dot(gr);
}

EqmainEvidence eqmain_evidence(const PolyMapGerm& germ, std::vector<double> radii, int count,
                               uint64_t seed, const Tolerances& tol) {
  for (double r : radii) {
    if (r <= 0.0) throw domain_error("radii must be positive");
  }
  std::sort(radii.begin(), radii.end(), std::greater<double>());

  std::vector<RadiusStat> stats;
  for (size_t i = 0; i < radii.size(); ++i) {
    RadiusStat stat;
    stat.radius = radii[i];
    const auto samples =
        sample_milnor_set(germ, radii[i], count, tol.tol_m, seed + static_cast<uint64_t>(i), tol);
    stat.accepted = static_cast<int>(samples.size());
    if (!samples.empty()) {
      std::vector<double> norms;
      norms.reserve(samples.size());
      for (const auto& ap : samples) norms.push_back(ap.frame.values.norm());
      std::sort(norms.begin(), norms.end());
      stat.min_norm_g = norms.front();
      stat.median_norm_g = norms[norms.size() / 2];
    }
    stats.push_back(stat);
  }
  return eqmain_from_stats(stats);
}

EqmainEvidence eqmain_from_stats(const std::vector<RadiusStat>& stats) {
  EqmainEvidence out;
  out.per_radius = stats;
  int sampled_radii = 0;
  std::vector<std::pair<double, double>> fit_points;  // (log r, log min ||G||)
  for (const auto& stat : stats) {
    if (stat.accepted > 0) {
      ++sampled_radii;
      if (stat.min_norm_g > 0.0) {
        fit_points.emplace_back(std::log(stat.radius), std::log(stat.min_norm_g));
      }
    }
  }

  if (fit_points.size() >= 2) {
    double mx = 0, my = 0;
    for (auto& [lx, ly] : fit_points) {
      mx += lx;
      my += ly;
    }
    mx /= fit_points.size();
    my /= fit_points.size();
    double sxx = 0, sxy = 0;
    for (auto& [lx, ly] : fit_points) {
      sxx += (lx - mx) * (lx - mx);
      sxy += (lx - mx) * (ly - my);
    }
    if (sxx > 0) {
      out.kappa = sxy / sxx;
      out.kappa_valid = true;
    }
  }

  if (sampled_radii == 0) {
    out.verdict = "vacuous";
  } else if (sampled_radii == static_cast<int>(stats.size()) && out.kappa_valid) {
    out.verdict = "supported";
  } else {
    out.verdict = "partial";
  }
  return out;
}

ProductPropagation product_propagation_check(const MixedPolynomial& f, const MixedPolynomial& g,
                                             const Eigen::VectorXcd& point,
                                             const Tolerances& tol) {
  const int n = f.num_cvars();
  const int m = g.num_cvars();
  if (point.size() != n + m) throw domain_error("point does not split into the two blocks");

  const MixedPolynomial F = separable_product(f, g);
  const PolyMapGerm rF = realify_block(F);
  const PolyMapGerm rf = realify_block(f);
  const PolyMapGerm rg = realify_block(g);

  const Eigen::VectorXd X = realify_point(point);
  const Eigen::VectorXd xf = X.head(2 * n);
  const Eigen::VectorXd xg = X.tail(2 * m);

  const AnalysisPoint apF = analyze_point(rF, X, tol);
  if (apF.on_v_proxy) throw domain_error("point lies on the zero-set proxy of the product");
  if (apF.on_sing_proxy) throw domain_error("point lies on the Sing proxy of the product");
  if (apF.milnor_residual >= tol.tol_m) {
    throw domain_error("point is not on the Milnor set of the product");
  }

  const double norm_f = rf.eval_norm(xf);
  const double norm_g = rg.eval_norm(xg);
  if (norm_f < value_floor(rf, xf.norm(), tol)) {
    throw domain_error("first block lies on the zero set of its factor");
  }
  if (norm_g < value_floor(rg, xg.norm(), tol)) {
    throw domain_error("second block lies on the zero set of its factor");
  }

  ProductPropagation out;
  out.a_F = apF.a_values.at("alpha");

  const AnalysisPoint apf = analyze_point(rf, xf, tol);
  const AnalysisPoint apg = analyze_point(rg, xg, tol);
  out.x_in_milnor_f = apf.in_milnor_set;
  out.y_in_milnor_g = apg.in_milnor_set;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.a_f = apf.a_values.count("alpha") ? apf.a_values.at("alpha") : nan;
  out.a_g = apg.a_values.count("alpha") ? apg.a_values.at("alpha") : nan;
  out.residual_f = std::abs(out.a_f - out.a_F * norm_g * norm_g);
  out.residual_g = std::abs(out.a_g - out.a_F * norm_f * norm_f);
  return out;
}

}  // namespace mvf
