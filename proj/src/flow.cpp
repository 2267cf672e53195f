#include "mvf/flow.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <ostream>

#include "mvf/error.hpp"
#include "mvf/rng.hpp"

namespace mvf {

namespace {

constexpr double kRankCutoff = 1e-13;

Eigen::VectorXd project_off_rows(const Eigen::MatrixXd& rows, const Eigen::VectorXd& v) {
  if (rows.rows() == 0) return v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
  Eigen::VectorXd out = v;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > smax * kRankCutoff) {
      const Eigen::VectorXd dir = svd.matrixV().col(i);
      out -= dir.dot(v) * dir;
    }
  }
  return out;
}

enum class FieldStatus { ok, v_proxy, sing_proxy, v1_degenerate, v2_degenerate };

FieldStatus try_field(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                      const Tolerances& tol, double field_floor, FieldSample* out) {
  AnalysisPoint ap;
  try {
    ap = analyze_point(germ, point, tol);
  } catch (const domain_error&) {
    return FieldStatus::v_proxy;  // origin or dimension trouble
  }
  if (ap.on_v_proxy || ap.chart < 0) return FieldStatus::v_proxy;
  if (ap.on_sing_proxy) return FieldStatus::sing_proxy;

  const Eigen::VectorXd v1 = project_off_rows(ap.omegas, ap.frame.grad_norm_sq);
  const Eigen::VectorXd v2 = project_off_rows(ap.omegas, ap.frame.grad_rho);
  if (v1.norm() <= field_floor * ap.frame.grad_norm_sq.norm()) return FieldStatus::v1_degenerate;
  if (v2.norm() <= field_floor * ap.frame.grad_rho.norm()) return FieldStatus::v2_degenerate;

  if (out) {
    out->point = point;
    out->v1 = v1;
    out->v2 = v2;
    out->nu = v1 / v1.norm() + v2 / v2.norm();
    out->c1_residual = 0.0;
    const double nu_norm = out->nu.norm();
    for (int k = 0; k < ap.omegas.rows(); ++k) {
      const double wnorm = ap.omegas.row(k).norm();
      if (wnorm > 0 && nu_norm > 0) {
        out->c1_residual = std::max(
            out->c1_residual, std::abs(ap.omegas.row(k).dot(out->nu)) / (nu_norm * wnorm));
      }
    }
    out->c2 = out->nu.dot(ap.frame.grad_rho);
    out->c3 = out->nu.dot(ap.frame.grad_norm_sq);
  }
  return FieldStatus::ok;
}

const char* status_text(FieldStatus s) {
  switch (s) {
    case FieldStatus::ok: return "ok";
    case FieldStatus::v_proxy: return "point lies on the zero-set proxy of G";
    case FieldStatus::sing_proxy: return "point lies on the Sing proxy";
    case FieldStatus::v1_degenerate: return "v1 vanished: tube tangency / Sing proximity";
    case FieldStatus::v2_degenerate: return "v2 vanished: rho-regularity fails at this point";
  }
  return "?";
}

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;

struct RkResult {
  bool ok = false;
  FieldStatus failure = FieldStatus::ok;
  Eigen::VectorXd next;
  double error = 0;  // scaled error estimate
};

RkResult rk45_step(const PolyMapGerm& germ, const Eigen::VectorXd& x, double h,
                   const Tolerances& tol, const StepperOptions& opt) {
  RkResult res;
  FieldSample fs;
  auto rhs = [&](const Eigen::VectorXd& at, Eigen::VectorXd& slope) -> FieldStatus {
    const FieldStatus st = try_field(germ, at, tol, opt.field_floor, &fs);
    if (st == FieldStatus::ok) slope = fs.nu;
    return st;
  };

  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7;
  FieldStatus st;
  if ((st = rhs(x, k1)) != FieldStatus::ok) { res.failure = st; return res; }
  if ((st = rhs(x + h * (kA21 * k1), k2)) != FieldStatus::ok) { res.failure = st; return res; }
  if ((st = rhs(x + h * (kA31 * k1 + kA32 * k2), k3)) != FieldStatus::ok) { res.failure = st; return res; }
  if ((st = rhs(x + h * (kA41 * k1 + kA42 * k2 + kA43 * k3), k4)) != FieldStatus::ok) { res.failure = st; return res; }
  if ((st = rhs(x + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4), k5)) != FieldStatus::ok) { res.failure = st; return res; }
  if ((st = rhs(x + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5), k6)) != FieldStatus::ok) { res.failure = st; return res; }

  res.next = x + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
  if ((st = rhs(res.next, k7)) != FieldStatus::ok) { res.failure = st; return res; }

  const Eigen::VectorXd err =
      h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
  double scaled = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(x[i]), std::abs(res.next[i]));
    scaled = std::max(scaled, std::abs(err[i]) / sc);
  }
  res.error = scaled;
  res.ok = true;
  return res;
}

TrajectoryStep make_step(const PolyMapGerm& germ, double time, const Eigen::VectorXd& x,
                         const FieldSample& fs) {
  TrajectoryStep step;
  step.time = time;
  step.point = x;
  const Eigen::VectorXd values = germ.eval_values(x);
  step.norm_g = values.norm();
  step.rho = x.squaredNorm();
  step.psi = values / step.norm_g;
  step.c1_residual = fs.c1_residual;
  step.c2 = fs.c2;
  step.c3 = fs.c3;
  return step;
}

}  // namespace

Eigen::VectorXd fiber_tangent_project(const AnalysisPoint& ap, const Eigen::VectorXd& vector) {
  if (ap.chart < 0) throw domain_error("no valid chart: ||G|| vanishes at the point");
  if (ap.on_sing_proxy) throw domain_error("degenerate Omega system: point on the Sing proxy");
  if (vector.size() != ap.frame.point.size()) throw domain_error("vector has wrong dimension");
  return project_off_rows(ap.omegas, vector);
}

FieldSample milnor_vector_field(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                                const Tolerances& tol) {
  FieldSample fs;
  const FieldStatus st = try_field(germ, point, tol, StepperOptions{}.field_floor, &fs);
  if (st != FieldStatus::ok) throw domain_error(status_text(st));
  return fs;
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::reached_sphere: return "reached_sphere";
    case Termination::reached_v1_degeneracy: return "reached_v1_degeneracy";
    case Termination::rho_regularity_violation: return "rho_regularity_violation";
    case Termination::step_failure: return "step_failure";
  }
  return "?";
}

Trajectory flow_to_sphere(const PolyMapGerm& germ, const Eigen::VectorXd& start, double epsilon,
                          const StepperOptions& options, const Tolerances& tol) {
  if (epsilon <= 0) throw domain_error("sphere radius must be positive");
  Trajectory traj;
  if (start.norm() >= epsilon) {
    traj.termination = Termination::reached_sphere;
    traj.detail = "start already on or outside the target sphere";
    return traj;
  }

  FieldSample fs;
  const FieldStatus st0 = try_field(germ, start, tol, options.field_floor, &fs);
  if (st0 != FieldStatus::ok) {
    throw domain_error(std::string("flow start rejected: ") + status_text(st0));
  }

  const Eigen::VectorXd psi0 = germ.eval_values(start).normalized();
  double t = 0.0;
  Eigen::VectorXd x = start;
  traj.steps.push_back(make_step(germ, t, x, fs));

  auto gates_pass = [&](const TrajectoryStep& prev, const Eigen::VectorXd& next,
                        std::string* why) -> bool {
    const Eigen::VectorXd values = germ.eval_values(next);
    const double norm_g = values.norm();
    if (options.gate_monotone) {
      if (!(next.squaredNorm() > prev.rho)) {
        *why = "rho did not increase";
        return false;
      }
      if (!(norm_g > prev.norm_g)) {
        *why = "||G|| did not increase";
        return false;
      }
    }
    if (options.gate_drift && norm_g > 0) {
      const double drift = ((values / norm_g) - psi0).cwiseAbs().maxCoeff();
      if (drift > options.drift_tol) {
        *why = "Psi_G drift exceeded tolerance";
        return false;
      }
    }
    return true;
  };

  double h = options.initial_step;
  auto fail = [&](Termination reason, const std::string& detail) {
    traj.termination = reason;
    traj.detail = detail;
    return traj;
  };

  for (int step_count = 0; step_count < options.max_steps; ++step_count) {
    if (h < options.min_step) return fail(Termination::step_failure, "step size underflow");
    const RkResult rk = rk45_step(germ, x, h, tol, options);
    if (!rk.ok) {
      // RHS failed inside the step: shrink toward the obstruction.
      h *= 0.5;
      if (h < options.min_step) {
        const Termination reason = rk.failure == FieldStatus::v2_degenerate
                                       ? Termination::rho_regularity_violation
                                       : rk.failure == FieldStatus::v1_degenerate
                                             ? Termination::reached_v1_degeneracy
                                             : Termination::step_failure;
        return fail(reason, status_text(rk.failure));
      }
      continue;
    }
    if (rk.error > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(rk.error, -0.2));
      continue;
    }
    std::string why;
    if (!gates_pass(traj.steps.back(), rk.next, &why)) {
      h *= 0.5;
      if (h < options.min_step) return fail(Termination::step_failure, "gate rejected: " + why);
      continue;
    }

    if (rk.next.norm() >= epsilon) {
      // Bisect the final step so the endpoint lands on the sphere.
      double lo = 0.0, hi = h;
      Eigen::VectorXd landing = rk.next;
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const RkResult probe = rk45_step(germ, x, mid, tol, options);
        if (!probe.ok) {
          hi = mid;
          continue;
        }
        const double gap = probe.next.norm() - epsilon;
        if (gap >= 0.0) {
          landing = probe.next;
          hi = mid;
          if (gap <= 1e-12) break;
        } else {
          lo = mid;
        }
      }
      const FieldStatus stl = try_field(germ, landing, tol, options.field_floor, &fs);
      if (stl == FieldStatus::ok) {
        traj.steps.push_back(make_step(germ, t + hi, landing, fs));
      }
      traj.termination = Termination::reached_sphere;
      return traj;
    }

    t += h;
    x = rk.next;
    const FieldStatus sta = try_field(germ, x, tol, options.field_floor, &fs);
    if (sta != FieldStatus::ok) {
      const Termination reason = sta == FieldStatus::v2_degenerate
                                     ? Termination::rho_regularity_violation
                                     : sta == FieldStatus::v1_degenerate
                                           ? Termination::reached_v1_degeneracy
                                           : Termination::step_failure;
      return fail(reason, status_text(sta));
    }
    traj.steps.push_back(make_step(germ, t, x, fs));
    h = std::min(options.max_step, h * std::min(5.0, 0.9 * std::pow(std::max(rk.error, 1e-10), -0.2)));
  }
  return fail(Termination::step_failure, "step budget exhausted");
}

TrajectoryReport trajectory_report(const Trajectory& traj) {
  TrajectoryReport rep;
  rep.termination = traj.termination;
  rep.steps = static_cast<int>(traj.steps.size());
  if (traj.steps.size() < 2) {
    rep.vacuous = true;
    return rep;
  }
  rep.vacuous = false;
  rep.min_c2 = rep.max_c2 = traj.steps.front().c2;
  rep.min_c3 = rep.max_c3 = traj.steps.front().c3;
  const Eigen::VectorXd psi0 = traj.steps.front().psi;
  for (size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& s = traj.steps[i];
    rep.min_c2 = std::min(rep.min_c2, s.c2);
    rep.max_c2 = std::max(rep.max_c2, s.c2);
    rep.min_c3 = std::min(rep.min_c3, s.c3);
    rep.max_c3 = std::max(rep.max_c3, s.c3);
    rep.max_c1_residual = std::max(rep.max_c1_residual, s.c1_residual);
    rep.max_psi_drift = std::max(rep.max_psi_drift, (s.psi - psi0).cwiseAbs().maxCoeff());
    if (i > 0) {
      rep.monotone_rho = rep.monotone_rho && s.rho > traj.steps[i - 1].rho;
      rep.monotone_norm_g = rep.monotone_norm_g && s.norm_g > traj.steps[i - 1].norm_g;
    }
  }
  return rep;
}

std::vector<Eigen::VectorXd> tube_fan_starts(const PolyMapGerm& germ, double eta, double epsilon,
                                             int count, uint64_t seed, const Tolerances& tol) {
  if (eta <= 0 || epsilon <= 0) throw domain_error("eta and epsilon must be positive");
  if (count <= 0) return {};
  SplitMix64 rng(seed);
  const int m = germ.num_vars();
  std::vector<Eigen::VectorXd> starts;

  auto random_direction = [&]() {
    Eigen::VectorXd dir(m);
    for (int i = 0; i < m; i += 2) {
      const double u1 = std::max(rng.uniform(), 1e-300);
      const double u2 = rng.uniform();
      const double r = std::sqrt(-2.0 * std::log(u1));
      dir[i] = r * std::cos(2.0 * M_PI * u2);
      if (i + 1 < m) dir[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    const double norm = dir.norm();
    return norm > 0 ? Eigen::VectorXd(dir / norm) : Eigen::VectorXd(Eigen::VectorXd::Unit(m, 0));
  };

  const double t_max = 0.95 * epsilon;
  const int max_attempts = 400 * count;
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(starts.size()) < count;
       ++attempt) {
    const Eigen::VectorXd dir = random_direction();
    if (germ.eval_norm(t_max * dir) <= eta) continue;  // tube does not cross this ray early enough
    double lo = 0.0, hi = t_max;
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (germ.eval_norm(mid * dir) < eta ? lo : hi) = mid;
    }
    const Eigen::VectorXd candidate = hi * dir;
    if (try_field(germ, candidate, tol, StepperOptions{}.field_floor, nullptr) !=
        FieldStatus::ok) {
      continue;
    }
    starts.push_back(candidate);
  }
  return starts;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& var_names) {
  os << "t";
  for (const auto& name : var_names) os << "," << name;
  os << ",normG,rho";
  const int p = traj.steps.empty() ? 0 : static_cast<int>(traj.steps.front().psi.size());
  for (int k = 0; k < p; ++k) os << ",psi" << (k + 1);
  os << ",c1_residual,c2,c3\n";
  char buf[32];
  auto emit = [&](double v) {
    snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (const auto& s : traj.steps) {
    emit(s.time);
    for (int i = 0; i < s.point.size(); ++i) {
      os << ",";
      emit(s.point[i]);
    }
    os << ",";
    emit(s.norm_g);
    os << ",";
    emit(s.rho);
    for (int k = 0; k < s.psi.size(); ++k) {
      os << ",";
      emit(s.psi[k]);
    }
    os << ",";
    emit(s.c1_residual);
    os << ",";
    emit(s.c2);
    os << ",";
    emit(s.c3);
    os << "\n";
  }
}

}  // namespace mvf
