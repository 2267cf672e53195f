#pragma once

#include <iosfwd>
#include <vector>

#include "mvf/milnor.hpp"

namespace mvf {

/// The vector field nu = v1/||v1|| + v2/||v2|| at one point, where v1 and v2
/// are the fiber-tangent projections of grad ||G||^2 and grad rho, together
/// with its pointwise condition diagnostics:
///   c1_residual  max_k |<nu, Omega_k>| / (||nu|| ||Omega_k||)  (fiber tangency)
///   c2           <nu, grad rho>
///   c3           <nu, grad ||G||^2>
struct FieldSample {
  Eigen::VectorXd point;
  Eigen::VectorXd v1;
  Eigen::VectorXd v2;
  Eigen::VectorXd nu;
  double c1_residual = 0;
  double c2 = 0;
  double c3 = 0;
};

/// Component of `vector` orthogonal to every Omega row of the analysis point;
/// idempotent. Throws on a degenerate Omega system (Sing/V proxies).
Eigen::VectorXd fiber_tangent_project(const AnalysisPoint& ap, const Eigen::VectorXd& vector);

/// Builds the field at a point off the V_G/Sing proxies. Throws when v1
/// degenerates (Sing/V proximity) or when v2 vanishes; a vanishing v2 is a
/// rho-regularity failure at the point, reported in the exception text.
FieldSample milnor_vector_field(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                                const Tolerances& tol = {});

struct StepperOptions {
  double initial_step = 1e-3;
  double min_step = 1e-14;
  double max_step = 0.05;
  double rel_tol = 1e-11;   // embedded-pair error control
  double abs_tol = 1e-13;
  double drift_tol = 1e-6;  // componentwise bound on Psi_G drift from the start
  bool gate_monotone = true;
  bool gate_drift = true;
  int max_steps = 200000;
  double field_floor = 1e-10;  // relative threshold for v1/v2 vanishing
};

enum class Termination {
  reached_sphere,
  reached_v1_degeneracy,
  rho_regularity_violation,  // v2 vanished en route
  step_failure,
};

const char* termination_name(Termination t);

struct TrajectoryStep {
  double time = 0;
  Eigen::VectorXd point;
  double norm_g = 0;
  double rho = 0;
  Eigen::VectorXd psi;  // G/||G||
  double c1_residual = 0;
  double c2 = 0;
  double c3 = 0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  Termination termination = Termination::step_failure;
  std::string detail;
};

/// Integrates x' = nu(x) with an adaptive embedded Runge-Kutta 5(4) pair.
/// A step is accepted only if rho and ||G|| strictly increased and the
/// componentwise Psi_G drift from the start stays within tolerance; the
/// final step is bisected so the endpoint lands on ||x|| = epsilon within
/// 1e-12. A start already at or outside the sphere returns an empty
/// trajectory terminated at the sphere.
Trajectory flow_to_sphere(const PolyMapGerm& germ, const Eigen::VectorXd& start, double epsilon,
                          const StepperOptions& options = {}, const Tolerances& tol = {});

struct TrajectoryReport {
  bool vacuous = true;
  int steps = 0;
  Termination termination = Termination::step_failure;
  bool monotone_rho = true;
  bool monotone_norm_g = true;
  double min_c2 = 0, max_c2 = 0;
  double min_c3 = 0, max_c3 = 0;
  double max_c1_residual = 0;
  double max_psi_drift = 0;
};

TrajectoryReport trajectory_report(const Trajectory& traj);

/// Deterministic fan of start points on the tube ||G|| = eta inside the
/// epsilon-ball: seeded directions, bisected onto the tube, filtered to
/// points where the field is well-defined. May return fewer than count.
std::vector<Eigen::VectorXd> tube_fan_starts(const PolyMapGerm& germ, double eta, double epsilon,
                                             int count, uint64_t seed,
                                             const Tolerances& tol = {});

/// CSV columns: t, <var names>, normG, rho, psi1..psip, c1_residual, c2, c3.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& var_names);

}  // namespace mvf
