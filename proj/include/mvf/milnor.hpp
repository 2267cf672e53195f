#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "mvf/germ.hpp"
#include "mvf/mixed.hpp"

namespace mvf {

/// Scale-aware thresholds:
///   tol_m  bounds the normalized Milnor residual,
///   tol_s  bounds sing_gap as a fraction of ||JG||,
///   tol_v  bounds ||G|| as a fraction of radius^{min multiplicity}.
struct Tolerances {
  double tol_m = 1e-9;
  double tol_s = 1e-9;
  double tol_v = 1e-12;
};

/// The ||G|| floor below which a point counts as a V_G proxy.
double value_floor(const PolyMapGerm& germ, double radius, const Tolerances& tol);

struct MilnorResidual {
  double residual;  // ||grad rho - proj_{rowspace JG} grad rho|| / ||grad rho||
  double sing_gap;  // smallest singular value of JG
};

/// Normalized distance of grad rho to the row space of JG, plus the rank gap.
/// A point belongs to the sampled Milnor proxy set when residual < tol_m or
/// sing_gap < tol_s * ||JG||.
MilnorResidual milnor_residual(const PolyMapGerm& germ, const Eigen::VectorXd& point);

/// Pointwise bundle: frame, chart, normal-space generators, residuals and
/// the a(x) values by route (filled only for qualifying Milnor points).
struct AnalysisPoint {
  EvalFrame frame;
  int chart = -1;                  // j* maximizing |G_j|; -1 when ||G|| = 0
  std::vector<int> omega_indices;  // component index k of each omega row
  Eigen::MatrixXd omegas;          // (p-1) x m, row = G_{j*} grad G_k - G_k grad G_{j*}
  double milnor_residual = 0;
  double sing_gap = 0;
  bool on_v_proxy = true;    // ||G|| below the value floor
  bool on_sing_proxy = true; // sing_gap below tol_s * ||JG||
  bool in_milnor_set = false;
  double det_D = 0, det_M = 0;              // filled when off both proxies
  std::map<std::string, double> a_values;   // filled when in_milnor_set and off proxies

  double radial_pairing() const { return frame.grad_norm_sq.dot(frame.grad_rho); }
};

/// Computes the full bundle at one point. forced_chart >= 0 overrides the
/// argmax chart (used by the chart-independence checks).
AnalysisPoint analyze_point(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                            const Tolerances& tol = {}, int forced_chart = -1);

struct DMPair {
  Eigen::MatrixXd D;
  Eigen::MatrixXd M;
};

/// The p x p matrices whose determinant ratio is a(x): M is the Gram matrix
/// of {grad ||G||^2, Omega_2, ..., Omega_p} and D replaces its first column
/// by the pairings with grad rho. det M > 0 off the V_G/Sing proxies.
DMPair build_D_M(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                 const Tolerances& tol = {}, int forced_chart = -1);

enum class ARoute { cramer, alpha, matrix_identity, leading_term };

const char* route_name(ARoute route);

/// The coefficient of grad ||G||^2 in grad rho = a grad ||G||^2 + sum alpha_k Omega_k:
///   cramer           det D / det M,
///   alpha            <alpha, G>/||G||^2 with x = sum alpha_k grad G_k (least squares),
///   matrix_identity  <x JG^t A, G>/||G||^2 with A = (JG JG^t)^{-1},
///   leading_term     the multiplicity-weighted part <(D(m_i) G) A, G>/||G||^2 only;
/// the first three agree at Milnor points, the last drops the higher-order tail.
double a_coefficient(const PolyMapGerm& germ, const Eigen::VectorXd& point, ARoute route,
                     const Tolerances& tol = {}, int forced_chart = -1);

/// Quasi-uniform sphere seeds refined onto {Gram det of (grad rho, grad G_1..grad G_p) = 0,
/// ||x||^2 = r^2} by damped Gauss-Newton. Returns converged points with
/// milnor_residual < tol, excluding V_G and Sing proxies.
std::vector<AnalysisPoint> sample_milnor_set(const PolyMapGerm& germ, double radius, int count,
                                             double tol, uint64_t seed,
                                             const Tolerances& tolerances = {});

struct IdentityVerdict {
  bool holds = false;
  std::string witness;  // a nonzero term when the identity fails
};

/// Exact polynomial identities decided in rational arithmetic.
struct StructuralCriteria {
  std::vector<int> multiplicities;
  bool same_multiplicity = false;
  IdentityVerdict orthogonal_gradients;   // <grad G_i, grad G_j> == 0 for all i != j
  IdentityVerdict equal_gradient_norms;   // ||grad G_i||^2 == ||grad G_j||^2 for all i, j
  bool simple_L_map = false;              // both of the above
  IdentityVerdict omega_normsq_orthogonal;  // <grad ||G||^2, Omega_j> == 0 for all j (chart 1)
  IdentityVerdict omega_rho_orthogonal;     // <grad rho, Omega_j> == 0 for all j (chart 1)
};

StructuralCriteria check_structural_criteria(const PolyMapGerm& germ);

/// For p = 2: ||w||^2 <grad rho, grad ||G||^2> - <w, grad ||G||^2><w, grad rho>
/// with w the single Omega vector; equals det D(x).
double milnor_condition_c(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                          const Tolerances& tol = {});

struct RadiusStat {
  double radius = 0;
  int accepted = 0;
  double min_norm_g = 0;
  double median_norm_g = 0;
};

/// Heuristic support for the tube-fibration condition
/// closure(M(G) \ G^{-1}(Disc G)) meeting V_G only at 0: tracks how
/// min ||G|| over Milnor samples scales with the radius. Never a proof.
struct EqmainEvidence {
  std::vector<RadiusStat> per_radius;
  double kappa = 0;       // fitted growth exponent of min ||G|| vs radius
  bool kappa_valid = false;
  std::string verdict;    // "supported" | "partial" | "vacuous"
  std::string label = "heuristic evidence, not a proof";
};

EqmainEvidence eqmain_evidence(const PolyMapGerm& germ, std::vector<double> radii, int count,
                               uint64_t seed, const Tolerances& tol = {});

/// Fits the growth exponent and assigns the verdict from per-radius stats
/// that were already collected elsewhere.
EqmainEvidence eqmain_from_stats(const std::vector<RadiusStat>& stats);

/// Checks, at one sampled point of the product F = f * g in separable
/// variables, that Milnor membership propagates to the blocks and that the
/// block coefficient matches a_F scaled by the other factor's squared norm.
struct ProductPropagation {
  bool x_in_milnor_f = false;
  bool y_in_milnor_g = false;
  double a_F = 0;
  double a_f = 0, a_g = 0;
  double residual_f = 0;  // |a_f - a_F * ||g(y)||^2|
  double residual_g = 0;  // |a_g - a_F * ||f(x)||^2|
};

ProductPropagation product_propagation_check(const MixedPolynomial& f, const MixedPolynomial& g,
                                             const Eigen::VectorXcd& point,
                                             const Tolerances& tol = {});

}  // namespace mvf
