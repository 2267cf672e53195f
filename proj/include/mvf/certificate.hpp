#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvf/milnor.hpp"
#include "mvf/mixed.hpp"

namespace mvf {

struct CertifyOptions {
  std::vector<double> radii{1e-1, 1e-2, 1e-3};
  int samples = 80;  // seeds per radius
  uint64_t seed = 1;
  Tolerances tol;
  bool assume_disc_zero = false;
  bool include_points = false;  // embed per-sample rows in the JSON document
};

struct SampleRow {
  double radius = 0;
  Eigen::VectorXd point;
  double norm_g = 0;
  double milnor_residual = 0;
  double sing_gap = 0;
  double a_cramer = 0, a_alpha = 0, a_matrix = 0, a_leading = 0;
  double det_D = 0, det_M = 0;
};

struct RadiusEvidence {
  double radius = 0;
  int attempted = 0;
  int accepted = 0;
  double min_a = 0, max_a = 0;
  int nonpositive_a = 0;
  double max_route_disagreement = 0;  // relative, over (cramer,alpha) and (cramer,matrix)
  double min_det_M = 0;
  double min_radial_pairing = 0;  // <grad ||G||^2, grad rho>
  double min_norm_g = 0, median_norm_g = 0;
  std::vector<SampleRow> rows;
};

/// Symbolic (exact) verdicts; sampling never contributes here.
struct SymbolicVerdicts {
  StructuralCriteria structural;  // of the (realified) germ
  bool is_mixed = false;
  bool holomorphic = false;          // mixed inputs only
  MslVerdict msl_full;               // mixed inputs only
  MslVerdict msl_im;                 // mixed inputs only
};

/// Which certified criterion the conclusion cites. Ordered from the most
/// specific applicable statement downward; "inconclusive" when none of the
/// symbolic hypotheses holds.
enum class ConclusionKind {
  holomorphic,            // holomorphic mixed function
  msl_pairing,            // Wirtinger pairing vanishes identically
  separable_product,      // product with a symbolically certified factor
  simple_L_map,           // orthogonal gradients of equal norms
  orthogonal_gradients,   // pairwise orthogonal gradients
  same_multiplicity,      // equal lowest homogeneous degrees
  omega_orthogonality,    // an Omega family orthogonal to grad||G||^2 or grad rho
  inconclusive,
};

const char* conclusion_name(ConclusionKind kind);
std::string conclusion_claim(ConclusionKind kind);

struct ProductEvidence {
  int factor_certified = -1;  // 0 or 1 when a factor passes a symbolic criterion
  std::string factor_criterion;
  int propagation_points = 0;
  int block_membership_failures = 0;
  double max_propagation_residual = 0;
  double max_identity_residual = 0;  // product identities at the sampled points
};

struct Certificate {
  std::string input_kind;  // "real" | "mixed" | "mixed-product"
  std::string content_hash;
  std::vector<std::string> var_names;  // of the analyzed real germ
  CertifyOptions options;
  SymbolicVerdicts symbolic;
  std::vector<RadiusEvidence> evidence;
  EqmainEvidence eqmain;
  std::optional<ProductEvidence> product;
  ConclusionKind conclusion = ConclusionKind::inconclusive;
  std::vector<std::string> assumptions;
  bool all_sampled_a_positive = true;

  bool certified() const {
    return conclusion != ConclusionKind::inconclusive && all_sampled_a_positive;
  }

  std::string to_json() const;
};

/// Runs the symbolic criteria and the per-radius sampling for a real germ
/// with at least two components. Deterministic given options.seed.
Certificate certify(const PolyMapGerm& germ, const CertifyOptions& options = {});

/// Mixed input: adds the Wirtinger-pairing verdicts, then analyzes the
/// realification like any real germ.
Certificate certify_mixed(const MixedPolynomial& f, const std::vector<std::string>& cvar_names,
                          const CertifyOptions& options = {});

/// Product of mixed functions in separable variables: certifies a factor
/// symbolically, then samples the product's Milnor set and checks the
/// block-propagation relations there.
Certificate certify_product(const MixedPolynomial& f, const MixedPolynomial& g,
                            const std::vector<std::string>& f_names,
                            const std::vector<std::string>& g_names,
                            const CertifyOptions& options = {});

SampleRow sample_row_from(const AnalysisPoint& ap, double radius);

/// CSV of sampled points: radius, <vars>, normG, milnor_residual,
/// sing_gap, a_cramer, a_alpha, a_matrix, a_leading, detD, detM.
std::string samples_csv(const std::vector<std::string>& var_names,
                        const std::vector<SampleRow>& rows);
std::string samples_csv(const Certificate& cert);

uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace mvf
