#include "mvf/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "mvf/error.hpp"

namespace mvf {

using ordered_json = nlohmann::ordered_json;

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[18];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

const char* conclusion_name(ConclusionKind kind) {
  switch (kind) {
    case ConclusionKind::holomorphic: return "holomorphic";
    case ConclusionKind::msl_pairing: return "msl_pairing";
    case ConclusionKind::separable_product: return "separable_product";
    case ConclusionKind::simple_L_map: return "simple_L_map";
    case ConclusionKind::orthogonal_gradients: return "orthogonal_gradients";
    case ConclusionKind::same_multiplicity: return "same_multiplicity";
    case ConclusionKind::omega_orthogonality: return "omega_orthogonality";
    case ConclusionKind::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string conclusion_claim(ConclusionKind kind) {
  switch (kind) {
    case ConclusionKind::holomorphic:
      return "holomorphic function: the realification is a simple L-map, the radial "
             "coefficient a(x) is positive on the Milnor set off the zero/singular sets, and a "
             "Milnor vector field exists near the origin";
    case ConclusionKind::msl_pairing:
      return "the Wirtinger pairing <conj(df), dbar f> vanishes identically, so the "
             "realification is a simple L-map and a Milnor vector field exists near the origin";
    case ConclusionKind::separable_product:
      return "separable product with a symbolically certified factor: the product coefficient "
             "a(x,y) inherits positivity from the factor, so a Milnor vector field exists for "
             "the product under the recorded assumptions";
    case ConclusionKind::simple_L_map:
      return "component gradients are pairwise orthogonal with equal norms (simple L-map): "
             "a(x) > 0 on the Milnor set off the zero/singular sets and a Milnor vector field "
             "exists near the origin";
    case ConclusionKind::orthogonal_gradients:
      return "component gradients are pairwise orthogonal: a(x) > 0 on the Milnor set near the "
             "origin";
    case ConclusionKind::same_multiplicity:
      return "all components share the lowest homogeneous degree: a(x) > 0 on the Milnor set "
             "near the origin";
    case ConclusionKind::omega_orthogonality:
      return "the normal-space generators are identically orthogonal to grad ||G||^2 or to "
             "grad rho: det D(x) > 0 off the zero/singular sets, hence a(x) > 0";
    case ConclusionKind::inconclusive:
      return "no symbolic criterion applies; the sampled data below is evidence only";
  }
  return "?";
}

namespace {

ConclusionKind conclude(const SymbolicVerdicts& s) {
  if (s.is_mixed && s.holomorphic) return ConclusionKind::holomorphic;
  if (s.is_mixed && s.msl_full.ok) return ConclusionKind::msl_pairing;
  if (s.structural.simple_L_map) return ConclusionKind::simple_L_map;
  if (s.structural.orthogonal_gradients.holds) return ConclusionKind::orthogonal_gradients;
  if (s.structural.same_multiplicity) return ConclusionKind::same_multiplicity;
  if (s.structural.omega_normsq_orthogonal.holds || s.structural.omega_rho_orthogonal.holds) {
    return ConclusionKind::omega_orthogonality;
  }
  return ConclusionKind::inconclusive;
}

void run_sampling(const PolyMapGerm& germ, const CertifyOptions& options, Certificate& cert) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < options.radii.size(); ++i) {
    const double radius = options.radii[i];
    RadiusEvidence ev;
    ev.radius = radius;
    ev.attempted = options.samples;
    const auto samples = sample_milnor_set(germ, radius, options.samples, options.tol.tol_m,
                                           options.seed + static_cast<uint64_t>(i), options.tol);
    ev.accepted = static_cast<int>(samples.size());
    ev.min_a = nan;
    ev.max_a = nan;
    ev.min_det_M = nan;
    ev.min_radial_pairing = nan;
    ev.min_norm_g = nan;
    ev.median_norm_g = nan;

    std::vector<double> norms;
    for (const auto& ap : samples) {
      SampleRow row = sample_row_from(ap, radius);
      norms.push_back(row.norm_g);

      const double a_min = std::min({row.a_cramer, row.a_alpha, row.a_matrix});
      const double a_max = std::max({row.a_cramer, row.a_alpha, row.a_matrix});
      if (!(a_min > 0)) {
        ++ev.nonpositive_a;
        cert.all_sampled_a_positive = false;
      }
      ev.min_a = std::isnan(ev.min_a) ? a_min : std::min(ev.min_a, a_min);
      ev.max_a = std::isnan(ev.max_a) ? a_max : std::max(ev.max_a, a_max);
      const double denom = 1.0 + std::abs(row.a_cramer);
      const double disagreement = std::max(std::abs(row.a_cramer - row.a_alpha),
                                           std::abs(row.a_cramer - row.a_matrix)) /
                                  denom;
      ev.max_route_disagreement = std::max(ev.max_route_disagreement, disagreement);
      ev.min_det_M = std::isnan(ev.min_det_M) ? row.det_M : std::min(ev.min_det_M, row.det_M);
      const double radial = ap.radial_pairing();
      ev.min_radial_pairing =
          std::isnan(ev.min_radial_pairing) ? radial : std::min(ev.min_radial_pairing, radial);
      ev.rows.push_back(std::move(row));
    }
    if (!norms.empty()) {
      std::sort(norms.begin(), norms.end());
      ev.min_norm_g = norms.front();
      ev.median_norm_g = norms[norms.size() / 2];
    }
    cert.evidence.push_back(std::move(ev));
  }

  std::vector<RadiusStat> stats;
  for (const auto& ev : cert.evidence) {
    RadiusStat st;
    st.radius = ev.radius;
    st.accepted = ev.accepted;
    st.min_norm_g = std::isnan(ev.min_norm_g) ? 0.0 : ev.min_norm_g;
    st.median_norm_g = std::isnan(ev.median_norm_g) ? 0.0 : ev.median_norm_g;
    stats.push_back(st);
  }
  cert.eqmain = eqmain_from_stats(stats);
}

void validate_options(const CertifyOptions& options) {
  if (options.radii.empty()) throw domain_error("certification needs at least one radius");
  for (size_t i = 0; i < options.radii.size(); ++i) {
    if (options.radii[i] <= 0) throw domain_error("radii must be positive");
    if (i > 0 && options.radii[i] >= options.radii[i - 1]) {
      throw domain_error("radii must be strictly decreasing");
    }
  }
  if (options.samples <= 0) throw domain_error("sample count must be positive");
}

}  // namespace

Certificate certify(const PolyMapGerm& germ, const CertifyOptions& options) {
  validate_options(options);
  if (germ.num_components() < 2) {
    throw domain_error("certification needs at least two components");
  }
  Certificate cert;
  cert.input_kind = "real";
  cert.content_hash = fnv1a64_hex(serialize_germ(germ));
  cert.var_names = germ.var_names();
  cert.options = options;
  cert.symbolic.structural = check_structural_criteria(germ);
  cert.symbolic.is_mixed = false;
  run_sampling(germ, options, cert);
  cert.conclusion = conclude(cert.symbolic);
  if (options.assume_disc_zero) {
    cert.assumptions.push_back("the discriminant is assumed to be the origin (user-declared)");
  }
  return cert;
}

Certificate certify_mixed(const MixedPolynomial& f, const std::vector<std::string>& cvar_names,
                          const CertifyOptions& options) {
  validate_options(options);
  const PolyMapGerm germ = realify(f, cvar_names);
  Certificate cert;
  cert.input_kind = "mixed";
  cert.content_hash = fnv1a64_hex(serialize_mixed(f, cvar_names));
  cert.var_names = germ.var_names();
  cert.options = options;
  cert.symbolic.structural = check_structural_criteria(germ);
  cert.symbolic.is_mixed = true;
  cert.symbolic.holomorphic = f.is_holomorphic();
  cert.symbolic.msl_full = msl_check(f, MslMode::full);
  cert.symbolic.msl_im = msl_check(f, MslMode::im_only);
  run_sampling(germ, options, cert);
  cert.conclusion = conclude(cert.symbolic);
  if (options.assume_disc_zero) {
    cert.assumptions.push_back("the discriminant is assumed to be the origin (user-declared)");
  }
  return cert;
}

Certificate certify_product(const MixedPolynomial& f, const MixedPolynomial& g,
                            const std::vector<std::string>& f_names,
                            const std::vector<std::string>& g_names,
                            const CertifyOptions& options) {
  validate_options(options);
  const MixedPolynomial F = separable_product(f, g);
  std::vector<std::string> names = f_names;
  names.insert(names.end(), g_names.begin(), g_names.end());

  Certificate cert = certify_mixed(F, names, options);
  cert.input_kind = "mixed-product";

  ProductEvidence pe;
  auto factor_kind = [&](const MixedPolynomial& factor,
                         const std::vector<std::string>& fnames) -> ConclusionKind {
    SymbolicVerdicts sv;
    sv.is_mixed = true;
    sv.holomorphic = factor.is_holomorphic();
    sv.msl_full = msl_check(factor, MslMode::full);
    auto [u, v] = realify_parts(factor);
    if (!u.is_zero() && !v.is_zero()) {
      sv.structural = check_structural_criteria(realify(factor, fnames));
    }
    return conclude(sv);
  };

  const ConclusionKind kinds[2] = {factor_kind(f, f_names), factor_kind(g, g_names)};
  for (int i = 0; i < 2; ++i) {
    // The factor propagates positivity when it is certified AND its
    // discriminant is the origin; the L-map family guarantees the latter,
    // the remaining criteria need the user's declaration.
    const bool strong = kinds[i] == ConclusionKind::holomorphic ||
                        kinds[i] == ConclusionKind::msl_pairing ||
                        kinds[i] == ConclusionKind::simple_L_map;
    const bool declared = options.assume_disc_zero && kinds[i] != ConclusionKind::inconclusive;
    if (strong || declared) {
      pe.factor_certified = i;
      pe.factor_criterion = conclusion_name(kinds[i]);
      if (!strong) {
        cert.assumptions.push_back(
            "the certified factor's discriminant is assumed to be the origin (user-declared)");
      }
      break;
    }
  }

  // Propagation relations at the sampled Milnor points of the product.
  const int n = f.num_cvars();
  const int m = g.num_cvars();
  for (const auto& ev : cert.evidence) {
    for (const auto& row : ev.rows) {
      Eigen::VectorXcd z(n + m);
      for (int j = 0; j < n + m; ++j) {
        z[j] = std::complex<double>(row.point[2 * j], row.point[2 * j + 1]);
      }
      try {
        const ProductPropagation pp = product_propagation_check(f, g, z, options.tol);
        ++pe.propagation_points;
        if (!pp.x_in_milnor_f || !pp.y_in_milnor_g || !std::isfinite(pp.residual_f) ||
            !std::isfinite(pp.residual_g)) {
          ++pe.block_membership_failures;
        } else {
          pe.max_propagation_residual =
              std::max({pe.max_propagation_residual, pp.residual_f, pp.residual_g});
        }
        const ProductIdentityResiduals pir = product_identity_residuals(f, g, z);
        pe.max_identity_residual =
            std::max({pe.max_identity_residual, pir.grad_residual, pir.omega_residual});
      } catch (const domain_error&) {
        ++pe.block_membership_failures;
      }
    }
  }

  cert.product = pe;
  if (pe.factor_certified >= 0) {
    cert.conclusion = ConclusionKind::separable_product;
    cert.assumptions.push_back(
        "the tube-fibration condition for the product is taken from evidence, not proved");
  }
  return cert;
}

namespace {

ordered_json json_verdict(const IdentityVerdict& v) {
  ordered_json j;
  j["holds"] = v.holds;
  if (!v.holds) j["witness"] = v.witness;
  return j;
}

ordered_json json_msl(const MslVerdict& v) {
  ordered_json j;
  j["holds"] = v.ok;
  if (!v.ok) j["witness"] = v.witness;
  return j;
}

ordered_json json_double(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

ordered_json json_vector(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

std::string Certificate::to_json() const {
  ordered_json doc;
  doc["schema"] = "mvf-certificate/1";
  doc["input"] = {{"kind", input_kind}, {"content_hash", content_hash}, {"vars", var_names}};
  doc["options"] = {
      {"radii", options.radii},
      {"samples", options.samples},
      {"seed", options.seed},
      {"tolerances",
       {{"tol_m", options.tol.tol_m}, {"tol_s", options.tol.tol_s}, {"tol_v", options.tol.tol_v}}},
      {"assume_disc_zero", options.assume_disc_zero},
  };

  ordered_json sym;
  sym["multiplicities"] = symbolic.structural.multiplicities;
  sym["same_multiplicity"] = symbolic.structural.same_multiplicity;
  sym["orthogonal_gradients"] = json_verdict(symbolic.structural.orthogonal_gradients);
  sym["equal_gradient_norms"] = json_verdict(symbolic.structural.equal_gradient_norms);
  sym["simple_L_map"] = symbolic.structural.simple_L_map;
  sym["omega_normsq_orthogonal"] = json_verdict(symbolic.structural.omega_normsq_orthogonal);
  sym["omega_rho_orthogonal"] = json_verdict(symbolic.structural.omega_rho_orthogonal);
  if (symbolic.is_mixed) {
    sym["holomorphic"] = symbolic.holomorphic;
    sym["msl_full"] = json_msl(symbolic.msl_full);
    sym["msl_im_only"] = json_msl(symbolic.msl_im);
  }
  doc["symbolic"] = std::move(sym);

  ordered_json per_radius = ordered_json::array();
  for (const auto& ev : evidence) {
    ordered_json j;
    j["radius"] = ev.radius;
    j["attempted"] = ev.attempted;
    j["accepted"] = ev.accepted;
    j["min_a"] = json_double(ev.min_a);
    j["max_a"] = json_double(ev.max_a);
    j["nonpositive_a"] = ev.nonpositive_a;
    j["max_route_disagreement"] = ev.max_route_disagreement;
    j["min_detM"] = json_double(ev.min_det_M);
    j["min_radial_pairing"] = json_double(ev.min_radial_pairing);
    j["min_normG"] = json_double(ev.min_norm_g);
    j["median_normG"] = json_double(ev.median_norm_g);
    if (options.include_points) {
      ordered_json rows = ordered_json::array();
      for (const auto& row : ev.rows) {
        ordered_json r;
        r["point"] = json_vector(row.point);
        r["normG"] = row.norm_g;
        r["milnor_residual"] = row.milnor_residual;
        r["sing_gap"] = row.sing_gap;
        r["a"] = {{"cramer", row.a_cramer},
                  {"alpha", row.a_alpha},
                  {"matrix", row.a_matrix},
                  {"leading", row.a_leading}};
        r["detD"] = row.det_D;
        r["detM"] = row.det_M;
        rows.push_back(std::move(r));
      }
      j["points"] = std::move(rows);
    }
    per_radius.push_back(std::move(j));
  }

  ordered_json eq;
  {
    ordered_json radii_stats = ordered_json::array();
    for (const auto& st : eqmain.per_radius) {
      radii_stats.push_back({{"radius", st.radius},
                             {"accepted", st.accepted},
                             {"min_normG", st.min_norm_g},
                             {"median_normG", st.median_norm_g}});
    }
    eq["per_radius"] = std::move(radii_stats);
    eq["kappa"] = eqmain.kappa_valid ? ordered_json(eqmain.kappa) : ordered_json(nullptr);
    eq["verdict"] = eqmain.verdict;
    eq["label"] = eqmain.label;
  }

  doc["evidence"] = {{"per_radius", std::move(per_radius)},
                     {"tube_condition", std::move(eq)},
                     {"all_sampled_a_positive", all_sampled_a_positive}};

  if (product.has_value()) {
    ordered_json pj;
    pj["factor_certified"] = product->factor_certified >= 0
                                 ? ordered_json(product->factor_certified)
                                 : ordered_json(nullptr);
    pj["factor_criterion"] = product->factor_criterion;
    pj["propagation_points"] = product->propagation_points;
    pj["block_membership_failures"] = product->block_membership_failures;
    pj["max_propagation_residual"] = product->max_propagation_residual;
    pj["max_identity_residual"] = product->max_identity_residual;
    doc["product"] = std::move(pj);
  }

  doc["conclusion"] = {
      {"criterion", conclusion_name(conclusion)},
      {"claim", conclusion_claim(conclusion)},
      {"assumptions", assumptions},
      {"evidence_note", "sampled values are numerical evidence, never a proof"},
  };
  return doc.dump(2) + "\n";
}

SampleRow sample_row_from(const AnalysisPoint& ap, double radius) {
  SampleRow row;
  row.radius = radius;
  row.point = ap.frame.point;
  row.norm_g = ap.frame.values.norm();
  row.milnor_residual = ap.milnor_residual;
  row.sing_gap = ap.sing_gap;
  row.a_cramer = ap.a_values.at("cramer");
  row.a_alpha = ap.a_values.at("alpha");
  row.a_matrix = ap.a_values.at("matrix");
  row.a_leading = ap.a_values.at("leading");
  row.det_D = ap.det_D;
  row.det_M = ap.det_M;
  return row;
}

std::string samples_csv(const std::vector<std::string>& var_names,
                        const std::vector<SampleRow>& rows) {
  std::string out = "radius";
  for (const auto& name : var_names) out += "," + name;
  out += ",normG,milnor_residual,sing_gap,a_cramer,a_alpha,a_matrix,a_leading,detD,detM\n";
  char buf[32];
  auto emit = [&](double v) {
    snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  };
  for (const auto& row : rows) {
    emit(row.radius);
    for (int i = 0; i < row.point.size(); ++i) {
      out += ",";
      emit(row.point[i]);
    }
    out += ",";
    emit(row.norm_g);
    out += ",";
    emit(row.milnor_residual);
    out += ",";
    emit(row.sing_gap);
    out += ",";
    emit(row.a_cramer);
    out += ",";
    emit(row.a_alpha);
    out += ",";
    emit(row.a_matrix);
    out += ",";
    emit(row.a_leading);
    out += ",";
    emit(row.det_D);
    out += ",";
    emit(row.det_M);
    out += "\n";
  }
  return out;
}

std::string samples_csv(const Certificate& cert) {
  std::vector<SampleRow> rows;
  for (const auto& ev : cert.evidence) rows.insert(rows.end(), ev.rows.begin(), ev.rows.end());
  return samples_csv(cert.var_names, rows);
}

}  // namespace mvf
