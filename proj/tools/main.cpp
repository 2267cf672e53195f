// Command-line front end: certify germs, sample Milnor sets, evaluate the
// radial coefficient, integrate the vector-field flow, and generate verified
// mixed functions.
//
// Exit codes: 0 certified / all trajectories landed, 1 input or usage error,
// 2 inconclusive (or a trajectory stopped without a regularity finding),
// 3 rho-regularity violation along a flow.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvf/certificate.hpp"
#include "mvf/error.hpp"
#include "mvf/flow.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitRegularity = 3;

struct CommonOptions {
  std::string radii_text = "1e-1,1e-2,1e-3";
  int samples = 80;
  uint64_t seed = 1;
  double tol_m = 1e-9;
  double tol_s = 1e-9;
  double tol_v = 1e-12;
  std::string out_path;
  std::string csv_path;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_sampling) {
  if (with_sampling) {
    cmd->add_option("--radii", opt.radii_text, "comma-separated, strictly decreasing radii");
    cmd->add_option("--samples", opt.samples, "seed count per radius");
  }
  cmd->add_option("--seed", opt.seed, "seed for all randomness");
  cmd->add_option("--tol-m", opt.tol_m, "Milnor residual tolerance");
  cmd->add_option("--tol-s", opt.tol_s, "singular-gap tolerance (fraction of ||JG||)");
  cmd->add_option("--tol-v", opt.tol_v, "||G|| floor (fraction of r^multiplicity)");
  cmd->add_option("--out", opt.out_path, "output file (stdout when omitted)");
  cmd->add_option("--csv", opt.csv_path, "CSV output file");
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> radii;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    radii.push_back(std::stod(item));
  }
  if (radii.empty()) throw mvf::parse_error("no radii given");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= 0) throw mvf::parse_error("radii must be positive");
    if (i > 0 && radii[i] >= radii[i - 1]) {
      throw mvf::parse_error("radii must be strictly decreasing");
    }
  }
  return radii;
}

Eigen::VectorXd parse_point(const std::string& text) {
  std::vector<double> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    entries.push_back(std::stod(item));
  }
  if (entries.empty()) throw mvf::parse_error("empty point");
  Eigen::VectorXd x(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) x[i] = entries[i];
  return x;
}

mvf::Tolerances tolerances_from(const CommonOptions& opt) {
  mvf::Tolerances tol;
  tol.tol_m = opt.tol_m;
  tol.tol_s = opt.tol_s;
  tol.tol_v = opt.tol_v;
  return tol;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mvf::error("cannot write to " + path);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mvf::parse_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// The three input kinds a document can carry.
struct LoadedInput {
  std::string kind;  // "real" | "mixed" | "mixed-product"
  std::optional<mvf::PolyMapGerm> germ;                  // kind == real
  std::optional<mvf::MixedInput> mixed;                  // kind == mixed
  std::optional<mvf::MixedInput> product_f, product_g;   // kind == mixed-product
};

LoadedInput load_input(const std::string& path) {
  const std::string text = slurp(path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw mvf::parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw mvf::parse_error("input document needs a string 'kind'");
  }
  LoadedInput input;
  input.kind = doc["kind"].get<std::string>();
  if (input.kind == "real") {
    input.germ = mvf::parse_germ(text);
  } else if (input.kind == "mixed") {
    input.mixed = mvf::parse_mixed(text);
  } else if (input.kind == "mixed-product") {
    if (!doc.contains("f") || !doc.contains("g")) {
      throw mvf::parse_error("mixed-product document needs 'f' and 'g' factors");
    }
    input.product_f = mvf::parse_mixed(doc["f"].dump());
    input.product_g = mvf::parse_mixed(doc["g"].dump());
  } else {
    throw mvf::parse_error("unknown input kind: " + input.kind);
  }
  return input;
}

/// Any input as a real germ for the pointwise/sampling/flow commands.
mvf::PolyMapGerm as_real_germ(const LoadedInput& input) {
  if (input.germ) return *input.germ;
  if (input.mixed) return mvf::realify(input.mixed->poly, input.mixed->cvar_names);
  std::vector<std::string> names = input.product_f->cvar_names;
  names.insert(names.end(), input.product_g->cvar_names.begin(),
               input.product_g->cvar_names.end());
  return mvf::realify(mvf::separable_product(input.product_f->poly, input.product_g->poly),
                      names);
}

int cmd_check(const std::string& path, const CommonOptions& common, bool assume_disc_zero,
              bool include_points) {
  const LoadedInput input = load_input(path);
  mvf::CertifyOptions options;
  options.radii = parse_radii(common.radii_text);
  options.samples = common.samples;
  options.seed = common.seed;
  options.tol = tolerances_from(common);
  options.assume_disc_zero = assume_disc_zero;
  options.include_points = include_points;

  mvf::Certificate cert;
  if (input.kind == "real") {
    cert = mvf::certify(*input.germ, options);
  } else if (input.kind == "mixed") {
    cert = mvf::certify_mixed(input.mixed->poly, input.mixed->cvar_names, options);
  } else {
    cert = mvf::certify_product(input.product_f->poly, input.product_g->poly,
                                input.product_f->cvar_names, input.product_g->cvar_names,
                                options);
  }

  write_output(common.out_path, cert.to_json());
  if (!common.csv_path.empty()) write_output(common.csv_path, mvf::samples_csv(cert));
  return cert.certified() ? kExitOk : kExitInconclusive;
}

int cmd_milnor_sample(const std::string& path, const CommonOptions& common) {
  const mvf::PolyMapGerm germ = as_real_germ(load_input(path));
  const mvf::Tolerances tol = tolerances_from(common);
  if (common.samples <= 0) throw mvf::parse_error("sample count must be positive");
  std::vector<mvf::SampleRow> rows;
  const std::vector<double> radii = parse_radii(common.radii_text);
  for (size_t i = 0; i < radii.size(); ++i) {
    const auto samples = mvf::sample_milnor_set(germ, radii[i], common.samples, tol.tol_m,
                                                common.seed + static_cast<uint64_t>(i), tol);
    for (const auto& ap : samples) rows.push_back(mvf::sample_row_from(ap, radii[i]));
  }
  const std::string csv = mvf::samples_csv(germ.var_names(), rows);
  write_output(common.csv_path.empty() ? common.out_path : common.csv_path, csv);
  return kExitOk;
}

int cmd_a_coeff(const std::string& path, const CommonOptions& common,
                const std::string& point_text, const std::string& route_name, int chart) {
  const mvf::PolyMapGerm germ = as_real_germ(load_input(path));
  const Eigen::VectorXd point = parse_point(point_text);
  const mvf::Tolerances tol = tolerances_from(common);

  std::vector<std::pair<std::string, mvf::ARoute>> routes;
  if (route_name == "all") {
    routes = {{"cramer", mvf::ARoute::cramer},
              {"alpha", mvf::ARoute::alpha},
              {"matrix", mvf::ARoute::matrix_identity},
              {"leading", mvf::ARoute::leading_term}};
  } else if (route_name == "cramer") {
    routes = {{"cramer", mvf::ARoute::cramer}};
  } else if (route_name == "alpha") {
    routes = {{"alpha", mvf::ARoute::alpha}};
  } else if (route_name == "matrix") {
    routes = {{"matrix", mvf::ARoute::matrix_identity}};
  } else if (route_name == "leading") {
    routes = {{"leading", mvf::ARoute::leading_term}};
  } else {
    throw mvf::parse_error("unknown route: " + route_name);
  }

  ordered_json doc;
  doc["point"] = std::vector<double>(point.data(), point.data() + point.size());
  const auto mr = mvf::milnor_residual(germ, point);
  doc["milnor_residual"] = mr.residual;
  doc["sing_gap"] = mr.sing_gap;
  ordered_json values;
  for (const auto& [name, route] : routes) {
    values[name] = mvf::a_coefficient(germ, point, route, tol, chart);
  }
  doc["a"] = std::move(values);
  const auto dm = mvf::build_D_M(germ, point, tol, chart);
  doc["detD"] = dm.D.determinant();
  doc["detM"] = dm.M.determinant();
  write_output(common.out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_flow(const std::string& path, const CommonOptions& common, const std::string& start_text,
             double eta, double eps, int fan, const mvf::StepperOptions& stepper) {
  const mvf::PolyMapGerm germ = as_real_germ(load_input(path));
  const mvf::Tolerances tol = tolerances_from(common);

  std::vector<Eigen::VectorXd> starts;
  if (!start_text.empty()) {
    const Eigen::VectorXd start = parse_point(start_text);
    if (start.norm() >= eps) {
      throw mvf::domain_error("start point lies on or outside the target sphere");
    }
    starts.push_back(start);
  } else {
    starts = mvf::tube_fan_starts(germ, eta, eps, fan, common.seed, tol);
    if (starts.empty()) {
      throw mvf::domain_error("no usable start points found on the tube ||G|| = eta");
    }
  }

  ordered_json summary;
  summary["epsilon"] = eps;
  summary["eta"] = eta;
  ordered_json entries = ordered_json::array();
  bool all_landed = true;
  bool any_regularity_violation = false;
  for (size_t i = 0; i < starts.size(); ++i) {
    const mvf::Trajectory traj = mvf::flow_to_sphere(germ, starts[i], eps, stepper, tol);
    const mvf::TrajectoryReport rep = mvf::trajectory_report(traj);
    all_landed = all_landed && traj.termination == mvf::Termination::reached_sphere &&
                 rep.monotone_rho && rep.monotone_norm_g;
    any_regularity_violation = any_regularity_violation ||
                               traj.termination == mvf::Termination::rho_regularity_violation;

    ordered_json entry;
    entry["start"] = std::vector<double>(starts[i].data(), starts[i].data() + starts[i].size());
    entry["termination"] = mvf::termination_name(traj.termination);
    if (!traj.detail.empty()) entry["detail"] = traj.detail;
    entry["steps"] = rep.steps;
    entry["monotone_rho"] = rep.monotone_rho;
    entry["monotone_normG"] = rep.monotone_norm_g;
    entry["max_psi_drift"] = rep.max_psi_drift;
    entry["max_c1_residual"] = rep.max_c1_residual;
    entry["min_c2"] = rep.min_c2;
    entry["min_c3"] = rep.min_c3;
    if (!traj.steps.empty()) {
      const auto& end = traj.steps.back().point;
      entry["end"] = std::vector<double>(end.data(), end.data() + end.size());
    }
    entries.push_back(std::move(entry));

    if (!common.csv_path.empty()) {
      std::ostringstream os;
      mvf::write_trajectory_csv(os, traj, germ.var_names());
      write_output(common.csv_path + "." + std::to_string(i) + ".csv", os.str());
    }
  }
  summary["trajectories"] = std::move(entries);
  write_output(common.out_path, summary.dump(2) + "\n");

  if (any_regularity_violation) return kExitRegularity;
  return all_landed ? kExitOk : kExitInconclusive;
}

int cmd_msl_gen(const std::string& recipe_path, const CommonOptions& common, bool random, int n,
                int k, int degree) {
  mvf::MslRecipe recipe;
  if (random) {
    recipe = mvf::random_recipe(n, k, degree, common.seed);
  } else {
    if (recipe_path.empty()) throw mvf::parse_error("msl-gen needs a recipe file or --random");
    recipe = mvf::load_recipe_file(recipe_path);
  }
  const mvf::MixedPolynomial f = mvf::msl_generate(recipe);
  const mvf::MslVerdict verdict = mvf::msl_check(f, mvf::MslMode::full);
  if (!verdict.ok) {
    // The construction guarantees a vanishing pairing; reaching this line
    // means the recipe machinery is broken, so fail loudly.
    throw mvf::error("generated function failed verification: " + verdict.witness);
  }
  write_output(common.out_path, mvf::serialize_mixed(f, {}));
  return kExitOk;
}

int cmd_report(const std::string& cert_path, const CommonOptions& common) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(slurp(cert_path));
  } catch (const nlohmann::json::exception& e) {
    throw mvf::parse_error(std::string("invalid certificate JSON: ") + e.what());
  }
  std::ostringstream os;
  os << "input:       " << doc["input"]["kind"].get<std::string>() << " (hash "
     << doc["input"]["content_hash"].get<std::string>() << ")\n";
  os << "conclusion:  " << doc["conclusion"]["criterion"].get<std::string>() << "\n";
  os << "claim:       " << doc["conclusion"]["claim"].get<std::string>() << "\n";
  for (const auto& assumption : doc["conclusion"]["assumptions"]) {
    os << "assumes:     " << assumption.get<std::string>() << "\n";
  }
  const auto& evidence = doc["evidence"];
  os << "a > 0 on samples: " << (evidence["all_sampled_a_positive"].get<bool>() ? "yes" : "no")
     << "\n";
  for (const auto& ev : evidence["per_radius"]) {
    os << "  radius " << ev["radius"].dump() << ": accepted " << ev["accepted"].dump() << "/"
       << ev["attempted"].dump() << ", a in [" << ev["min_a"].dump() << ", " << ev["max_a"].dump()
       << "], route disagreement " << ev["max_route_disagreement"].dump() << "\n";
  }
  os << "tube condition: " << evidence["tube_condition"]["verdict"].get<std::string>()
     << " (kappa " << evidence["tube_condition"]["kappa"].dump() << ") - "
     << evidence["tube_condition"]["label"].get<std::string>() << "\n";
  write_output(common.out_path, os.str());
  const bool ok = doc["conclusion"]["criterion"].get<std::string>() != "inconclusive" &&
                  evidence["all_sampled_a_positive"].get<bool>();
  return ok ? kExitOk : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Milnor vector field certification toolkit"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* check = app.add_subcommand("check", "certify a germ / mixed function / product");
  std::string check_input;
  bool assume_disc_zero = false;
  bool include_points = false;
  check->add_option("input", check_input, "input JSON document")->required();
  add_common(check, common, true);
  check->add_flag("--assume-disc-zero", assume_disc_zero,
                  "record the user's discriminant-at-origin assumption");
  check->add_flag("--points", include_points, "embed per-sample rows in the certificate");

  auto* sample = app.add_subcommand("milnor-sample", "sample the Milnor set and emit CSV");
  std::string sample_input;
  sample->add_option("input", sample_input, "input JSON document")->required();
  add_common(sample, common, true);

  auto* acoeff = app.add_subcommand("a-coeff", "evaluate the radial coefficient at a point");
  std::string acoeff_input, point_text, route = "all";
  int chart = -1;
  acoeff->add_option("input", acoeff_input, "input JSON document")->required();
  acoeff->add_option("--point", point_text, "comma-separated coordinates")->required();
  acoeff->add_option("--route", route, "cramer|alpha|matrix|leading|all");
  acoeff->add_option("--chart", chart, "force the omega chart (default: argmax |G_j|)");
  add_common(acoeff, common, false);

  auto* flow = app.add_subcommand("flow", "integrate the field from the tube to the sphere");
  std::string flow_input, start_text;
  double eta = 1e-4, eps = 1e-1;
  int fan = 8;
  mvf::StepperOptions stepper;
  flow->add_option("input", flow_input, "input JSON document")->required();
  flow->add_option("--start", start_text, "start point (auto-chosen on the tube when omitted)");
  flow->add_option("--eta", eta, "tube level ||G|| = eta for auto starts");
  flow->add_option("--eps", eps, "target sphere radius");
  flow->add_option("--fan", fan, "number of auto-chosen starts");
  flow->add_option("--step-init", stepper.initial_step, "initial step size");
  flow->add_option("--step-min", stepper.min_step, "minimal step size");
  flow->add_option("--step-max", stepper.max_step, "maximal step size");
  flow->add_option("--drift-tol", stepper.drift_tol, "componentwise Psi_G drift gate");
  flow->add_flag("!--no-gate-monotone", stepper.gate_monotone, "disable the monotonicity gate");
  flow->add_flag("!--no-gate-drift", stepper.gate_drift, "disable the drift gate");
  add_common(flow, common, false);

  auto* gen = app.add_subcommand("msl-gen", "build a mixed function with vanishing pairing");
  std::string recipe_path;
  bool random = false;
  int gen_n = 4, gen_k = 2, gen_deg = 3;
  gen->add_option("recipe", recipe_path, "recipe JSON document");
  gen->add_flag("--random", random, "generate from a random recipe");
  gen->add_option("--n", gen_n, "complex variable count for --random");
  gen->add_option("--k", gen_k, "first block size for --random");
  gen->add_option("--deg", gen_deg, "maximal piece degree for --random");
  add_common(gen, common, false);

  auto* report = app.add_subcommand("report", "summarize a certificate document");
  std::string report_input;
  report->add_option("certificate", report_input, "certificate JSON document")->required();
  add_common(report, common, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(check_input, common, assume_disc_zero, include_points);
    if (sample->parsed()) return cmd_milnor_sample(sample_input, common);
    if (acoeff->parsed()) return cmd_a_coeff(acoeff_input, common, point_text, route, chart);
    if (flow->parsed()) return cmd_flow(flow_input, common, start_text, eta, eps, fan, stepper);
    if (gen->parsed()) return cmd_msl_gen(recipe_path, common, random, gen_n, gen_k, gen_deg);
    if (report->parsed()) return cmd_report(report_input, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
