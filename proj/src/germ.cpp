#include "mvf/germ.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvf/error.hpp"

namespace mvf {

using ordered_json = nlohmann::ordered_json;

PolyMapGerm::PolyMapGerm(std::vector<Polynomial> components, std::vector<std::string> var_names)
    : components_(std::move(components)), var_names_(std::move(var_names)) {
  if (components_.empty()) throw domain_error("a map germ needs at least one component");
  num_vars_ = components_.front().num_vars();
  const int p = static_cast<int>(components_.size());
  if (p > num_vars_) {
    throw domain_error("p > m or empty: a germ needs at least as many variables as components");
  }
  for (const auto& g : components_) {
    if (g.num_vars() != num_vars_) {
      throw domain_error("all components must share one variable set");
    }
    if (g.is_zero()) throw domain_error("zero polynomial component is not a valid germ");
    if (g.has_constant_term()) {
      throw domain_error("nonzero constant term: the germ must send the origin to 0");
    }
  }
  if (!var_names_.empty() && static_cast<int>(var_names_.size()) != num_vars_) {
    throw domain_error("variable name list length does not match the variable count");
  }
  if (var_names_.empty()) {
    for (int i = 0; i < num_vars_; ++i) var_names_.push_back("x" + std::to_string(i + 1));
  }

  gradients_.resize(p);
  hessians_.resize(p);
  for (int k = 0; k < p; ++k) {
    gradients_[k].reserve(num_vars_);
    for (int i = 0; i < num_vars_; ++i) gradients_[k].push_back(components_[k].partial(i));
    hessians_[k].resize(num_vars_);
    for (int i = 0; i < num_vars_; ++i) {
      hessians_[k][i].resize(num_vars_, Polynomial(num_vars_));
      for (int j = i; j < num_vars_; ++j) hessians_[k][i][j] = gradients_[k][i].partial(j);
    }
  }

  norm_sq_ = Polynomial(num_vars_);
  for (const auto& g : components_) norm_sq_ = norm_sq_ + g * g;
  grad_norm_sq_.reserve(num_vars_);
  for (int i = 0; i < num_vars_; ++i) grad_norm_sq_.push_back(norm_sq_.partial(i));

  for (const auto& g : components_) {
    multiplicities_.push_back(g.lowest_degree());
    euler_excess_.push_back(g.higher_order_euler_weight());
  }
}

const Polynomial& PolyMapGerm::hessian(int comp, int v1, int v2) const {
  if (v1 > v2) std::swap(v1, v2);
  return hessians_.at(comp).at(v1).at(v2);
}

int PolyMapGerm::min_multiplicity() const {
  return *std::min_element(multiplicities_.begin(), multiplicities_.end());
}

EvalFrame PolyMapGerm::eval_frame(const Eigen::VectorXd& point) const {
  if (point.size() != num_vars_) throw domain_error("evaluation point has wrong dimension");
  EvalFrame frame;
  frame.point = point;
  frame.values = eval_values(point);
  frame.jacobian = eval_jacobian(point);
  frame.grad_norm_sq.resize(num_vars_);
  const std::span<const double> xs(point.data(), static_cast<size_t>(point.size()));
  for (int i = 0; i < num_vars_; ++i) frame.grad_norm_sq[i] = grad_norm_sq_[i].eval(xs);
  frame.grad_rho = 2.0 * point;
  return frame;
}

Eigen::VectorXd PolyMapGerm::eval_values(const Eigen::VectorXd& point) const {
  if (point.size() != num_vars_) throw domain_error("evaluation point has wrong dimension");
  const std::span<const double> xs(point.data(), static_cast<size_t>(point.size()));
  Eigen::VectorXd values(num_components());
  for (int k = 0; k < num_components(); ++k) values[k] = components_[k].eval(xs);
  return values;
}

Eigen::MatrixXd PolyMapGerm::eval_jacobian(const Eigen::VectorXd& point) const {
  if (point.size() != num_vars_) throw domain_error("evaluation point has wrong dimension");
  const std::span<const double> xs(point.data(), static_cast<size_t>(point.size()));
  Eigen::MatrixXd jac(num_components(), num_vars_);
  for (int k = 0; k < num_components(); ++k) {
    for (int i = 0; i < num_vars_; ++i) jac(k, i) = gradients_[k][i].eval(xs);
  }
  return jac;
}

double PolyMapGerm::eval_norm(const Eigen::VectorXd& point) const {
  return eval_values(point).norm();
}

Eigen::MatrixXd fd_jacobian_oracle(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                                   double step) {
  if (step <= 0) throw domain_error("finite-difference step must be positive");
  if (point.size() != germ.num_vars()) throw domain_error("evaluation point has wrong dimension");
  Eigen::MatrixXd jac(germ.num_components(), germ.num_vars());
  Eigen::VectorXd shifted = point;
  for (int i = 0; i < germ.num_vars(); ++i) {
    shifted[i] = point[i] + step;
    const Eigen::VectorXd forward = germ.eval_values(shifted);
    shifted[i] = point[i] - step;
    const Eigen::VectorXd backward = germ.eval_values(shifted);
    shifted[i] = point[i];
    jac.col(i) = (forward - backward) / (2.0 * step);
  }
  return jac;
}

namespace {

Polynomial parse_component(const ordered_json& terms, int num_vars) {
  if (!terms.is_array()) throw parse_error("component must be an array of terms");
  std::vector<Term> parsed;
  for (const auto& term : terms) {
    if (!term.is_object() || !term.contains("coef") || !term.contains("exps")) {
      throw parse_error("each term needs 'coef' and 'exps'");
    }
    if (!term["coef"].is_string()) throw parse_error("'coef' must be a rational string");
    if (!term["exps"].is_array() || static_cast<int>(term["exps"].size()) != num_vars) {
      throw parse_error("'exps' must list one exponent per variable");
    }
    Exponents exps;
    for (const auto& e : term["exps"]) {
      if (!e.is_number_integer() || e.get<int>() < 0) {
        throw parse_error("exponents must be non-negative integers");
      }
      exps.push_back(e.get<int>());
    }
    parsed.push_back({std::move(exps), parse_rational(term["coef"].get<std::string>())});
  }
  return Polynomial(num_vars, std::move(parsed));
}

}  // namespace

PolyMapGerm parse_germ(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("kind", "") != "real") {
    throw parse_error("germ document must be an object with kind == 'real'");
  }
  if (!doc.contains("vars") || !doc["vars"].is_array() || doc["vars"].empty()) {
    throw parse_error("p > m or empty: germ document needs a non-empty 'vars' list");
  }
  std::vector<std::string> vars;
  for (const auto& v : doc["vars"]) {
    if (!v.is_string()) throw parse_error("'vars' entries must be strings");
    vars.push_back(v.get<std::string>());
  }
  if (!doc.contains("components") || !doc["components"].is_array() || doc["components"].empty()) {
    throw parse_error("germ document needs a non-empty 'components' list");
  }
  const int m = static_cast<int>(vars.size());
  if (static_cast<int>(doc["components"].size()) > m) {
    throw parse_error("p > m or empty: more components than variables");
  }
  std::vector<Polynomial> components;
  for (const auto& comp : doc["components"]) components.push_back(parse_component(comp, m));
  try {
    return PolyMapGerm(std::move(components), std::move(vars));
  } catch (const domain_error& e) {
    throw parse_error(e.what());
  }
}

PolyMapGerm load_germ_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open germ file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_germ(buf.str());
}

std::string serialize_germ(const PolyMapGerm& germ) {
  ordered_json doc;
  doc["kind"] = "real";
  doc["vars"] = germ.var_names();
  ordered_json components = ordered_json::array();
  for (const auto& g : germ.components()) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : g.terms()) {
      ordered_json term;
      term["coef"] = rational_to_string(t.coef);
      term["exps"] = t.exps;
      terms.push_back(std::move(term));
    }
    components.push_back(std::move(terms));
  }
  doc["components"] = std::move(components);
  return doc.dump(2) + "\n";
}

}  // namespace mvf
