#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mvf/polynomial.hpp"

namespace mvf {

/// Everything the pointwise analysis needs at one point x:
/// G(x), JG(x), grad ||G(x)||^2 and grad rho(x) with rho(x) = ||x||^2.
struct EvalFrame {
  Eigen::VectorXd point;
  Eigen::VectorXd values;        // G(x), length p
  Eigen::MatrixXd jacobian;      // p x m, row k = grad G_k(x)
  Eigen::VectorXd grad_norm_sq;  // grad ||G(x)||^2, length m
  Eigen::VectorXd grad_rho;      // 2x, length m
};

/// Real polynomial map germ G : (R^m, 0) -> (R^p, 0).
///
/// Components are non-constant polynomials with zero constant term and
/// 1 <= p <= m. Gradients, the norm-square polynomial and its gradient,
/// Hessians and per-component multiplicities are precomputed once; the
/// object is immutable afterwards and safe to share across threads.
class PolyMapGerm {
 public:
  explicit PolyMapGerm(std::vector<Polynomial> components,
                       std::vector<std::string> var_names = {});

  int num_vars() const { return num_vars_; }
  int num_components() const { return static_cast<int>(components_.size()); }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& component(int k) const { return components_.at(k); }
  const std::vector<std::string>& var_names() const { return var_names_; }

  const Polynomial& gradient(int comp, int var) const { return gradients_.at(comp).at(var); }
  const std::vector<std::vector<Polynomial>>& gradients() const { return gradients_; }

  /// ||G||^2 = sum_k G_k^2 as an exact polynomial.
  const Polynomial& norm_sq_poly() const { return norm_sq_; }
  const Polynomial& grad_norm_sq_poly(int var) const { return grad_norm_sq_.at(var); }

  /// Second partials of component `comp`; symmetric in (v1, v2).
  const Polynomial& hessian(int comp, int v1, int v2) const;

  /// Lowest homogeneous degree of each component.
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  int min_multiplicity() const;

  /// Per component: sum over terms of (degree - multiplicity) * term.
  /// Evaluates to <grad G_k(x), x> - m_k G_k(x).
  const Polynomial& euler_excess(int comp) const { return euler_excess_.at(comp); }

  EvalFrame eval_frame(const Eigen::VectorXd& point) const;

  Eigen::VectorXd eval_values(const Eigen::VectorXd& point) const;
  Eigen::MatrixXd eval_jacobian(const Eigen::VectorXd& point) const;
  double eval_norm(const Eigen::VectorXd& point) const;

 private:
  int num_vars_;
  std::vector<Polynomial> components_;
  std::vector<std::string> var_names_;
  std::vector<std::vector<Polynomial>> gradients_;            // [p][m]
  std::vector<std::vector<std::vector<Polynomial>>> hessians_;  // [p][m][m], upper triangle
  Polynomial norm_sq_ = Polynomial(0);
  std::vector<Polynomial> grad_norm_sq_;
  std::vector<int> multiplicities_;
  std::vector<Polynomial> euler_excess_;
};

/// Central-difference Jacobian; the derivative oracle that never touches the
/// formal differentiation path.
Eigen::MatrixXd fd_jacobian_oracle(const PolyMapGerm& germ, const Eigen::VectorXd& point,
                                   double step);

/// Germ document parsing/serialization. The JSON layout is
///   {"kind":"real","vars":["x","y","z"],
///    "components":[[{"coef":"1","exps":[1,1,0]}],[{"coef":"1","exps":[1,0,1]}]]}
/// with coefficients as exact rational strings ("-3/2" allowed).
PolyMapGerm parse_germ(const std::string& json_text);
PolyMapGerm load_germ_file(const std::string& path);
std::string serialize_germ(const PolyMapGerm& germ);

}  // namespace mvf
