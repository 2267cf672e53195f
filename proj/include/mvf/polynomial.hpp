#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvf/rational.hpp"

namespace mvf {

using Exponents = std::vector<int>;

int exponent_degree(const Exponents& exps);

/// Graded lexicographic order on exponent vectors (total degree first).
bool graded_lex_less(const Exponents& a, const Exponents& b);

struct Term {
  Exponents exps;
  Rational coef;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in graded lexicographic order with no zero coefficients
/// and no duplicate exponent vectors, so structural equality is a valid
/// zero test.
class Polynomial {
 public:
  explicit Polynomial(int num_vars);
  Polynomial(int num_vars, std::vector<Term> terms);  // normalizes

  static Polynomial zero(int num_vars) { return Polynomial(num_vars); }
  static Polynomial constant(int num_vars, Rational value);
  static Polynomial monomial(int num_vars, Exponents exps, Rational coef);
  static Polynomial variable(int num_vars, int index);

  int num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool has_constant_term() const;

  /// Highest total degree; -1 for the zero polynomial.
  int total_degree() const;
  /// Lowest total degree (the multiplicity of the germ component); throws on zero.
  int lowest_degree() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& factor) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Exact formal partial derivative.
  Polynomial partial(int var_index) const;

  double eval(std::span<const double> point) const;
  Rational eval_exact(std::span<const Rational> point) const;

  /// Homogeneous parts sorted by ascending degree; their sum is the input.
  std::vector<std::pair<int, Polynomial>> homogeneous_parts() const;

  /// Sum over terms of (degree - lowest_degree) * term; the weight vector of
  /// the part of <grad P(x), x> above the leading homogeneous contribution.
  Polynomial higher_order_euler_weight() const;

  std::string to_string(std::span<const std::string> var_names = {}) const;

 private:
  int num_vars_;
  std::vector<Term> terms_;

  void normalize();
};

/// <grad poly(x), x> - sum_d d * part_d(x): zero for every polynomial by the
/// Euler identity applied per homogeneous part. Floating-point version.
double euler_residual(const Polynomial& poly, std::span<const double> point);

/// Same residual in exact arithmetic; identically zero.
Rational euler_residual_exact(const Polynomial& poly, std::span<const Rational> point);

}  // namespace mvf
