#include "mvf/polynomial.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "mvf/error.hpp"

namespace mvf {

int exponent_degree(const Exponents& exps) {
  return std::accumulate(exps.begin(), exps.end(), 0);
}

bool graded_lex_less(const Exponents& a, const Exponents& b) {
  const int da = exponent_degree(a);
  const int db = exponent_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0) throw domain_error("polynomial needs a non-negative variable count");
}

Polynomial::Polynomial(int num_vars, std::vector<Term> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  if (num_vars < 0) throw domain_error("polynomial needs a non-negative variable count");
  normalize();
}

void Polynomial::normalize() {
  std::map<Exponents, Rational, decltype(&graded_lex_less)> acc(&graded_lex_less);
  for (auto& term : terms_) {
    if (static_cast<int>(term.exps.size()) != num_vars_) {
      throw domain_error("term exponent vector length does not match variable count");
    }
    for (int e : term.exps) {
      if (e < 0) throw domain_error("negative exponent in polynomial term");
    }
    acc[term.exps] += term.coef;
  }
  terms_.clear();
  for (auto& [exps, coef] : acc) {
    if (coef != 0) terms_.push_back({exps, coef});
  }
}

Polynomial Polynomial::constant(int num_vars, Rational value) {
  Polynomial p(num_vars);
  if (value != 0) p.terms_.push_back({Exponents(num_vars, 0), std::move(value)});
  return p;
}

Polynomial Polynomial::monomial(int num_vars, Exponents exps, Rational coef) {
  return Polynomial(num_vars, {Term{std::move(exps), std::move(coef)}});
}

Polynomial Polynomial::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars) throw domain_error("variable index out of range");
  Exponents exps(num_vars, 0);
  exps[index] = 1;
  return monomial(num_vars, std::move(exps), Rational(1));
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && exponent_degree(terms_[0].exps) == 0);
}

bool Polynomial::has_constant_term() const {
  return !terms_.empty() && exponent_degree(terms_.front().exps) == 0;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return exponent_degree(terms_.back().exps);
}

int Polynomial::lowest_degree() const {
  if (terms_.empty()) throw domain_error("the zero polynomial has no lowest degree");
  return exponent_degree(terms_.front().exps);
}

Polynomial Polynomial::operator-() const {
  Polynomial out(num_vars_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.exps, -t.coef});
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw domain_error("adding polynomials over different variables");
  std::vector<Term> merged = a.terms_;
  merged.insert(merged.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(a.num_vars_, std::move(merged));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) {
    throw domain_error("multiplying polynomials over different variables");
  }
  std::vector<Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Exponents exps(a.num_vars_);
      for (int i = 0; i < a.num_vars_; ++i) exps[i] = ta.exps[i] + tb.exps[i];
      products.push_back({std::move(exps), ta.coef * tb.coef});
    }
  }
  return Polynomial(a.num_vars_, std::move(products));
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  if (factor == 0) return Polynomial(num_vars_);
  Polynomial out(num_vars_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.exps, t.coef * factor});
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

Polynomial Polynomial::partial(int var_index) const {
  if (var_index < 0 || var_index >= num_vars_) {
    throw domain_error("partial derivative index out of range");
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const int e = t.exps[var_index];
    if (e == 0) continue;
    Exponents exps = t.exps;
    exps[var_index] = e - 1;
    out.push_back({std::move(exps), t.coef * e});
  }
  return Polynomial(num_vars_, std::move(out));
}

namespace {

template <typename Scalar>
Scalar eval_term(const Exponents& exps, std::span<const Scalar> point, Scalar acc) {
  for (size_t i = 0; i < exps.size(); ++i) {
    for (int k = 0; k < exps[i]; ++k) acc *= point[i];
  }
  return acc;
}

}  // namespace

double Polynomial::eval(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != num_vars_) {
    throw domain_error("evaluation point has wrong dimension");
  }
  double sum = 0.0;
  for (const auto& t : terms_) sum += eval_term<double>(t.exps, point, t.coef.get_d());
  return sum;
}

Rational Polynomial::eval_exact(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != num_vars_) {
    throw domain_error("evaluation point has wrong dimension");
  }
  Rational sum(0);
  for (const auto& t : terms_) sum += eval_term<Rational>(t.exps, point, t.coef);
  return sum;
}

std::vector<std::pair<int, Polynomial>> Polynomial::homogeneous_parts() const {
  if (terms_.empty()) throw domain_error("the zero polynomial has no homogeneous decomposition");
  std::vector<std::pair<int, Polynomial>> parts;
  for (const auto& t : terms_) {  // terms are degree-sorted already
    const int d = exponent_degree(t.exps);
    if (parts.empty() || parts.back().first != d) parts.emplace_back(d, Polynomial(num_vars_));
    parts.back().second.terms_.push_back(t);
  }
  return parts;
}

Polynomial Polynomial::higher_order_euler_weight() const {
  if (terms_.empty()) return Polynomial(num_vars_);
  const int lowest = lowest_degree();
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const int excess = exponent_degree(t.exps) - lowest;
    if (excess > 0) out.push_back({t.exps, t.coef * excess});
  }
  return Polynomial(num_vars_, std::move(out));
}

std::string Polynomial::to_string(std::span<const std::string> var_names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // print highest degree first; reads like handwritten polynomials
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& t = *it;
    std::string coef = rational_to_string(t.coef);
    bool negative = !coef.empty() && coef.front() == '-';
    if (negative) coef.erase(coef.begin());
    os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;

    std::string monomial;
    for (int i = 0; i < num_vars_; ++i) {
      if (t.exps[i] == 0) continue;
      if (!monomial.empty()) monomial += "*";
      monomial += (i < static_cast<int>(var_names.size())) ? var_names[i]
                                                           : "x" + std::to_string(i + 1);
      if (t.exps[i] > 1) monomial += "^" + std::to_string(t.exps[i]);
    }
    if (monomial.empty()) {
      os << coef;
    } else if (coef == "1") {
      os << monomial;
    } else {
      os << coef << "*" << monomial;
    }
  }
  return os.str();
}

double euler_residual(const Polynomial& poly, std::span<const double> point) {
  if (static_cast<int>(point.size()) != poly.num_vars()) {
    throw domain_error("evaluation point has wrong dimension");
  }
  double lhs = 0.0;
  for (int i = 0; i < poly.num_vars(); ++i) lhs += poly.partial(i).eval(point) * point[i];
  double rhs = 0.0;
  if (!poly.is_zero()) {
    for (const auto& [degree, part] : poly.homogeneous_parts()) rhs += degree * part.eval(point);
  }
  return lhs - rhs;
}

Rational euler_residual_exact(const Polynomial& poly, std::span<const Rational> point) {
  if (static_cast<int>(point.size()) != poly.num_vars()) {
    throw domain_error("evaluation point has wrong dimension");
  }
  Rational lhs(0);
  for (int i = 0; i < poly.num_vars(); ++i) {
    lhs += poly.partial(i).eval_exact(point) * point[i];
  }
  Rational rhs(0);
  if (!poly.is_zero()) {
    for (const auto& [degree, part] : poly.homogeneous_parts()) {
      rhs += Rational(degree) * part.eval_exact(point);
    }
  }
  return lhs - rhs;
}

}  // namespace mvf
