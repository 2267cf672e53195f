#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mvf/germ.hpp"
#include "mvf/mixed.hpp"
#include "mvf/polynomial.hpp"
#include "mvf/rng.hpp"

namespace mvf::test {

inline std::string data_path(const std::string& rel) { return std::string(MVF_DATA_DIR) + "/" + rel; }

inline Rational random_rational(SplitMix64& rng, int max_abs = 10) {
  int numer = rng.uniform_int(-max_abs, max_abs);
  if (numer == 0) numer = 1;
  return make_rational(numer, rng.uniform_int(1, 4));
}

inline Polynomial random_polynomial(SplitMix64& rng, int num_vars, int max_degree, int max_terms,
                                    bool zero_constant = true) {
  while (true) {
    std::vector<Term> terms;
    const int count = rng.uniform_int(1, max_terms);
    for (int t = 0; t < count; ++t) {
      Exponents exps(num_vars, 0);
      const int degree = rng.uniform_int(zero_constant ? 1 : 0, max_degree);
      for (int d = 0; d < degree; ++d) ++exps[rng.uniform_int(0, num_vars - 1)];
      terms.push_back({std::move(exps), random_rational(rng)});
    }
    Polynomial poly(num_vars, std::move(terms));
    if (!poly.is_zero()) return poly;
  }
}

inline PolyMapGerm random_germ(SplitMix64& rng, int num_vars, int num_components, int max_degree) {
  std::vector<Polynomial> comps;
  for (int k = 0; k < num_components; ++k) {
    comps.push_back(random_polynomial(rng, num_vars, max_degree, 4, true));
  }
  return PolyMapGerm(std::move(comps));
}

inline MixedPolynomial random_mixed(SplitMix64& rng, int num_cvars, int max_degree, int max_terms,
                                    bool holomorphic_only = false) {
  while (true) {
    std::vector<MixedTerm> terms;
    const int count = rng.uniform_int(1, max_terms);
    for (int t = 0; t < count; ++t) {
      MixedTerm term;
      term.zexp.assign(num_cvars, 0);
      term.zbarexp.assign(num_cvars, 0);
      const int degree = rng.uniform_int(1, max_degree);
      for (int d = 0; d < degree; ++d) {
        if (holomorphic_only || rng.uniform() < 0.5) {
          ++term.zexp[rng.uniform_int(0, num_cvars - 1)];
        } else {
          ++term.zbarexp[rng.uniform_int(0, num_cvars - 1)];
        }
      }
      term.coef = ComplexRational(random_rational(rng, 5),
                                  holomorphic_only && rng.uniform() < 0.5 ? Rational(0)
                                                                          : random_rational(rng, 5));
      terms.push_back(std::move(term));
    }
    MixedPolynomial poly(num_cvars, std::move(terms));
    if (!poly.is_zero()) return poly;
  }
}

inline Eigen::VectorXd random_point(SplitMix64& rng, int dim, double scale = 1.0) {
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x[i] = scale * (2.0 * rng.uniform() - 1.0);
  return x;
}

inline Eigen::VectorXcd random_cpoint(SplitMix64& rng, int dim, double scale = 1.0) {
  Eigen::VectorXcd z(dim);
  for (int i = 0; i < dim; ++i) {
    z[i] = std::complex<double>(scale * (2.0 * rng.uniform() - 1.0),
                                scale * (2.0 * rng.uniform() - 1.0));
  }
  return z;
}

/// The running example G = (xy, xz) on R^3.
inline PolyMapGerm cone_germ() {
  const int m = 3;
  auto mono = [&](Exponents e) { return Polynomial::monomial(m, std::move(e), Rational(1)); };
  return PolyMapGerm({mono({1, 1, 0}), mono({1, 0, 1})}, {"x", "y", "z"});
}

/// The Milnor point P = (sqrt 2, 1, 1) of the running example.
inline Eigen::VectorXd cone_point() {
  Eigen::VectorXd p(3);
  p << std::sqrt(2.0), 1.0, 1.0;
  return p;
}

}  // namespace mvf::test
