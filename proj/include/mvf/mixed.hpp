#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "mvf/germ.hpp"
#include "mvf/polynomial.hpp"

namespace mvf {

struct MixedTerm {
  Exponents zexp;
  Exponents zbarexp;
  ComplexRational coef;
};

/// Polynomial in (z, zbar) over C^n with exact complex rational coefficients.
///
/// Canonically ordered (graded lex on the concatenated exponent pair), no
/// zero coefficients, no duplicate (zexp, zbarexp) pairs. Input germs must
/// additionally vanish at the origin; derived objects (Wirtinger partials,
/// pairings, real/imaginary parts) may carry constant terms.
class MixedPolynomial {
 public:
  explicit MixedPolynomial(int num_cvars);
  MixedPolynomial(int num_cvars, std::vector<MixedTerm> terms);  // normalizes

  int num_cvars() const { return num_cvars_; }
  const std::vector<MixedTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_constant_term() const;
  /// All zbar exponents zero.
  bool is_holomorphic() const;
  /// Max over terms of |zexp| + |zbarexp|.
  int total_degree() const;

  MixedPolynomial operator-() const;
  friend MixedPolynomial operator+(const MixedPolynomial& a, const MixedPolynomial& b);
  friend MixedPolynomial operator-(const MixedPolynomial& a, const MixedPolynomial& b);
  friend MixedPolynomial operator*(const MixedPolynomial& a, const MixedPolynomial& b);
  MixedPolynomial scaled(const ComplexRational& factor) const;
  friend bool operator==(const MixedPolynomial& a, const MixedPolynomial& b);

  /// Complex conjugate as a mixed polynomial: swaps z and zbar exponents
  /// and conjugates coefficients.
  MixedPolynomial conjugated() const;

  /// Formal Wirtinger partials.
  MixedPolynomial wirtinger_z(int var) const;
  MixedPolynomial wirtinger_zbar(int var) const;

  /// (f + conj f)/2 and (f - conj f)/(2i), both mixed polynomials
  /// representing the real-valued functions Re f and Im f.
  MixedPolynomial real_part() const;
  MixedPolynomial imag_part() const;

  std::complex<double> eval(const Eigen::VectorXcd& point) const;

  std::string to_string(std::span<const std::string> cvar_names = {}) const;

 private:
  int num_cvars_;
  std::vector<MixedTerm> terms_;

  void normalize();
};

/// Wirtinger data of f at one point: value, holomorphic and anti-holomorphic
/// gradients, and the Hermitian pairing <conj(df), dbar f> with the
/// convention <u, v> = sum_j u_j * conj(v_j).
struct WirtingerFrame {
  Eigen::VectorXcd point;
  std::complex<double> value;
  Eigen::VectorXcd dholo;      // (df/dz_1, ..., df/dz_n)
  Eigen::VectorXcd dantiholo;  // (df/dzbar_1, ..., df/dzbar_n)
  std::complex<double> pairing;
};

WirtingerFrame wirtinger_frame(const MixedPolynomial& f, const Eigen::VectorXcd& point);

/// Raw realification (u, v) = (Re f, Im f) over the interleaved real
/// variables (x1, y1, ..., xn, yn) under z_j = x_j + i y_j. Always succeeds;
/// a component may be the zero polynomial (e.g. f = z*conj(z) gives v = 0).
std::pair<Polynomial, Polynomial> realify_parts(const MixedPolynomial& f);

/// Same as realify_parts but packaged as a real germ; throws when a
/// component is constant and therefore not admissible as a germ component.
PolyMapGerm realify(const MixedPolynomial& f, const std::vector<std::string>& cvar_names = {});

/// Interleaves a complex point into the realified coordinates.
Eigen::VectorXd realify_point(const Eigen::VectorXcd& z);

enum class MslMode { full, im_only };

struct MslVerdict {
  bool ok = false;
  std::string witness;  // a nonzero pairing term when !ok
};

/// Tests whether the formal pairing <conj(df), dbar f> vanishes identically
/// (mode full: both parts; mode im_only: only the imaginary part). Exact.
MslVerdict msl_check(const MixedPolynomial& f, MslMode mode = MslMode::full);

/// Construction data for mixed functions with identically vanishing pairing:
/// a split of the coordinates into two blocks plus holomorphic pieces, combined
/// as sum_a f_a * conj(g_a) + sum_b r_b + sum_c conj(h_c).
struct MslRecipe {
  int n = 0;                  // total complex variables
  std::vector<int> block;     // 0-based indices of the first block, ascending
  std::vector<Polynomial> f;  // over the first block, |f| == |g|
  std::vector<Polynomial> g;  // over the second block
  std::vector<Polynomial> r;  // over the first block
  std::vector<Polynomial> h;  // over the second block

  std::vector<int> complement() const;
  void validate() const;
};

MixedPolynomial msl_generate(const MslRecipe& recipe);

/// Deterministic random recipe; every output of msl_generate on it passes
/// msl_check(full) exactly.
MslRecipe random_recipe(int n, int k, int max_degree, uint64_t seed);

/// F(z, w) = f(z) * g(w) with concatenated variables.
MixedPolynomial separable_product(const MixedPolynomial& f, const MixedPolynomial& g);

/// Residuals of the separable-product identities evaluated at one point:
///   grad ||F||^2 = (||g||^2 grad ||f||^2, ||f||^2 grad ||g||^2)
///   Omega_F      = (||g||^2 Omega_f,      ||f||^2 Omega_g)
/// with Omega_h = u_h grad v_h - v_h grad u_h on the realifications.
struct ProductIdentityResiduals {
  double grad_residual = 0;
  double grad_scale = 0;
  double omega_residual = 0;
  double omega_scale = 0;
};

ProductIdentityResiduals product_identity_residuals(const MixedPolynomial& f,
                                                    const MixedPolynomial& g,
                                                    const Eigen::VectorXcd& point);

/// Mixed germ documents:
///   {"kind":"mixed","cvars":["z1","z2"],
///    "terms":[{"coef":["1","0"],"zexp":[2,0],"zbarexp":[0,2]}]}
struct MixedInput {
  MixedPolynomial poly;
  std::vector<std::string> cvar_names;
};

MixedInput parse_mixed(const std::string& json_text);
MixedInput load_mixed_file(const std::string& path);
std::string serialize_mixed(const MixedPolynomial& f, const std::vector<std::string>& cvar_names);

/// Recipe documents: {"n":4,"block":[1,3],"f":[[term...]],"g":[...],"r":[...],"h":[...]}
/// with 1-based block indices and pieces in the real term format over their
/// block's variables.
MslRecipe parse_recipe(const std::string& json_text);
MslRecipe load_recipe_file(const std::string& path);

}  // namespace mvf
