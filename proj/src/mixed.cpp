#include "mvf/mixed.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvf/error.hpp"
#include "mvf/rng.hpp"

namespace mvf {

using ordered_json = nlohmann::ordered_json;

namespace {

Exponents concat_exps(const Exponents& a, const Exponents& b) {
  Exponents out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

MixedPolynomial::MixedPolynomial(int num_cvars) : num_cvars_(num_cvars) {
  if (num_cvars <= 0) throw domain_error("mixed polynomial needs a positive variable count");
}

MixedPolynomial::MixedPolynomial(int num_cvars, std::vector<MixedTerm> terms)
    : num_cvars_(num_cvars), terms_(std::move(terms)) {
  if (num_cvars <= 0) throw domain_error("mixed polynomial needs a positive variable count");
  normalize();
}

void MixedPolynomial::normalize() {
  std::map<Exponents, ComplexRational, decltype(&graded_lex_less)> acc(&graded_lex_less);
  for (auto& term : terms_) {
    if (static_cast<int>(term.zexp.size()) != num_cvars_ ||
        static_cast<int>(term.zbarexp.size()) != num_cvars_) {
      throw domain_error("mixed term exponent vectors must match the variable count");
    }
    for (int e : term.zexp) {
      if (e < 0) throw domain_error("negative exponent in mixed term");
    }
    for (int e : term.zbarexp) {
      if (e < 0) throw domain_error("negative exponent in mixed term");
    }
    acc[concat_exps(term.zexp, term.zbarexp)] = acc[concat_exps(term.zexp, term.zbarexp)] + term.coef;
  }
  terms_.clear();
  for (auto& [key, coef] : acc) {
    if (coef.is_zero()) continue;
    Exponents zexp(key.begin(), key.begin() + num_cvars_);
    Exponents zbarexp(key.begin() + num_cvars_, key.end());
    terms_.push_back({std::move(zexp), std::move(zbarexp), coef});
  }
}

bool MixedPolynomial::has_constant_term() const {
  return !terms_.empty() && exponent_degree(terms_.front().zexp) == 0 &&
         exponent_degree(terms_.front().zbarexp) == 0;
}

bool MixedPolynomial::is_holomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const MixedTerm& t) { return exponent_degree(t.zbarexp) == 0; });
}

int MixedPolynomial::total_degree() const {
  int deg = -1;
  for (const auto& t : terms_) {
    deg = std::max(deg, exponent_degree(t.zexp) + exponent_degree(t.zbarexp));
  }
  return deg;
}

MixedPolynomial MixedPolynomial::operator-() const {
  MixedPolynomial out(num_cvars_);
  for (const auto& t : terms_) out.terms_.push_back({t.zexp, t.zbarexp, -t.coef});
  return out;
}

MixedPolynomial operator+(const MixedPolynomial& a, const MixedPolynomial& b) {
  if (a.num_cvars_ != b.num_cvars_) {
    throw domain_error("adding mixed polynomials over different variables");
  }
  std::vector<MixedTerm> merged = a.terms_;
  merged.insert(merged.end(), b.terms_.begin(), b.terms_.end());
  return MixedPolynomial(a.num_cvars_, std::move(merged));
}

MixedPolynomial operator-(const MixedPolynomial& a, const MixedPolynomial& b) { return a + (-b); }

MixedPolynomial operator*(const MixedPolynomial& a, const MixedPolynomial& b) {
  if (a.num_cvars_ != b.num_cvars_) {
    throw domain_error("multiplying mixed polynomials over different variables");
  }
  std::vector<MixedTerm> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Exponents zexp(a.num_cvars_), zbarexp(a.num_cvars_);
      for (int i = 0; i < a.num_cvars_; ++i) {
        zexp[i] = ta.zexp[i] + tb.zexp[i];
        zbarexp[i] = ta.zbarexp[i] + tb.zbarexp[i];
      }
      products.push_back({std::move(zexp), std::move(zbarexp), ta.coef * tb.coef});
    }
  }
  return MixedPolynomial(a.num_cvars_, std::move(products));
}

MixedPolynomial MixedPolynomial::scaled(const ComplexRational& factor) const {
  MixedPolynomial out(num_cvars_);
  if (factor.is_zero()) return out;
  for (const auto& t : terms_) out.terms_.push_back({t.zexp, t.zbarexp, t.coef * factor});
  return out;
}

bool operator==(const MixedPolynomial& a, const MixedPolynomial& b) {
  if (a.num_cvars_ != b.num_cvars_ || a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].zexp != b.terms_[i].zexp || a.terms_[i].zbarexp != b.terms_[i].zbarexp ||
        !(a.terms_[i].coef == b.terms_[i].coef)) {
      return false;
    }
  }
  return true;
}

MixedPolynomial MixedPolynomial::conjugated() const {
  MixedPolynomial out(num_cvars_);
  for (const auto& t : terms_) out.terms_.push_back({t.zbarexp, t.zexp, t.coef.conj()});
  out.normalize();
  return out;
}

MixedPolynomial MixedPolynomial::wirtinger_z(int var) const {
  if (var < 0 || var >= num_cvars_) throw domain_error("Wirtinger index out of range");
  std::vector<MixedTerm> out;
  for (const auto& t : terms_) {
    const int e = t.zexp[var];
    if (e == 0) continue;
    MixedTerm d = t;
    d.zexp[var] = e - 1;
    d.coef = d.coef * ComplexRational(Rational(e), Rational(0));
    out.push_back(std::move(d));
  }
  return MixedPolynomial(num_cvars_, std::move(out));
}

MixedPolynomial MixedPolynomial::wirtinger_zbar(int var) const {
  if (var < 0 || var >= num_cvars_) throw domain_error("Wirtinger index out of range");
  std::vector<MixedTerm> out;
  for (const auto& t : terms_) {
    const int e = t.zbarexp[var];
    if (e == 0) continue;
    MixedTerm d = t;
    d.zbarexp[var] = e - 1;
    d.coef = d.coef * ComplexRational(Rational(e), Rational(0));
    out.push_back(std::move(d));
  }
  return MixedPolynomial(num_cvars_, std::move(out));
}

MixedPolynomial MixedPolynomial::real_part() const {
  const ComplexRational half(Rational(1, 2), Rational(0));
  return (*this + conjugated()).scaled(half);
}

MixedPolynomial MixedPolynomial::imag_part() const {
  // (f - conj f)/(2i) = -(i/2) (f - conj f)
  const ComplexRational minus_half_i(Rational(0), Rational(-1, 2));
  return (*this - conjugated()).scaled(minus_half_i);
}

std::complex<double> MixedPolynomial::eval(const Eigen::VectorXcd& point) const {
  if (point.size() != num_cvars_) throw domain_error("evaluation point has wrong dimension");
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> acc(to_double(t.coef.re), to_double(t.coef.im));
    for (int i = 0; i < num_cvars_; ++i) {
      for (int k = 0; k < t.zexp[i]; ++k) acc *= point[i];
      for (int k = 0; k < t.zbarexp[i]; ++k) acc *= std::conj(point[i]);
    }
    sum += acc;
  }
  return sum;
}

std::string MixedPolynomial::to_string(std::span<const std::string> cvar_names) const {
  if (terms_.empty()) return "0";
  auto name = [&](int i) {
    return i < static_cast<int>(cvar_names.size()) ? cvar_names[i] : "z" + std::to_string(i + 1);
  };
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& t = *it;
    if (!first) os << " + ";
    first = false;
    os << "(" << complex_rational_to_string(t.coef) << ")";
    for (int i = 0; i < num_cvars_; ++i) {
      if (t.zexp[i] > 0) {
        os << "*" << name(i);
        if (t.zexp[i] > 1) os << "^" << t.zexp[i];
      }
      if (t.zbarexp[i] > 0) {
        os << "*conj(" << name(i) << ")";
        if (t.zbarexp[i] > 1) os << "^" << t.zbarexp[i];
      }
    }
  }
  return os.str();
}

WirtingerFrame wirtinger_frame(const MixedPolynomial& f, const Eigen::VectorXcd& point) {
  if (point.size() != f.num_cvars()) throw domain_error("evaluation point has wrong dimension");
  WirtingerFrame frame;
  frame.point = point;
  frame.value = f.eval(point);
  frame.dholo.resize(f.num_cvars());
  frame.dantiholo.resize(f.num_cvars());
  frame.pairing = 0.0;
  for (int j = 0; j < f.num_cvars(); ++j) {
    frame.dholo[j] = f.wirtinger_z(j).eval(point);
    frame.dantiholo[j] = f.wirtinger_zbar(j).eval(point);
    // <conj(df), dbar f> with the second argument conjugated
    frame.pairing += std::conj(frame.dholo[j]) * std::conj(frame.dantiholo[j]);
  }
  return frame;
}

namespace {

/// Complex polynomial over real variables, used only while realifying.
struct CPoly {
  Polynomial re, im;

  CPoly(int num_vars) : re(num_vars), im(num_vars) {}

  void times_var_pair(int re_var, int im_var, bool conjugate) {
    // multiply by (x + i y) or (x - i y)
    const int n = re.num_vars();
    const Polynomial x = Polynomial::variable(n, re_var);
    const Polynomial y = Polynomial::variable(n, im_var);
    Polynomial new_re = re * x;
    Polynomial new_im = im * x;
    if (conjugate) {
      new_re = new_re + im * y;
      new_im = new_im - re * y;
    } else {
      new_re = new_re - im * y;
      new_im = new_im + re * y;
    }
    re = std::move(new_re);
    im = std::move(new_im);
  }
};

}  // namespace

std::pair<Polynomial, Polynomial> realify_parts(const MixedPolynomial& f) {
  const int n = f.num_cvars();
  const int m = 2 * n;
  CPoly total(m);
  for (const auto& t : f.terms()) {
    CPoly factor(m);
    factor.re = Polynomial::constant(m, t.coef.re);
    factor.im = Polynomial::constant(m, t.coef.im);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < t.zexp[j]; ++k) factor.times_var_pair(2 * j, 2 * j + 1, false);
      for (int k = 0; k < t.zbarexp[j]; ++k) factor.times_var_pair(2 * j, 2 * j + 1, true);
    }
    total.re = total.re + factor.re;
    total.im = total.im + factor.im;
  }
  return {std::move(total.re), std::move(total.im)};
}

PolyMapGerm realify(const MixedPolynomial& f, const std::vector<std::string>& cvar_names) {
  auto [u, v] = realify_parts(f);
  std::vector<std::string> names;
  for (int j = 0; j < f.num_cvars(); ++j) {
    const std::string base =
        j < static_cast<int>(cvar_names.size()) ? cvar_names[j] : "z" + std::to_string(j + 1);
    names.push_back(base + "_re");
    names.push_back(base + "_im");
  }
  return PolyMapGerm({std::move(u), std::move(v)}, std::move(names));
}

Eigen::VectorXd realify_point(const Eigen::VectorXcd& z) {
  Eigen::VectorXd x(2 * z.size());
  for (int j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

namespace {

MixedPolynomial formal_pairing(const MixedPolynomial& f) {
  MixedPolynomial pairing(f.num_cvars());
  for (int j = 0; j < f.num_cvars(); ++j) {
    pairing = pairing + f.wirtinger_z(j).conjugated() * f.wirtinger_zbar(j).conjugated();
  }
  return pairing;
}

std::string first_term_string(const MixedPolynomial& p) {
  MixedPolynomial single(p.num_cvars(), {p.terms().front()});
  return single.to_string();
}

}  // namespace

MslVerdict msl_check(const MixedPolynomial& f, MslMode mode) {
  const MixedPolynomial pairing = formal_pairing(f);
  const MixedPolynomial tested = mode == MslMode::full ? pairing : pairing.imag_part();
  if (tested.is_zero()) return {true, ""};
  return {false, first_term_string(tested)};
}

std::vector<int> MslRecipe::complement() const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(block.begin(), block.end(), i)) out.push_back(i);
  }
  return out;
}

void MslRecipe::validate() const {
  if (n < 2) throw domain_error("recipe needs at least two complex variables");
  const int k = static_cast<int>(block.size());
  if (k < 1 || k >= n) throw domain_error("block must be a proper nonempty subset of the variables");
  for (size_t i = 0; i < block.size(); ++i) {
    if (block[i] < 0 || block[i] >= n) throw domain_error("block index out of range");
    if (i > 0 && block[i] <= block[i - 1]) throw domain_error("block indices must be ascending");
  }
  if (f.size() != g.size()) {
    throw domain_error("recipe needs matching counts of f and g pieces");
  }
  if (f.empty() && r.empty() && h.empty()) throw domain_error("recipe has no pieces");
  auto check_piece = [](const Polynomial& piece, int block_size, const char* label) {
    if (piece.num_vars() != block_size) {
      throw domain_error(std::string(label) +
                         " piece uses a variable outside its block (arity mismatch)");
    }
    if (piece.is_zero()) throw domain_error(std::string(label) + " piece is zero");
    if (piece.has_constant_term()) {
      throw domain_error(std::string(label) + " piece must vanish at the origin");
    }
  };
  const int q = n - k;
  for (const auto& piece : f) check_piece(piece, k, "f");
  for (const auto& piece : r) check_piece(piece, k, "r");
  for (const auto& piece : g) check_piece(piece, q, "g");
  for (const auto& piece : h) check_piece(piece, q, "h");
}

namespace {

/// Embeds a holomorphic block polynomial into C^n, optionally conjugated.
MixedPolynomial embed_piece(const Polynomial& piece, const std::vector<int>& positions, int n,
                            bool conjugate) {
  std::vector<MixedTerm> terms;
  for (const auto& t : piece.terms()) {
    MixedTerm mt;
    mt.zexp.assign(n, 0);
    mt.zbarexp.assign(n, 0);
    for (size_t local = 0; local < positions.size(); ++local) {
      (conjugate ? mt.zbarexp : mt.zexp)[positions[local]] = t.exps[local];
    }
    mt.coef = ComplexRational(t.coef, Rational(0));
    terms.push_back(std::move(mt));
  }
  return MixedPolynomial(n, std::move(terms));
}

}  // namespace

MixedPolynomial msl_generate(const MslRecipe& recipe) {
  recipe.validate();
  const std::vector<int> first = recipe.block;
  const std::vector<int> second = recipe.complement();
  MixedPolynomial out(recipe.n);
  for (size_t a = 0; a < recipe.f.size(); ++a) {
    out = out + embed_piece(recipe.f[a], first, recipe.n, false) *
                    embed_piece(recipe.g[a], second, recipe.n, true);
  }
  for (const auto& piece : recipe.r) out = out + embed_piece(piece, first, recipe.n, false);
  for (const auto& piece : recipe.h) out = out + embed_piece(piece, second, recipe.n, true);
  if (out.is_zero()) throw domain_error("recipe pieces cancel to the zero function");
  return out;
}

MslRecipe random_recipe(int n, int k, int max_degree, uint64_t seed) {
  if (n < 2 || k < 1 || k >= n) throw domain_error("need n >= 2 and 0 < k < n");
  if (max_degree < 1) throw domain_error("max_degree must be at least 1");
  SplitMix64 rng(seed);

  MslRecipe recipe;
  recipe.n = n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
  recipe.block.assign(order.begin(), order.begin() + k);
  std::sort(recipe.block.begin(), recipe.block.end());

  auto random_poly = [&](int vars) {
    while (true) {
      std::vector<Term> terms;
      const int count = rng.uniform_int(1, 3);
      for (int t = 0; t < count; ++t) {
        Exponents exps(vars, 0);
        const int degree = rng.uniform_int(1, max_degree);
        for (int d = 0; d < degree; ++d) ++exps[rng.uniform_int(0, vars - 1)];
        int numer = rng.uniform_int(-5, 5);
        if (numer == 0) numer = 1;
        terms.push_back({std::move(exps), make_rational(numer, rng.uniform_int(1, 3))});
      }
      Polynomial poly(vars, std::move(terms));
      if (!poly.is_zero()) return poly;
    }
  };

  const int pairs = rng.uniform_int(1, 2);
  for (int i = 0; i < pairs; ++i) {
    recipe.f.push_back(random_poly(k));
    recipe.g.push_back(random_poly(n - k));
  }
  const int extras_r = rng.uniform_int(0, 2);
  for (int i = 0; i < extras_r; ++i) recipe.r.push_back(random_poly(k));
  const int extras_h = rng.uniform_int(0, 2);
  for (int i = 0; i < extras_h; ++i) recipe.h.push_back(random_poly(n - k));
  return recipe;
}

MixedPolynomial separable_product(const MixedPolynomial& f, const MixedPolynomial& g) {
  const int n = f.num_cvars();
  const int m = g.num_cvars();
  std::vector<MixedTerm> terms;
  terms.reserve(f.terms().size() * g.terms().size());
  for (const auto& tf : f.terms()) {
    for (const auto& tg : g.terms()) {
      MixedTerm t;
      t.zexp = concat_exps(tf.zexp, tg.zexp);
      t.zbarexp = concat_exps(tf.zbarexp, tg.zbarexp);
      t.coef = tf.coef * tg.coef;
      terms.push_back(std::move(t));
    }
  }
  return MixedPolynomial(n + m, std::move(terms));
}

namespace {

/// Values and the derived directions of one realified mixed function:
/// grad ||h||^2 = 2(u grad u + v grad v) and Omega_h = u grad v - v grad u,
/// computed directly from the (u, v) polynomials so identically-real factors
/// (v = 0) are handled too.
struct RealifiedDirections {
  double u = 0, v = 0;
  Eigen::VectorXd grad_norm_sq;
  Eigen::VectorXd omega;
};

RealifiedDirections realified_directions(const MixedPolynomial& h, const Eigen::VectorXcd& z) {
  auto [u_poly, v_poly] = realify_parts(h);
  const Eigen::VectorXd x = realify_point(z);
  const std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
  const int m = u_poly.num_vars();
  RealifiedDirections out;
  out.u = u_poly.eval(xs);
  out.v = v_poly.eval(xs);
  Eigen::VectorXd grad_u(m), grad_v(m);
  for (int l = 0; l < m; ++l) {
    grad_u[l] = u_poly.partial(l).eval(xs);
    grad_v[l] = v_poly.partial(l).eval(xs);
  }
  out.grad_norm_sq = 2.0 * (out.u * grad_u + out.v * grad_v);
  out.omega = out.u * grad_v - out.v * grad_u;
  return out;
}

}  // namespace

ProductIdentityResiduals product_identity_residuals(const MixedPolynomial& f,
                                                    const MixedPolynomial& g,
                                                    const Eigen::VectorXcd& point) {
  const int n = f.num_cvars();
  const int m = g.num_cvars();
  if (point.size() != n + m) throw domain_error("point does not split into the two blocks");

  const MixedPolynomial F = separable_product(f, g);
  const RealifiedDirections dF = realified_directions(F, point);
  const RealifiedDirections df = realified_directions(f, point.head(n));
  const RealifiedDirections dg = realified_directions(g, point.tail(m));

  const double norm_f_sq = df.u * df.u + df.v * df.v;
  const double norm_g_sq = dg.u * dg.u + dg.v * dg.v;

  ProductIdentityResiduals out;

  Eigen::VectorXd rhs_grad(2 * (n + m));
  rhs_grad.head(2 * n) = norm_g_sq * df.grad_norm_sq;
  rhs_grad.tail(2 * m) = norm_f_sq * dg.grad_norm_sq;
  out.grad_residual = (dF.grad_norm_sq - rhs_grad).norm();
  out.grad_scale = std::max(dF.grad_norm_sq.norm(), rhs_grad.norm());

  Eigen::VectorXd rhs_omega(2 * (n + m));
  rhs_omega.head(2 * n) = norm_g_sq * df.omega;
  rhs_omega.tail(2 * m) = norm_f_sq * dg.omega;
  out.omega_residual = (dF.omega - rhs_omega).norm();
  out.omega_scale = std::max(dF.omega.norm(), rhs_omega.norm());

  return out;
}

namespace {

ComplexRational parse_complex_coef(const ordered_json& coef) {
  if (!coef.is_array() || coef.size() != 2 || !coef[0].is_string() || !coef[1].is_string()) {
    throw parse_error("mixed coefficient must be a [re, im] pair of rational strings");
  }
  return {parse_rational(coef[0].get<std::string>()), parse_rational(coef[1].get<std::string>())};
}

Exponents parse_exponents(const ordered_json& exps, int n, const char* field) {
  if (!exps.is_array() || static_cast<int>(exps.size()) != n) {
    throw parse_error(std::string("'") + field + "' must list one exponent per variable");
  }
  Exponents out;
  for (const auto& e : exps) {
    if (!e.is_number_integer() || e.get<int>() < 0) {
      throw parse_error("exponents must be non-negative integers");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

MixedInput parse_mixed(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("kind", "") != "mixed") {
    throw parse_error("mixed document must be an object with kind == 'mixed'");
  }
  if (!doc.contains("cvars") || !doc["cvars"].is_array() || doc["cvars"].empty()) {
    throw parse_error("mixed document needs a non-empty 'cvars' list");
  }
  std::vector<std::string> cvars;
  for (const auto& v : doc["cvars"]) {
    if (!v.is_string()) throw parse_error("'cvars' entries must be strings");
    cvars.push_back(v.get<std::string>());
  }
  const int n = static_cast<int>(cvars.size());
  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    throw parse_error("mixed document needs a 'terms' list");
  }
  std::vector<MixedTerm> terms;
  for (const auto& term : doc["terms"]) {
    if (!term.is_object() || !term.contains("coef") || !term.contains("zexp") ||
        !term.contains("zbarexp")) {
      throw parse_error("each mixed term needs 'coef', 'zexp' and 'zbarexp'");
    }
    terms.push_back({parse_exponents(term["zexp"], n, "zexp"),
                     parse_exponents(term["zbarexp"], n, "zbarexp"),
                     parse_complex_coef(term["coef"])});
  }
  MixedPolynomial poly(n, std::move(terms));
  if (poly.is_zero()) throw parse_error("mixed germ must be a nonzero function");
  if (poly.has_constant_term()) {
    throw parse_error("nonzero constant term: the mixed germ must send the origin to 0");
  }
  return {std::move(poly), std::move(cvars)};
}

MixedInput load_mixed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open mixed file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mixed(buf.str());
}

std::string serialize_mixed(const MixedPolynomial& f, const std::vector<std::string>& cvar_names) {
  ordered_json doc;
  doc["kind"] = "mixed";
  std::vector<std::string> names = cvar_names;
  for (int j = static_cast<int>(names.size()); j < f.num_cvars(); ++j) {
    names.push_back("z" + std::to_string(j + 1));
  }
  doc["cvars"] = names;
  ordered_json terms = ordered_json::array();
  for (const auto& t : f.terms()) {
    ordered_json term;
    term["coef"] = {rational_to_string(t.coef.re), rational_to_string(t.coef.im)};
    term["zexp"] = t.zexp;
    term["zbarexp"] = t.zbarexp;
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  return doc.dump(2) + "\n";
}

namespace {

std::vector<Polynomial> parse_piece_list(const ordered_json& doc, const char* key, int vars) {
  std::vector<Polynomial> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) throw parse_error(std::string("'") + key + "' must be a list of pieces");
  for (const auto& piece : doc[key]) {
    if (!piece.is_array()) throw parse_error("each piece must be an array of terms");
    std::vector<Term> terms;
    for (const auto& term : piece) {
      if (!term.is_object() || !term.contains("coef") || !term.contains("exps") ||
          !term["coef"].is_string()) {
        throw parse_error("piece terms need a rational 'coef' string and 'exps'");
      }
      terms.push_back({parse_exponents(term["exps"], vars, "exps"),
                       parse_rational(term["coef"].get<std::string>())});
    }
    out.push_back(Polynomial(vars, std::move(terms)));
  }
  return out;
}

}  // namespace

MslRecipe parse_recipe(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer()) {
    throw parse_error("recipe needs an integer 'n'");
  }
  MslRecipe recipe;
  recipe.n = doc["n"].get<int>();
  if (!doc.contains("block") || !doc["block"].is_array() || doc["block"].empty()) {
    throw parse_error("recipe needs a non-empty 'block' list of 1-based indices");
  }
  for (const auto& idx : doc["block"]) {
    if (!idx.is_number_integer()) throw parse_error("block indices must be integers");
    recipe.block.push_back(idx.get<int>() - 1);  // document is 1-based
  }
  const int k = static_cast<int>(recipe.block.size());
  try {
    recipe.f = parse_piece_list(doc, "f", k);
    recipe.g = parse_piece_list(doc, "g", recipe.n - k);
    recipe.r = parse_piece_list(doc, "r", k);
    recipe.h = parse_piece_list(doc, "h", recipe.n - k);
    recipe.validate();
  } catch (const domain_error& e) {
    throw parse_error(e.what());
  }
  return recipe;
}

MslRecipe load_recipe_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open recipe file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_recipe(buf.str());
}

}  // namespace mvf
