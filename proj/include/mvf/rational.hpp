#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace mvf {

/// Exact rational scalar used throughout the symbolic layer.
using Rational = mpq_class;

/// Parses "7", "-3/2" or a decimal form like "1.25" into an exact rational.
/// Throws mvf::error on anything else.
Rational parse_rational(const std::string& text);

/// Canonical form: "p" when the denominator is 1, otherwise "p/q".
std::string rational_to_string(const Rational& value);

/// mpq_class(num, den) does not reduce the fraction; this does.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& value) { return value.get_d(); }

/// Gaussian rational: exact complex number with rational parts.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}

  bool is_zero() const { return re == 0 && im == 0; }

  ComplexRational conj() const { return {re, -im}; }

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string complex_rational_to_string(const ComplexRational& value);

}  // namespace mvf
