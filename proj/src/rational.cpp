#include "mvf/rational.hpp"

#include <cctype>

#include "mvf/error.hpp"

namespace mvf {
namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  // strip surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw parse_error("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.erase(s.begin());
  }
  if (s.empty()) throw parse_error("rational literal is only a sign: '" + text + "'");

  Rational value;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw parse_error("malformed rational literal: '" + text + "'");
    }
    value = Rational(mpz_class(num), mpz_class(den));
    if (value.get_den() == 0) throw parse_error("zero denominator in '" + text + "'");
    value.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (frac.empty() && whole.empty()) ||
        (!frac.empty() && !all_digits(frac))) {
      throw parse_error("malformed decimal literal: '" + text + "'");
    }
    mpz_class digits(whole.empty() ? std::string("0") : whole);
    mpz_class den(1);
    for (char c : frac) {
      digits = digits * 10 + (c - '0');
      den *= 10;
    }
    value = Rational(digits, den);
    value.canonicalize();
  } else {
    if (!all_digits(s)) throw parse_error("malformed rational literal: '" + text + "'");
    value = Rational(mpz_class(s));
  }
  return negative ? Rational(-value) : value;
}

std::string rational_to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string complex_rational_to_string(const ComplexRational& value) {
  if (value.im == 0) return rational_to_string(value.re);
  if (value.re == 0) return rational_to_string(value.im) + "i";
  std::string im = rational_to_string(value.im);
  if (!im.empty() && im.front() != '-') im.insert(im.begin(), '+');
  return rational_to_string(value.re) + im + "i";
}

}  // namespace mvf
