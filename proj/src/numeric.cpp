#include "zdgame/numeric.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "zdgame/errors.hpp"

namespace zdgame {

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
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    s.erase(0, 1);
  }
  Rational value;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw InvalidInput("cannot parse rational '" + text + "'");
    Rational d{boost::multiprecision::cpp_int(den)};
    if (d == 0) throw InvalidInput("zero denominator in '" + text + "'");
    value = Rational(boost::multiprecision::cpp_int(num)) / d;
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw InvalidInput("cannot parse rational '" + text + "'");
    value = Rational(boost::multiprecision::cpp_int(whole));
    if (!frac.empty()) {
      boost::multiprecision::cpp_int den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      value += Rational(boost::multiprecision::cpp_int(frac)) / Rational(den);
    }
  } else {
    if (!all_digits(s)) throw InvalidInput("cannot parse rational '" + text + "'");
    value = Rational(boost::multiprecision::cpp_int(s));
  }
  return negative ? Rational(-value) : value;
}

double parse_real(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    return to_double(parse_rational(text));
  }
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || (end && *end != '\0'))
    throw InvalidInput("cannot parse number '" + text + "'");
  return v;
}

template <>
Rational parse_scalar<Rational>(const std::string& text) {
  return parse_rational(text);
}

template <>
double parse_scalar<double>(const std::string& text) {
  return parse_real(text);
}

std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

std::string format_real(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string format_real_roundtrip(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace zdgame
