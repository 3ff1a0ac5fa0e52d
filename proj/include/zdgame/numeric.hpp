#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <type_traits>

namespace zdgame {

// Exact arithmetic mode. Strategy constants such as 5/9 or 1/9 stay exact, so
// identity checks can assert equality instead of closeness.
using Rational = boost::multiprecision::cpp_rational;

template <typename T>
inline constexpr bool is_exact_v = !std::is_floating_point_v<T>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <typename T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

// Accepts "3", "-0.25" and "2/3".
Rational parse_rational(const std::string& text);
double parse_real(const std::string& text);

template <typename T>
T parse_scalar(const std::string& text);

std::string rational_to_string(const Rational& r);

// 12 significant digits; the fixed print format makes output diffs meaningful.
std::string format_real(double x);

// 17 significant digits: parses back to the identical double. Used wherever a
// value must survive a write/read cycle (run manifests, strategy files).
std::string format_real_roundtrip(double x);

template <typename T>
std::string scalar_to_string(const T& x) {
  if constexpr (is_exact_v<T>) {
    return rational_to_string(x);
  } else {
    return format_real(x);
  }
}

}  // namespace zdgame
