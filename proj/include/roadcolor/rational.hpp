#pragma once

// Exact rational arithmetic for the probability layer. Everything that is a
// probability is a Rat; floating point is reserved for convergence
// diagnostics and statistical tests.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "roadcolor/errors.hpp"

namespace roadcolor {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Accepts "a/b" or a plain integer "a". Decimal notation is rejected rather
// than approximated.
inline Rat parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw input_error("empty rational");
  if (s.find('.') != std::string::npos)
    throw input_error("decimal notation is not accepted, use num/den: '" + s + "'");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw input_error("zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const std::runtime_error& e) {
    throw input_error("malformed rational '" + s + "'");
  }
}

inline std::string format_rational(const Rat& r) {
  BigInt num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline std::string format_rational_list(const std::vector<Rat>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_rational(v[i]);
  }
  return out;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace roadcolor
