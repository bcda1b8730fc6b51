#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <string>

#include "dp/error.hpp"

namespace dp {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// High-precision float used when bridging exact values to doubles.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline std::string to_slash_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p/q" or a bare integer "p".
inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw ZeroDivisor("rational with zero denominator: " + s);
    return Rational(p, q);
}

inline double to_double(const Rational& r) {
    return static_cast<double>(static_cast<BigFloat>(r));
}

} // namespace dp
