#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "entacc/errors.hpp"

namespace entacc {

// Exact rational scalar used throughout the symbolic calculus. Entropy is kept
// in abstract rational units; the identification with log(N) happens only in
// the interval-map realizer.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string rat_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
Rat rat_parse(std::string_view text);

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

} // namespace entacc
