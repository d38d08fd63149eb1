#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace opcalc {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double v);

std::string rational_to_string(const Rational& q);

} // namespace opcalc
