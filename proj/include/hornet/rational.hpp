// Exact rational scalar. All solver arithmetic goes through this type;
// there is no floating point anywhere in the decision path.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace hornet {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline int sign(const Rational& q) { return q.sign(); }

inline Rational rational_abs(const Rational& q) { return q.sign() < 0 ? Rational(-q) : q; }

// "p" for integers, "p/q" otherwise, exact.
inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace hornet
