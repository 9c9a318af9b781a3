#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74's mixed rational/integer comparisons recurse forever under the
// C++20 rewritten-operator rules. Exact non-template overloads are picked first.
namespace boost {
#define FLEETOPT_RATIONAL_MIXED(Int)                                                                         \
  inline bool operator==(const rational<std::int64_t>& a, Int b) {                                         \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);                          \
  }                                                                                                        \
  inline bool operator!=(const rational<std::int64_t>& a, Int b) { return !(a == b); }                     \
  inline bool operator<(const rational<std::int64_t>& a, Int b) { return a < rational<std::int64_t>(b); }  \
  inline bool operator>(const rational<std::int64_t>& a, Int b) { return a > rational<std::int64_t>(b); }  \
  inline bool operator<=(const rational<std::int64_t>& a, Int b) { return !(a > b); }                      \
  inline bool operator>=(const rational<std::int64_t>& a, Int b) { return !(a < b); }                      \
  inline bool operator==(Int b, const rational<std::int64_t>& a) { return a == b; }                        \
  inline bool operator!=(Int b, const rational<std::int64_t>& a) { return !(a == b); }                     \
  inline bool operator<(Int b, const rational<std::int64_t>& a) { return a > b; }                          \
  inline bool operator>(Int b, const rational<std::int64_t>& a) { return a < b; }                          \
  inline bool operator<=(Int b, const rational<std::int64_t>& a) { return !(a < b); }                      \
  inline bool operator>=(Int b, const rational<std::int64_t>& a) { return !(a > b); }
FLEETOPT_RATIONAL_MIXED(int)
FLEETOPT_RATIONAL_MIXED(long)
FLEETOPT_RATIONAL_MIXED(long long)
#undef FLEETOPT_RATIONAL_MIXED
}  // namespace boost

namespace fleetopt {

using Rational = boost::rational<std::int64_t>;

/// "3" for integers, "3/2" otherwise.
std::string to_string(const Rational& r);

/// Accepts "3", "-3", "3/2" and finite decimals such as "0.25".
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Decimal rendering for formats that do not accept fractions.
std::string to_decimal_string(const Rational& r);

}  // namespace fleetopt
