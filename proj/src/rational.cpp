#include "fleetopt/rational.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace fleetopt {

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 12) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
    std::string_view whole = text.substr(0, dot);
    bool negative = !whole.empty() && whole.front() == '-';
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    if (f < 0) throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
    std::int64_t num = (w < 0 ? -w : w) * scale + f;
    return Rational(negative || w < 0 ? -num : num, scale);
  }
  return Rational(parse_int(text));
}

std::string to_decimal_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g",
                static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()));
  return buf;
}

}  // namespace fleetopt
