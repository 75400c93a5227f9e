#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "lipfree/error.hpp"

namespace lipfree {

/// Exact rational number. Expression templates are disabled so that `auto`
/// always names a value.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return Rational(num) / Rational(den);
}

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Canonical "p/q" form; integers are written with denominator 1.
inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

namespace detail {
inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

inline bool is_unsigned_literal(std::string_view s) {
  return !s.empty() && s[0] != '-' && s[0] != '+' && is_integer_literal(s);
}

inline Integer parse_integer(std::string_view s) {
  std::string buf(s);
  if (!buf.empty() && buf[0] == '+') buf.erase(0, 1);
  return Integer(buf);
}
}  // namespace detail

/// Parses "p/q", "p" or a finite decimal such as "-0.125". Throws ParseError.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!detail::is_integer_literal(num) || !detail::is_unsigned_literal(den))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    Integer d = detail::parse_integer(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(detail::parse_integer(num)) / Rational(d);
  }
  auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string_view digits = whole;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
    if ((digits.empty() && frac.empty()) || (!digits.empty() && !detail::is_unsigned_literal(digits)) ||
        (!frac.empty() && !detail::is_unsigned_literal(frac)))
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer w = digits.empty() ? Integer(0) : detail::parse_integer(digits);
    Integer f = frac.empty() ? Integer(0) : detail::parse_integer(frac);
    Rational value = Rational(w) + Rational(f) / Rational(scale);
    return negative ? Rational(-value) : value;
  }
  if (!detail::is_integer_literal(text)) throw ParseError("malformed rational '" + std::string(text) + "'");
  return Rational(detail::parse_integer(text));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational min_of(const Rational& a, const Rational& b) { return a < b ? a : b; }

}  // namespace lipfree
