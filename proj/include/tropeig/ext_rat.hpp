#pragma once

#include <cctype>
#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "tropeig/errors.hpp"

namespace tropeig {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

/// Parses "p", "p/q", or a plain decimal such as "-1.25e-2" into an exact
/// rational. The decimal form is read digit by digit, so "0.1" is 1/10.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto parse_int = [&](std::string_view part) {
      if (part.empty()) fail();
      std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
      if (start == part.size()) fail();
      for (std::size_t i = start; i < part.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(part[i]))) fail();
      return Integer(std::string(part[0] == '+' ? part.substr(1) : part));
    };
    Integer num = parse_int(text.substr(0, slash));
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) return fail();
    return Rational(num, den);
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') negative = text[pos++] == '-';
  Integer mantissa = 0;
  long scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      any_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return fail();
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
      exp_negative = text[pos++] == '-';
    if (pos == text.size()) return fail();
    long exponent = 0;
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) return fail();
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 4000) return fail();
    }
    scale += exp_negative ? -exponent : exponent;
  }
  Rational value(mantissa);
  Integer ten_power = boost::multiprecision::pow(Integer(10),
                                                 static_cast<unsigned>(scale < 0 ? -scale : scale));
  if (scale < 0) {
    value /= Rational(ten_power);
  } else {
    value *= Rational(ten_power);
  }
  return negative ? -value : value;
}

/// An exact rational number or the min-plus zero (+infinity).
///
/// The ordering is total with +infinity on top. The semiring operations
/// live in the free functions trop_add (min) and trop_mul (+).
class ExtRat {
 public:
  /// The min-plus zero, +infinity.
  ExtRat() = default;
  ExtRat(Rational value) : value_(std::move(value)) {}  // NOLINT
  ExtRat(long value) : value_(Rational(value)) {}       // NOLINT
  ExtRat(int value) : value_(Rational(value)) {}        // NOLINT
  ExtRat(long num, long den) : value_(Rational(num, den)) {}

  static ExtRat zero() { return ExtRat(); }
  static ExtRat one() { return ExtRat(0); }

  bool is_finite() const { return value_.has_value(); }
  bool is_zero() const { return !value_.has_value(); }

  const Rational& value() const {
    if (!value_) throw InvalidArgument("value() of the min-plus zero");
    return *value_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (!a.value_ && !b.value_) return std::strong_ordering::equal;
    if (!a.value_) return std::strong_ordering::greater;
    if (!b.value_) return std::strong_ordering::less;
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*b.value_ < *a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const { return value_ ? to_string(*value_) : "inf"; }

  /// Accepts "inf" (also "+inf", "oo") besides the rational forms.
  static ExtRat parse(std::string_view text) {
    if (text == "inf" || text == "+inf" || text == "oo" || text == "Infinity")
      return ExtRat();
    return ExtRat(parse_rational(text));
  }

  double to_double() const {
    return value_ ? tropeig::to_double(*value_)
                  : std::numeric_limits<double>::infinity();
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtRat& a) {
    return os << a.str();
  }

 private:
  std::optional<Rational> value_;
};

/// Min-plus addition: min.
inline ExtRat trop_add(const ExtRat& a, const ExtRat& b) { return a <= b ? a : b; }

/// Min-plus multiplication: +, with +infinity absorbing.
inline ExtRat trop_mul(const ExtRat& a, const ExtRat& b) {
  if (a.is_zero() || b.is_zero()) return ExtRat::zero();
  return ExtRat(a.value() + b.value());
}

}  // namespace tropeig
