#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "capflp/errors.hpp"

namespace capflp {

namespace detail {

__extension__ typedef __int128 i128;  // GCC/Clang extension, used deliberately

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// Exact rational on int64 numerator/denominator, always canonical
// (den > 0, gcd(|num|, den) == 1). Intermediates go through __int128 and
// results that do not reduce back into int64 throw OverflowError, so
// arithmetic is exact or loud, never silently wrong.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rational make(detail::i128 n, detail::i128 d) {
    if (d == 0) throw Error("rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::i128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr detail::i128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr detail::i128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi)
      throw OverflowError("rational: value exceeds 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                detail::i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                detail::i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational: division by zero");
    return make(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;  // canonical int64 negation is safe: |num| < 2^63
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    detail::i128 lhs = detail::i128(a.num_) * b.den_;
    detail::i128 rhs = detail::i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // Largest integer <= value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

// "p" for integers, "p/q" otherwise.
inline std::string to_fraction_string(const Rational& r) {
  std::string s = std::to_string(r.num());
  if (!r.is_integer()) {
    s += '/';
    s += std::to_string(r.den());
  }
  return s;
}

// Accepts "p", "p/q", decimal ("-12.345") and scientific ("2.5e-3") forms.
// Decimal forms are parsed exactly.
inline Rational parse_rational(std::string_view s) {
  auto fail = [&]() -> Rational {
    throw ParseError("cannot parse rational from '" + std::string(s) + "'");
  };

  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  };
  skip_ws();
  if (i == s.size()) fail();

  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }

  detail::i128 mantissa = 0;
  int digits = 0, frac_digits = 0;
  bool seen_dot = false;
  constexpr detail::i128 mant_cap = detail::i128(1) << 100;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > mant_cap) throw OverflowError("rational literal too large");
      ++digits;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (digits == 0) fail();
  if (neg) mantissa = -mantissa;

  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      eneg = s[i] == '-';
      ++i;
    }
    if (i >= s.size() || s[i] < '0' || s[i] > '9') fail();
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      exp10 = exp10 * 10 + (s[i] - '0');
      if (exp10 > 100) throw OverflowError("rational exponent too large");
    }
    if (eneg) exp10 = -exp10;
  } else if (i < s.size() && s[i] == '/') {
    if (seen_dot) fail();
    std::size_t j = i + 1;
    bool dneg = false;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) {
      dneg = s[j] == '-';
      ++j;
    }
    detail::i128 d = 0;
    int ddigits = 0;
    for (; j < s.size() && s[j] >= '0' && s[j] <= '9'; ++j) {
      d = d * 10 + (s[j] - '0');
      if (d > mant_cap) throw OverflowError("rational literal too large");
      ++ddigits;
    }
    if (ddigits == 0) fail();
    i = j;
    skip_ws();
    if (i != s.size()) fail();
    return Rational::make(mantissa, dneg ? -d : d);
  }

  skip_ws();
  if (i != s.size()) fail();

  long pow = exp10 - frac_digits;
  detail::i128 n = mantissa, d = 1;
  for (; pow > 0; --pow) {
    n *= 10;
    if (detail::abs128(n) > (detail::i128(1) << 126) / 10)
      throw OverflowError("rational literal too large");
  }
  for (; pow < 0; ++pow) {
    d *= 10;
    if (d > (detail::i128(1) << 126) / 10)
      throw OverflowError("rational literal too large");
  }
  return Rational::make(n, d);
}

// Every finite double is a binary rational; convert exactly.
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw NonFiniteValue("position is not finite");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
  auto sig = static_cast<std::int64_t>(std::ldexp(m, 53));
  int pow2 = exp - 53;
  detail::i128 n = sig, d = 1;
  for (; pow2 > 0; --pow2) {
    n *= 2;
    if (detail::abs128(n) > (detail::i128(1) << 126))
      throw OverflowError("double value exceeds exact range; pass it as a string");
  }
  for (; pow2 < 0; ++pow2) {
    d *= 2;
    if (d > (detail::i128(1) << 126))
      throw OverflowError("double value exceeds exact range; pass it as a string");
  }
  return Rational::make(n, d);
}

// Comparison policy per scalar type: Rational paths are exact, the double
// mode compares with a fixed 1e-9 tolerance (bulk sweeps only).
template <class Num>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static bool le(const Rational& a, const Rational& b) { return a <= b; }
  static bool lt(const Rational& a, const Rational& b) { return a < b; }
  static Rational from_fraction(std::int64_t n, std::int64_t d) {
    return Rational(n, d);
  }
  static double to_double(const Rational& v) { return v.to_double(); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr double tolerance = 1e-9;
  static bool eq(double a, double b) { return std::fabs(a - b) <= tolerance; }
  static bool le(double a, double b) { return a <= b + tolerance; }
  static bool lt(double a, double b) { return a < b - tolerance; }
  static double from_fraction(std::int64_t n, std::int64_t d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
  static double to_double(double v) { return v; }
};

template <class Num>
Num num_abs(const Num& v) {
  if constexpr (std::is_same_v<Num, Rational>) return abs(v);
  else return std::fabs(v);
}

}  // namespace capflp
