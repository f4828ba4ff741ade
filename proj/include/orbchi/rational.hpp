#pragma once

#include <cstdint>
#include <string>

#include "orbchi/errors.hpp"

namespace orbchi {

namespace detail {

using int128 = __int128;

inline int128 abs128(int128 x) { return x < 0 ? -x : x; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("rational arithmetic overflow");
  return r;
}

inline int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("rational arithmetic overflow");
  return r;
}

inline std::string int128_to_string(int128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  std::string s;
  while (x != 0) {
    int digit = static_cast<int>(neg ? -(x % 10) : (x % 10));
    s.push_back(static_cast<char>('0' + digit));
    x /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

}  // namespace detail

/// Exact rational number. All arithmetic in the library is exact; there is no
/// floating point anywhere. Backed by 128-bit integers, which comfortably
/// covers the moment-matrix eliminations at the supported order caps;
/// overflow throws instead of wrapping.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // implicit: integers coerce
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  static Rational from_int128(detail::int128 n, detail::int128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  /// Extracts the value as a plain integer; throws IntegralityError when the
  /// value is fractional or out of long long range.
  long long as_integer() const {
    if (den_ != 1) throw IntegralityError("expected an integer, got " + str());
    if (num_ > detail::int128(INT64_MAX) || num_ < detail::int128(INT64_MIN))
      throw IntegralityError("integer out of range: " + str());
    return static_cast<long long>(num_);
  }

  std::string str() const {
    std::string s = detail::int128_to_string(num_);
    if (den_ != 1) s += "/" + detail::int128_to_string(den_);
    return s;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_int128(
        detail::checked_add(detail::checked_mul(a.num_, b.den_), detail::checked_mul(b.num_, a.den_)),
        detail::checked_mul(a.den_, b.den_));
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_int128(detail::checked_mul(a.num_, b.num_), detail::checked_mul(a.den_, b.den_));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("division by zero rational");
    return from_int128(detail::checked_mul(a.num_, b.den_), detail::checked_mul(a.den_, b.num_));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return detail::checked_mul(a.num_, b.den_) < detail::checked_mul(b.num_, a.den_);
  }

  /// |numerator| comparison used for pivot selection in exact elimination.
  detail::int128 abs_num() const { return detail::abs128(num_); }
  detail::int128 num128() const { return num_; }
  detail::int128 den128() const { return den_; }

private:
  void normalize() {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    detail::int128 g = detail::gcd128(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  detail::int128 num_;
  detail::int128 den_;
};

/// Parses "p" or "p/q".
inline Rational parse_rational(const std::string& text) {
  auto parse_ll = [](const std::string& s) -> long long {
    if (s.empty()) throw ParseError("empty integer in rational");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_ll(text));
  return Rational(parse_ll(text.substr(0, slash)), parse_ll(text.substr(slash + 1)));
}

}  // namespace orbchi
