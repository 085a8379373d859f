#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace musekit {

// Exact rational arithmetic. Values stay small (note durations, bar sums),
// but intermediates go through 128-bit to keep products safe.
struct Rational {
  long long num = 0;
  long long den = 1;  // always > 0 after normalization

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  static Rational from128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcd128(a, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lo = -__int128(0x7fffffffffffffffLL) - 1;
    constexpr __int128 hi = __int128(0x7fffffffffffffffLL);
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("rational: overflow");
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    if (r.num == 0) r.den = 1;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(__int128(a.num) * b.den + __int128(b.num) * a.den,
                   __int128(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(__int128(a.num) * b.den - __int128(b.num) * a.den,
                   __int128(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(__int128(a.num) * b.num, __int128(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("rational: divide by zero");
    return from128(__int128(a.num) * b.den, __int128(a.den) * b.num);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return __int128(a.num) * b.den < __int128(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
};

}  // namespace musekit
