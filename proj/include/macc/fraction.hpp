#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace macc {

/// Exact rational number; always normalized (den > 0, gcd(|num|, den) = 1).
/// Intermediates run through __int128 so desk-scale arithmetic never
/// overflows silently.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n) : num(n) {}
  Fraction(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Fraction: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
  }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    return make(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                static_cast<__int128>(a.den) * b.den);
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    return make(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                static_cast<__int128>(a.den) * b.den);
  }
  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    return make(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.num == 0) throw std::invalid_argument("Fraction: division by zero");
    return make(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
  }
  Fraction operator-() const { return Fraction(-num, den); }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Fraction& a, const Fraction& b) { return a == b || a < b; }
  friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return b <= a; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static Fraction make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    n /= g;
    d /= g;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Fraction: value exceeds 64-bit terms");
    Fraction f;
    f.num = static_cast<long long>(n);
    f.den = static_cast<long long>(d);
    return f;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
};

}  // namespace macc
