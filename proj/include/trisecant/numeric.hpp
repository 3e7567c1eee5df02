#pragma once
#ifndef TRISECANT_NUMERIC_HPP
#define TRISECANT_NUMERIC_HPP

// Coefficient fields used across the library: exact rationals (GMP),
// exact Gaussian rationals, and complex doubles.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trisecant {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Malformed or out-of-contract caller input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "p/q", an integer, or a finite decimal such as "-0.125" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw InputError("empty rational literal");
  const auto dot = s.find('.');
  const bool has_exp = s.find_first_of("eE") != std::string::npos;
  if (has_exp) throw InputError("exponent notation is not an exact rational: " + s);
  if (dot == std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
    if (r.get_den() == 0) throw InputError("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  if (s.find('/') != std::string::npos) throw InputError("bad rational literal: " + s);
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+") throw InputError("bad decimal literal: " + s);
  if (digits.front() == '+') digits.erase(digits.begin());
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw InputError("bad decimal literal: " + s);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Exact value of a finite double.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite value cannot be made exact");
  return Rational(x);
}

/// Exact complex number with rational real and imaginary parts.
struct GaussRational {
  Rational re;
  Rational im;

  GaussRational() = default;
  GaussRational(long v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    Rational n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0) throw std::domain_error("division by zero");
    Rational r = (re * o.re + im * o.im) / n;
    Rational i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }
};

inline GaussRational conj(const GaussRational& z) { return {z.re, -z.im}; }

/// Per-field operations the polynomial templates need.
template <class C>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& c) { return sgn(c) == 0; }
  static Rational conj(const Rational& c) { return c; }
  static Complex to_complex(const Rational& c) { return {c.get_d(), 0.0}; }
  static Rational from_int(long v) { return Rational(v); }
  static double magnitude(const Rational& c) { return std::abs(c.get_d()); }
};

template <>
struct Field<GaussRational> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRational& c) { return c.is_zero(); }
  static GaussRational conj(const GaussRational& c) { return trisecant::conj(c); }
  static Complex to_complex(const GaussRational& c) { return {c.re.get_d(), c.im.get_d()}; }
  static GaussRational from_int(long v) { return GaussRational(v); }
  static double magnitude(const GaussRational& c) { return std::abs(to_complex(c)); }
};

template <>
struct Field<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& c) { return c.real() == 0.0 && c.imag() == 0.0; }
  static Complex conj(const Complex& c) { return std::conj(c); }
  static Complex to_complex(const Complex& c) { return c; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static double magnitude(const Complex& c) { return std::abs(c); }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static bool is_zero(double c) { return c == 0.0; }
  static double conj(double c) { return c; }
  static Complex to_complex(double c) { return {c, 0.0}; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double magnitude(double c) { return std::abs(c); }
};

}  // namespace trisecant

#endif  // TRISECANT_NUMERIC_HPP
