#pragma once
#ifndef TRISECANT_STURM_HPP
#define TRISECANT_STURM_HPP

// Exact real-root counting for univariate rational polynomials with Sturm
// chains, and restriction of homogeneous forms to projective lines.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trisecant/linalg.hpp"
#include "trisecant/poly.hpp"

namespace trisecant {

/// Raised when a real-root count is asked of a polynomial with repeated roots.
class NotSquarefreeError : public std::domain_error {
 public:
  explicit NotSquarefreeError(std::size_t gcd_degree)
      : std::domain_error("polynomial is not squarefree (gcd with derivative has degree " +
                          std::to_string(gcd_degree) + ")"),
        gcd_degree_(gcd_degree) {}
  std::size_t gcd_degree() const { return gcd_degree_; }

 private:
  std::size_t gcd_degree_;
};

/// Univariate polynomial with exact rational coefficients, lowest degree first.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  UniPoly(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& leading() const { return c_.back(); }
  Rational operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  UniPoly derivative() const {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
    return UniPoly(std::move(d));
  }

  Rational evaluate(const Rational& t) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  /// Remainder of Euclidean division by a nonzero divisor.
  UniPoly remainder(const UniPoly& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("division by the zero polynomial");
    std::vector<Rational> r = c_;
    const int dd = divisor.degree();
    const Rational& lead = divisor.leading();
    for (int k = static_cast<int>(r.size()) - 1; k >= dd; --k) {
      if (sgn(r[k]) == 0) continue;
      const Rational q = r[k] / lead;
      for (int j = 0; j <= dd; ++j) r[k - dd + j] -= q * divisor.c_[j];
    }
    r.resize(static_cast<std::size_t>(dd));
    return UniPoly(std::move(r));
  }

  /// Positive rescaling to a primitive integer polynomial; roots and signs are unchanged.
  UniPoly primitive() const {
    if (is_zero()) return *this;
    mpz_class den = 1;
    for (const auto& x : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    mpz_class g = 0;
    std::vector<mpz_class> ints;
    for (const auto& x : c_) {
      mpz_class v = x.get_num() * (den / x.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      ints.push_back(std::move(v));
    }
    std::vector<Rational> out;
    for (auto& v : ints) out.emplace_back(mpz_class(v / g));
    return UniPoly(std::move(out));
  }

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

struct SturmSequence {
  std::vector<UniPoly> polys;

  /// Sign changes at +infinity or -infinity (zeros skipped).
  std::size_t variations_at_infinity(bool positive) const {
    std::size_t changes = 0;
    int last = 0;
    for (const auto& q : polys) {
      int s = sgn(q.leading());
      if (!positive && q.degree() % 2 == 1) s = -s;
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// Sign changes at a finite rational point (zeros skipped).
  std::size_t variations_at(const Rational& t) const {
    std::size_t changes = 0;
    int last = 0;
    for (const auto& q : polys) {
      const int s = sgn(q.evaluate(t));
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// The chain ends in gcd(p, p') up to scaling; its degree.
  std::size_t gcd_degree() const { return static_cast<std::size_t>(std::max(0, polys.back().degree())); }
};

/// Canonical Sturm chain p, p', -rem(p, p'), ...; entries after the second
/// are rescaled by positive factors to primitive integer form.
inline SturmSequence sturm_build(const UniPoly& p) {
  if (p.is_zero()) throw InputError("Sturm chain of the zero polynomial");
  SturmSequence seq;
  seq.polys.push_back(p);
  UniPoly d = p.derivative();
  if (d.is_zero()) return seq;
  seq.polys.push_back(d);
  while (true) {
    const auto n = seq.polys.size();
    UniPoly r = seq.polys[n - 2].remainder(seq.polys[n - 1]);
    if (r.is_zero()) break;
    std::vector<Rational> neg;
    for (const auto& c : r.coeffs()) neg.emplace_back(-c);
    seq.polys.push_back(UniPoly(std::move(neg)).primitive());
  }
  return seq;
}

/// Number of distinct real roots; requires a squarefree input.
inline std::size_t count_real_roots(const UniPoly& p) {
  const SturmSequence seq = sturm_build(p);
  if (seq.gcd_degree() > 0) throw NotSquarefreeError(seq.gcd_degree());
  const auto neg = seq.variations_at_infinity(false);
  const auto pos = seq.variations_at_infinity(true);
  return neg - pos;
}

/// Real roots on the projective line: the affine count plus the point t = infinity.
inline std::size_t count_real_roots_projective(const UniPoly& p, bool leading_vanishes) {
  return count_real_roots(p) + (leading_vanishes ? 1 : 0);
}

/// Result of t -> F(A + tB).
struct LineRestriction {
  UniPoly poly;
  bool leading_vanishes = false;  // F(B) = 0: the point t = infinity lies on the hypersurface
  unsigned form_degree = 0;
};

namespace detail {

inline unsigned homogeneous_degree(const RationalPoly& f) {
  if (f.is_zero()) throw InputError("zero form");
  const unsigned deg = exponent_degree(f.terms().begin()->first);
  for (const auto& [e, c] : f.terms())
    if (exponent_degree(e) != deg) throw InputError("form is not homogeneous");
  return deg;
}

inline std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace detail

/// Restriction of a homogeneous form in any number of variables to the line
/// through A (t = 0) and B (t = infinity).
inline LineRestriction restrict_to_line(const RationalPoly& f, const std::vector<Rational>& a,
                                        const std::vector<Rational>& b) {
  const std::size_t n = f.num_vars();
  if (a.size() != n || b.size() != n) throw InputError("line points must match the variable count");
  if (matrix_rank(DenseMatrix<Rational>{a, b}) < 2) throw InputError("line points are proportional");
  const unsigned deg = detail::homogeneous_degree(f);

  // powers[v][k] = (a_v + t b_v)^k as a coefficient vector
  std::vector<std::vector<std::vector<Rational>>> powers(n);
  for (std::size_t v = 0; v < n; ++v) {
    powers[v].push_back({Rational(1)});
    const std::vector<Rational> lin{a[v], b[v]};
    for (unsigned k = 1; k <= deg; ++k) powers[v].push_back(detail::poly_mul(powers[v].back(), lin));
  }
  std::vector<Rational> acc(deg + 1, Rational(0));
  for (const auto& [e, c] : f.terms()) {
    std::vector<Rational> term{c};
    for (std::size_t v = 0; v < n; ++v)
      if (e[v] > 0) term = detail::poly_mul(term, powers[v][e[v]]);
    for (std::size_t k = 0; k < term.size(); ++k) acc[k] += term[k];
  }
  LineRestriction out;
  out.form_degree = deg;
  out.leading_vanishes = sgn(acc[deg]) == 0;
  out.poly = UniPoly(std::move(acc));
  return out;
}

/// Plane-curve case: F must be a ternary form.
inline LineRestriction restrict_form_to_line(const RationalPoly& f, const std::vector<Rational>& a,
                                             const std::vector<Rational>& b) {
  if (f.num_vars() != 3) throw InputError("expected a ternary form");
  return restrict_to_line(f, a, b);
}

/// Number of real intersection points of the hypersurface {F = 0} with the
/// projective line through A and B, or nullopt when the intersection is not
/// transversal (repeated root, repeated root at infinity, or line on the hypersurface).
inline std::optional<std::size_t> count_on_line(const RationalPoly& f, const std::vector<Rational>& a,
                                                const std::vector<Rational>& b) {
  const LineRestriction r = restrict_to_line(f, a, b);
  if (r.poly.is_zero()) return std::nullopt;
  if (static_cast<int>(r.form_degree) - r.poly.degree() > 1) return std::nullopt;
  const SturmSequence seq = sturm_build(r.poly);
  if (seq.gcd_degree() > 0) return std::nullopt;
  return seq.variations_at_infinity(false) - seq.variations_at_infinity(true) + (r.leading_vanishes ? 1 : 0);
}

}  // namespace trisecant

#endif  // TRISECANT_STURM_HPP
