#pragma once
#ifndef TRISECANT_POLY_HPP
#define TRISECANT_POLY_HPP

// Sparse multivariate polynomials whose variables are partitioned into
// blocks (one block per projective factor). The coefficient type selects the
// mode: Rational / GaussRational for exact work, Complex for numerics.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trisecant/linalg.hpp"
#include "trisecant/numeric.hpp"

namespace trisecant {

/// Number of variables in each block; block i of a projective factor P^m has m+1.
class VarBlocks {
 public:
  VarBlocks() = default;
  explicit VarBlocks(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    for (auto s : sizes_)
      if (s == 0) throw InputError("variable blocks must be nonempty");
  }

  std::size_t count() const { return sizes_.size(); }
  std::size_t size(std::size_t block) const { return sizes_.at(block); }
  std::size_t total() const { return std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{0}); }
  std::size_t offset(std::size_t block) const {
    return std::accumulate(sizes_.begin(), sizes_.begin() + static_cast<std::ptrdiff_t>(block), std::size_t{0});
  }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  /// Block containing the flat variable index.
  std::size_t block_of(std::size_t var) const {
    std::size_t acc = 0;
    for (std::size_t b = 0; b < sizes_.size(); ++b) {
      acc += sizes_[b];
      if (var < acc) return b;
    }
    throw InputError("variable index out of range");
  }

  friend bool operator==(const VarBlocks&, const VarBlocks&) = default;

 private:
  std::vector<std::size_t> sizes_;
};

using Exponent = std::vector<unsigned>;

inline unsigned exponent_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

/// Graded lexicographic order: total degree first, then lexicographic with
/// x_0 > x_1 > ... over the concatenated blocks.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const unsigned da = exponent_degree(a);
    const unsigned db = exponent_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

template <class C>
class MultiPoly {
 public:
  using Coeff = C;
  using Terms = std::map<Exponent, C, GradedLex>;

  MultiPoly() = default;
  explicit MultiPoly(VarBlocks blocks) : blocks_(std::move(blocks)) {}

  static MultiPoly constant(const VarBlocks& blocks, const C& c) {
    MultiPoly p(blocks);
    p.add_term(Exponent(blocks.total(), 0u), c);
    return p;
  }

  static MultiPoly variable(const VarBlocks& blocks, std::size_t block, std::size_t index) {
    if (index >= blocks.size(block)) throw InputError("variable index outside its block");
    Exponent e(blocks.total(), 0u);
    e[blocks.offset(block) + index] = 1;
    MultiPoly p(blocks);
    p.add_term(std::move(e), Field<C>::from_int(1));
    return p;
  }

  const VarBlocks& blocks() const { return blocks_; }
  const Terms& terms() const { return terms_; }
  std::size_t num_vars() const { return blocks_.total(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * x^e, merging with an existing term; zero results are dropped.
  void add_term(Exponent e, const C& c) {
    if (e.size() != num_vars()) throw InputError("exponent length does not match variable count");
    if (Field<C>::is_zero(c)) return;
    if (multidegree_ && block_degrees(e) != *multidegree_) throw InputError("term violates the declared multidegree");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), c);
      return;
    }
    it->second = it->second + c;
    if (Field<C>::is_zero(it->second)) terms_.erase(it);
  }

  C coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Field<C>::from_int(0) : it->second;
  }

  const std::optional<std::vector<unsigned>>& declared_multidegree() const { return multidegree_; }

  /// Declares the multidegree; throws if some term is off-degree in a block.
  void declare_multidegree(std::vector<unsigned> degrees) {
    if (degrees.size() != blocks_.count()) throw InputError("multidegree length does not match block count");
    for (const auto& [e, c] : terms_)
      if (block_degrees(e) != degrees) throw InputError("term violates the declared multidegree");
    multidegree_ = std::move(degrees);
  }

  std::vector<unsigned> block_degrees(const Exponent& e) const {
    std::vector<unsigned> out(blocks_.count(), 0u);
    std::size_t var = 0;
    for (std::size_t b = 0; b < blocks_.count(); ++b)
      for (std::size_t k = 0; k < blocks_.size(b); ++k) out[b] += e[var++];
    return out;
  }

  /// The common block degrees of all terms, if the polynomial is multihomogeneous.
  std::optional<std::vector<unsigned>> multidegree() const {
    if (terms_.empty()) return std::nullopt;
    auto first = block_degrees(terms_.begin()->first);
    for (const auto& [e, c] : terms_)
      if (block_degrees(e) != first) return std::nullopt;
    return first;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, exponent_degree(e));
    return d;
  }

  /// Monomial-sum evaluation at a complex point.
  Complex evaluate(std::span<const Complex> point) const {
    if (point.size() != num_vars()) throw InputError("point length does not match variable count");
    Complex sum{0.0, 0.0};
    for (const auto& [e, c] : terms_) {
      Complex term = Field<C>::to_complex(c);
      for (std::size_t v = 0; v < e.size(); ++v)
        for (unsigned k = 0; k < e[v]; ++k) term *= point[v];
      sum += term;
    }
    return sum;
  }

  /// Exact evaluation in the coefficient field.
  C evaluate_exact(std::span<const C> point) const {
    if (point.size() != num_vars()) throw InputError("point length does not match variable count");
    C sum = Field<C>::from_int(0);
    for (const auto& [e, c] : terms_) {
      C term = c;
      for (std::size_t v = 0; v < e.size(); ++v)
        for (unsigned k = 0; k < e[v]; ++k) term = term * point[v];
      sum = sum + term;
    }
    return sum;
  }

  MultiPoly derivative(std::size_t var) const {
    if (var >= num_vars()) throw InputError("derivative variable out of range");
    MultiPoly out(blocks_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent f = e;
      f[var] -= 1;
      out.add_term(std::move(f), c * Field<C>::from_int(static_cast<long>(e[var])));
    }
    return out;
  }

  MultiPoly conjugate() const {
    MultiPoly out(blocks_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, Field<C>::conj(c));
    out.multidegree_ = multidegree_;
    return out;
  }

  /// Coefficient-wise map into another field, keeping structure.
  template <class D, class Fn>
  MultiPoly<D> map_coefficients(Fn&& fn) const {
    MultiPoly<D> out(blocks_);
    for (const auto& [e, c] : terms_) out.add_term(e, fn(c));
    if (multidegree_ && !out.is_zero()) out.declare_multidegree(*multidegree_);
    return out;
  }

  /// One-way conversion to complex doubles.
  MultiPoly<Complex> to_complex() const {
    return map_coefficients<Complex>([](const C& c) { return Field<C>::to_complex(c); });
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    require_same_blocks(o);
    const bool keep = multidegree_ && o.multidegree_ && *multidegree_ == *o.multidegree_;
    if (!keep) multidegree_.reset();
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) { return *this += -o; }
  MultiPoly& operator*=(const C& s) {
    if (Field<C>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c = c * s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const C& s) { return a *= s; }
  friend MultiPoly operator*(const C& s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly out(a.blocks_);
    for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, -c);
    out.multidegree_ = a.multidegree_;
    return out;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_blocks(b);
    MultiPoly out(a.blocks_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(ea.size());
        for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
        out.add_term(std::move(e), ca * cb);
      }
    }
    if (a.multidegree_ && b.multidegree_ && !out.is_zero()) {
      std::vector<unsigned> d(a.multidegree_->size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*a.multidegree_)[i] + (*b.multidegree_)[i];
      out.multidegree_ = std::move(d);
    }
    return out;
  }

  MultiPoly pow(unsigned k) const {
    MultiPoly out = constant(blocks_, Field<C>::from_int(1));
    for (unsigned i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.blocks_ == b.blocks_ && a.terms_ == b.terms_;
  }

 private:
  void require_same_blocks(const MultiPoly& o) const {
    if (!(blocks_ == o.blocks_)) throw InputError("polynomials live on different variable blocks");
  }

  VarBlocks blocks_;
  Terms terms_;
  std::optional<std::vector<unsigned>> multidegree_;
};

using RationalPoly = MultiPoly<Rational>;
using GaussPoly = MultiPoly<GaussRational>;
using ComplexPoly = MultiPoly<Complex>;

template <class C>
class PolySystem {
 public:
  PolySystem() = default;
  PolySystem(VarBlocks blocks, std::vector<MultiPoly<C>> equations)
      : blocks_(std::move(blocks)), equations_(std::move(equations)) {
    for (const auto& f : equations_)
      if (!(f.blocks() == blocks_)) throw InputError("system equations must share variable blocks");
  }

  const VarBlocks& blocks() const { return blocks_; }
  const std::vector<MultiPoly<C>>& equations() const { return equations_; }
  std::size_t size() const { return equations_.size(); }
  std::size_t num_vars() const { return blocks_.total(); }
  const MultiPoly<C>& operator[](std::size_t i) const { return equations_.at(i); }

  void push_back(MultiPoly<C> f) {
    if (!(f.blocks() == blocks_)) throw InputError("system equations must share variable blocks");
    equations_.push_back(std::move(f));
  }

  PolySystem<Complex> to_complex() const {
    std::vector<ComplexPoly> eqs;
    for (const auto& f : equations_) eqs.push_back(f.to_complex());
    return {blocks_, std::move(eqs)};
  }

  std::vector<Complex> evaluate(std::span<const Complex> point) const {
    std::vector<Complex> out;
    out.reserve(equations_.size());
    for (const auto& f : equations_) out.push_back(f.evaluate(point));
    return out;
  }

 private:
  VarBlocks blocks_;
  std::vector<MultiPoly<C>> equations_;
};

/// Matrix of partial derivatives: entry (i, j) = d(equation i)/d(variable j).
template <class C>
std::vector<std::vector<MultiPoly<C>>> jacobian(const PolySystem<C>& sys) {
  std::vector<std::vector<MultiPoly<C>>> jac;
  jac.reserve(sys.size());
  for (const auto& f : sys.equations()) {
    std::vector<MultiPoly<C>> row;
    row.reserve(sys.num_vars());
    for (std::size_t j = 0; j < sys.num_vars(); ++j) row.push_back(f.derivative(j));
    jac.push_back(std::move(row));
  }
  return jac;
}

/// Per-block affine substitution x_{i,k} = sum_l matrix[k][l] u_{i,l} + offset[k].
template <class C>
struct BlockChart {
  DenseMatrix<C> matrix;  // (block size) x (new variable count)
  std::vector<C> offset;  // length = block size
};

template <class C>
MultiPoly<C> substitute_affine(const MultiPoly<C>& p, const std::vector<BlockChart<C>>& charts) {
  const VarBlocks& blocks = p.blocks();
  if (charts.size() != blocks.count()) throw InputError("one chart per block is required");
  std::vector<std::size_t> new_sizes;
  for (std::size_t b = 0; b < blocks.count(); ++b) {
    const auto& ch = charts[b];
    if (ch.matrix.size() != blocks.size(b) || ch.offset.size() != blocks.size(b))
      throw InputError("chart shape does not match its block");
    const std::size_t cols = ch.matrix.front().size();
    for (const auto& row : ch.matrix)
      if (row.size() != cols) throw InputError("ragged chart matrix");
    if (cols == 0 || matrix_rank(ch.matrix) != cols) throw InputError("rank-deficient chart");
    new_sizes.push_back(cols);
  }
  const VarBlocks out_blocks(new_sizes);

  // Image of each old variable as a linear polynomial in the new variables.
  std::vector<MultiPoly<C>> image;
  for (std::size_t b = 0; b < blocks.count(); ++b) {
    const auto& ch = charts[b];
    for (std::size_t k = 0; k < blocks.size(b); ++k) {
      MultiPoly<C> lin = MultiPoly<C>::constant(out_blocks, ch.offset[k]);
      for (std::size_t l = 0; l < new_sizes[b]; ++l)
        lin += MultiPoly<C>::variable(out_blocks, b, l) * ch.matrix[k][l];
      image.push_back(std::move(lin));
    }
  }

  std::map<std::pair<std::size_t, unsigned>, MultiPoly<C>> powers;
  auto power = [&](std::size_t var, unsigned k) -> const MultiPoly<C>& {
    auto key = std::make_pair(var, k);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    return powers.emplace(key, image[var].pow(k)).first->second;
  };

  MultiPoly<C> out(out_blocks);
  for (const auto& [e, c] : p.terms()) {
    MultiPoly<C> term = MultiPoly<C>::constant(out_blocks, c);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] > 0) term = term * power(v, e[v]);
    out += term;
  }
  return out;
}

/// Product of linear forms in one block: prod_k (forms[k] . x_block).
template <class C>
MultiPoly<C> product_of_linear_forms(const VarBlocks& blocks, std::size_t block, const std::vector<std::vector<C>>& forms) {
  if (block >= blocks.count()) throw InputError("block index out of range");
  MultiPoly<C> out = MultiPoly<C>::constant(blocks, Field<C>::from_int(1));
  for (const auto& form : forms) {
    if (form.size() != blocks.size(block)) throw InputError("linear form length does not match block size");
    MultiPoly<C> lin(blocks);
    for (std::size_t k = 0; k < form.size(); ++k) lin += MultiPoly<C>::variable(blocks, block, k) * form[k];
    out = out * lin;
  }
  std::vector<unsigned> degrees(blocks.count(), 0u);
  degrees[block] = static_cast<unsigned>(forms.size());
  if (!out.is_zero()) out.declare_multidegree(degrees);
  return out;
}

/// Real and imaginary coefficient parts of an exact complex polynomial.
inline std::pair<RationalPoly, RationalPoly> split_real_imag(const GaussPoly& p) {
  RationalPoly re(p.blocks());
  RationalPoly im(p.blocks());
  for (const auto& [e, c] : p.terms()) {
    re.add_term(e, c.re);
    im.add_term(e, c.im);
  }
  return {re, im};
}

}  // namespace trisecant

#endif  // TRISECANT_POLY_HPP
