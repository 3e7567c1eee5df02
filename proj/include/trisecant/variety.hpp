#pragma once
#ifndef TRISECANT_VARIETY_HPP
#define TRISECANT_VARIETY_HPP

// Segre-Veronese varieties SV_(m_1..m_n)(d_1..d_n): monomial embedding,
// linear sections and their pullbacks, and intersection by homotopy.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "trisecant/homotopy.hpp"
#include "trisecant/poly.hpp"
#include "trisecant/random.hpp"

namespace trisecant {

class DegenerateSpan : public std::runtime_error {
 public:
  DegenerateSpan(std::size_t rank, std::size_t wanted)
      : std::runtime_error("spanning points have rank " + std::to_string(rank) + ", expected " +
                           std::to_string(wanted)) {}
};

struct VarietySpec {
  std::vector<unsigned> m;
  std::vector<unsigned> d;

  VarietySpec() = default;
  VarietySpec(std::vector<unsigned> m_, std::vector<unsigned> d_) : m(std::move(m_)), d(std::move(d_)) { validate(); }

  void validate() const {
    if (m.empty() || m.size() != d.size()) throw InputError("spec needs equal-length nonempty m and d");
    for (auto v : m)
      if (v == 0) throw InputError("spec entries m_i must be positive");
    for (auto v : d)
      if (v == 0) throw InputError("spec entries d_i must be positive");
  }

  std::size_t factors() const { return m.size(); }
  /// M = sum m_i
  unsigned dim() const {
    unsigned s = 0;
    for (auto v : m) s += v;
    return s;
  }
  /// N = prod C(m_i + d_i, d_i), the number of coordinates of the embedding.
  std::size_t ambient_dim() const {
    mpz_class n = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), m[i] + d[i], d[i]);
      n *= c;
    }
    if (!n.fits_ulong_p()) throw InputError("ambient dimension too large");
    return n.get_ui();
  }
  /// M! / prod m_i! * prod d_i^{m_i}
  mpz_class degree_exact() const {
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), dim());
    for (std::size_t i = 0; i < m.size(); ++i) {
      mpz_class f, p;
      mpz_fac_ui(f.get_mpz_t(), m[i]);
      out /= f;
      mpz_ui_pow_ui(p.get_mpz_t(), d[i], m[i]);
      out *= p;
    }
    return out;
  }
  std::uint64_t degree() const {
    const mpz_class g = degree_exact();
    if (!g.fits_ulong_p()) throw InputError("degree too large");
    return g.get_ui();
  }
  VarBlocks blocks() const {
    std::vector<std::size_t> sizes;
    for (auto v : m) sizes.push_back(v + 1);
    return VarBlocks(sizes);
  }

  friend bool operator==(const VarietySpec&, const VarietySpec&) = default;
};

inline nlohmann::ordered_json to_json(const VarietySpec& s) { return {{"m", s.m}, {"d", s.d}}; }

inline VarietySpec spec_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("d")) throw InputError("spec JSON needs \"m\" and \"d\"");
  for (const auto& key : {"m", "d"})
    for (const auto& v : j.at(key))
      if (!v.is_number_integer() || v.get<long>() <= 0) throw InputError("spec entries must be positive integers");
  return {j.at("m").get<std::vector<unsigned>>(), j.at("d").get<std::vector<unsigned>>()};
}

/// Exponents of degree `degree` in `vars` variables, graded-lex (x0^d first).
inline std::vector<Exponent> block_monomials(std::size_t vars, unsigned degree) {
  std::vector<Exponent> out;
  Exponent e(vars, 0u);
  auto rec = [&](auto&& self, std::size_t v, unsigned left) -> void {
    if (v + 1 == vars) {
      e[v] = left;
      out.push_back(e);
      return;
    }
    for (unsigned k = left + 1; k-- > 0;) {
      e[v] = k;
      self(self, v + 1, left - k);
    }
    e[v] = 0;
  };
  rec(rec, 0, degree);
  return out;
}

/// Full exponent vectors of the ambient coordinates, block 0 varying slowest.
inline std::vector<Exponent> ambient_monomials(const VarietySpec& spec) {
  std::vector<Exponent> out{Exponent{}};
  for (std::size_t i = 0; i < spec.factors(); ++i) {
    const auto mons = block_monomials(spec.m[i] + 1, spec.d[i]);
    std::vector<Exponent> next;
    for (const auto& prefix : out)
      for (const auto& mon : mons) {
        Exponent e = prefix;
        e.insert(e.end(), mon.begin(), mon.end());
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

/// Point of (P^{m_1} x ... x P^{m_n}), one coordinate vector per block.
struct ParamPoint {
  std::vector<std::vector<Complex>> blocks;

  std::vector<Complex> flatten() const {
    std::vector<Complex> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  bool is_real(double tol = 0.0) const {
    for (const auto& b : blocks)
      for (const auto& z : b)
        if (std::abs(z.imag()) > tol) return false;
    return true;
  }
};

inline void check_point(const VarietySpec& spec, const ParamPoint& p) {
  if (p.blocks.size() != spec.factors()) throw InputError("point has the wrong number of blocks");
  for (std::size_t i = 0; i < spec.factors(); ++i) {
    if (p.blocks[i].size() != spec.m[i] + 1) throw InputError("point block has the wrong length");
    double n = 0.0;
    for (const auto& z : p.blocks[i]) n += std::norm(z);
    if (!(n > 0.0)) throw InputError("point block is zero");
  }
}

/// Unit norm per block, first nonvanishing coordinate positive real.
inline ParamPoint gauge(ParamPoint p) {
  for (auto& b : p.blocks) {
    double n = 0.0;
    for (const auto& z : b) n += std::norm(z);
    n = std::sqrt(n);
    if (!(n > 0.0)) throw InputError("point block is zero");
    for (auto& z : b) z /= n;
    for (const auto& z : b) {
      if (std::abs(z) > 1e-10) {
        const Complex phase = std::conj(z) / std::abs(z);
        for (auto& w : b) w *= phase;
        break;
      }
    }
    for (auto& z : b)
      if (z.imag() == 0.0) z = {z.real(), 0.0};  // no signed zeros in output
  }
  return p;
}

inline std::vector<Complex> embed(const VarietySpec& spec, const ParamPoint& p) {
  check_point(spec, p);
  const auto flat = p.flatten();
  std::vector<Complex> out;
  for (const auto& e : ambient_monomials(spec)) {
    Complex v = 1.0;
    for (std::size_t k = 0; k < e.size(); ++k)
      for (unsigned r = 0; r < e[k]; ++r) v *= flat[k];
    out.push_back(v);
  }
  return out;
}

/// Distance between projective points: max over blocks of min_phase |x - e^{i phi} y|
/// for unit-normalized representatives. Zero iff the points coincide.
inline double projective_distance(const ParamPoint& a, const ParamPoint& b) {
  if (a.blocks.size() != b.blocks.size()) throw InputError("points have different block structure");
  const ParamPoint ga = gauge(a);
  const ParamPoint gb = gauge(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < ga.blocks.size(); ++i) {
    const auto& x = ga.blocks[i];
    const auto& y = gb.blocks[i];
    if (x.size() != y.size()) throw InputError("points have different block structure");
    Complex inner = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) inner += std::conj(y[k]) * x[k];
    const Complex phase = std::abs(inner) > 0 ? inner / std::abs(inner) : Complex(1.0);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - phase * y[k]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

/// Uniform on the product of unit spheres, gauge-fixed.
inline ParamPoint sample_real_point(const VarietySpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  ParamPoint p;
  for (auto mi : spec.m) {
    std::vector<Complex> b;
    double n = 0.0;
    do {
      b.clear();
      n = 0.0;
      for (unsigned k = 0; k <= mi; ++k) {
        const double x = rng.normal();
        b.emplace_back(x, 0.0);
        n += x * x;
      }
    } while (!(n > 1e-24));
    p.blocks.push_back(std::move(b));
  }
  return gauge(std::move(p));
}

/// Real linear space, dually as orthonormal cutting forms (rows of `forms`),
/// primally by its spanning points when known.
struct LinearSection {
  VarietySpec spec;
  std::optional<Eigen::MatrixXd> points;  // rows: unit embedded spanning points
  Eigen::MatrixXd forms;                   // rows: orthonormal covectors

  std::size_t codim() const { return static_cast<std::size_t>(forms.rows()); }
  /// Projective dimension N - 1 - #forms.
  long projective_dim() const { return static_cast<long>(spec.ambient_dim()) - 1 - static_cast<long>(forms.rows()); }
};

constexpr double kSpanRankTolerance = 1e-10;

inline LinearSection span_section(const VarietySpec& spec, const std::vector<ParamPoint>& points) {
  const std::size_t big_n = spec.ambient_dim();
  const std::size_t n = points.size();
  if (n == 0 || n > big_n) throw InputError("need between 1 and N spanning points");
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(big_n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!points[r].is_real()) throw InputError("spanning points must be real");
    const auto v = embed(spec, points[r]);
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (std::size_t c = 0; c < big_n; ++c) p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c].real() / norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > kSpanRankTolerance * s[0]) ++rank;
  if (rank < n) throw DegenerateSpan(rank, n);
  LinearSection out;
  out.spec = spec;
  out.points = p;
  out.forms = svd.matrixV().rightCols(static_cast<Eigen::Index>(big_n - n)).transpose();
  return out;
}

/// Section cut out by the given real covectors, orthonormalized.
inline LinearSection section_from_forms(const VarietySpec& spec, const Eigen::MatrixXd& forms) {
  const auto big_n = static_cast<Eigen::Index>(spec.ambient_dim());
  if (forms.cols() != big_n) throw InputError("cutting forms must have length N");
  if (forms.rows() == 0 || forms.rows() >= big_n) throw InputError("need between 1 and N-1 cutting forms");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(forms.transpose(), Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (!(s[s.size() - 1] > kSpanRankTolerance * s[0])) throw InputError("cutting forms are linearly dependent");
  LinearSection out;
  out.spec = spec;
  out.forms = svd.matrixU().transpose();
  return out;
}

/// Gaussian cutting forms of complementary dimension (M of them).
inline LinearSection random_complementary_section(const VarietySpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const auto big_n = static_cast<Eigen::Index>(spec.ambient_dim());
  Eigen::MatrixXd f(static_cast<Eigen::Index>(spec.dim()), big_n);
  for (Eigen::Index r = 0; r < f.rows(); ++r)
    for (Eigen::Index c = 0; c < big_n; ++c) f(r, c) = rng.normal();
  return section_from_forms(spec, f);
}

/// <w, embed(x)> as a multihomogeneous polynomial of multidegree d.
template <class C>
MultiPoly<C> pullback_form(const VarietySpec& spec, const std::vector<C>& covector) {
  const auto mons = ambient_monomials(spec);
  if (covector.size() != mons.size()) throw InputError("covector length does not match N");
  MultiPoly<C> p(spec.blocks());
  p.declare_multidegree(spec.d);
  for (std::size_t k = 0; k < mons.size(); ++k) p.add_term(mons[k], covector[k]);
  return p;
}

/// Inverse of pullback_form.
template <class C>
std::vector<C> to_covector(const VarietySpec& spec, const MultiPoly<C>& p) {
  if (!(p.blocks() == spec.blocks())) throw InputError("polynomial blocks do not match the spec");
  const auto mons = ambient_monomials(spec);
  std::vector<C> out;
  for (const auto& e : mons) out.push_back(p.coefficient(e));
  std::size_t used = 0;
  for (const auto& e : mons)
    if (!Field<C>::is_zero(p.coefficient(e))) ++used;
  if (used != p.terms().size()) throw InputError("polynomial is not of multidegree d");
  return out;
}

inline PolySystem<Complex> pullback(const LinearSection& section) {
  PolySystem<Complex> sys(section.spec.blocks(), {});
  for (Eigen::Index r = 0; r < section.forms.rows(); ++r) {
    std::vector<Complex> w;
    for (Eigen::Index c = 0; c < section.forms.cols(); ++c) w.emplace_back(section.forms(r, c), 0.0);
    sys.push_back(pullback_form(section.spec, w));
  }
  return sys;
}

/// Per block x_i = c_i + U_i u_i with c_i a unit vector and U_i an orthonormal
/// basis of its complement.
struct ChartRecord {
  std::vector<Eigen::VectorXd> center;
  std::vector<Eigen::MatrixXd> basis;

  /// Chart x_{i,0} = 1, x_{i,k} = u_{i,k}.
  static ChartRecord axis(const VarBlocks& blocks) {
    ChartRecord ch;
    for (std::size_t b = 0; b < blocks.count(); ++b) {
      const auto n = static_cast<Eigen::Index>(blocks.size(b));
      ch.center.push_back(Eigen::VectorXd::Unit(n, 0));
      ch.basis.push_back(Eigen::MatrixXd::Identity(n, n).rightCols(n - 1));
    }
    return ch;
  }

  static ChartRecord random(const VarBlocks& blocks, std::uint64_t seed) {
    Rng rng(seed);
    ChartRecord ch;
    for (std::size_t b = 0; b < blocks.count(); ++b) {
      const auto n = static_cast<Eigen::Index>(blocks.size(b));
      Eigen::VectorXd c(n);
      do {
        for (Eigen::Index k = 0; k < n; ++k) c[k] = rng.normal();
      } while (!(c.norm() > 1e-6));
      c.normalize();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
      if (q.col(0).dot(c) < 0) q.col(0) *= -1.0;
      ch.center.push_back(c);
      ch.basis.push_back(q.rightCols(n - 1));
    }
    return ch;
  }

  std::vector<BlockChart<Complex>> charts() const {
    std::vector<BlockChart<Complex>> out;
    for (std::size_t b = 0; b < center.size(); ++b) {
      BlockChart<Complex> ch;
      for (Eigen::Index r = 0; r < basis[b].rows(); ++r) {
        std::vector<Complex> row;
        for (Eigen::Index c = 0; c < basis[b].cols(); ++c) row.emplace_back(basis[b](r, c), 0.0);
        ch.matrix.push_back(std::move(row));
        ch.offset.emplace_back(center[b][r], 0.0);
      }
      out.push_back(std::move(ch));
    }
    return out;
  }

  ParamPoint lift(std::span<const Complex> u) const {
    ParamPoint p;
    std::size_t at = 0;
    for (std::size_t b = 0; b < center.size(); ++b) {
      std::vector<Complex> x;
      for (Eigen::Index r = 0; r < basis[b].rows(); ++r) {
        Complex v = center[b][r];
        for (Eigen::Index c = 0; c < basis[b].cols(); ++c) v += basis[b](r, c) * u[at + static_cast<std::size_t>(c)];
        x.push_back(v);
      }
      at += static_cast<std::size_t>(basis[b].cols());
      p.blocks.push_back(std::move(x));
    }
    return p;
  }
};

struct AffineSystem {
  PolySystem<Complex> system;
  ChartRecord chart;
};

inline AffineSystem dehomogenize(const PolySystem<Complex>& sys, const ChartRecord& chart) {
  const auto charts = chart.charts();
  std::vector<ComplexPoly> eqs;
  for (const auto& f : sys.equations()) eqs.push_back(substitute_affine(f, charts));
  std::vector<std::size_t> sizes;
  for (std::size_t b = 0; b < sys.blocks().count(); ++b) sizes.push_back(sys.blocks().size(b) - 1);
  return {PolySystem<Complex>(VarBlocks(sizes), std::move(eqs)), chart};
}

inline AffineSystem dehomogenize(const PolySystem<Complex>& sys, std::uint64_t seed) {
  return dehomogenize(sys, ChartRecord::random(sys.blocks(), seed));
}

/// max_k |f_k(x)| / sum |coefficients of f_k| with x gauge-normalized, so
/// every monomial has modulus at most 1.
inline double homogeneous_residual(const PolySystem<Complex>& sys, const ParamPoint& p) {
  const auto flat = gauge(p).flatten();
  double worst = 0.0;
  for (const auto& f : sys.equations()) {
    double scale = 0.0;
    for (const auto& [e, c] : f.terms()) scale += std::abs(c);
    if (scale > 0.0) worst = std::max(worst, std::abs(f.evaluate(flat)) / scale);
  }
  return worst;
}

struct IntersectionPoint {
  ParamPoint point;  // gauge-normalized
  double residual = 0.0;  // on the original cutting forms
  bool is_real = false;
  double condition = 1.0;
  std::size_t origin = 0;
};

struct IntersectReport {
  std::vector<IntersectionPoint> points;  // after filtering
  std::size_t degree = 0;
  std::size_t raw_count = 0;
  std::size_t raw_real_count = 0;
  std::size_t count = 0;
  std::size_t real_count = 0;
  std::size_t paths_tracked = 0;
  std::size_t paths_diverged = 0;
  std::size_t paths_failed = 0;
  bool squared_up = false;
  bool transversal = true;
};

constexpr double kOverdeterminedFilter = 1e-8;

/// Solves a multihomogeneous square system in a random real chart. A solution
/// close to the chart's hyperplane at infinity looks divergent, so a short
/// count is retried in a fresh chart.
inline IntersectReport intersect_system(const PolySystem<Complex>& sys, std::size_t degree, const TrackerConfig& cfg,
                                        const std::vector<ComplexPoly>& check = {}) {
  const PolySystem<Complex> checker(sys.blocks(), check.empty() ? sys.equations() : check);
  IntersectReport best;
  for (int attempt = 0; attempt <= cfg.max_path_retries; ++attempt) {
    const auto a = static_cast<std::uint64_t>(attempt);
    const AffineSystem aff = dehomogenize(sys, derive_seed(cfg.seed, a, 0x6368));
    TrackerConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, a, 0x736f);
    const SolveReport rep = solve_square(aff.system, sub);

    IntersectReport out;
    out.degree = degree;
    out.paths_tracked = rep.paths_tracked;
    out.paths_diverged = rep.paths_diverged;
    out.paths_failed = rep.paths_failed;
    out.raw_count = rep.solutions.size();
    out.transversal = rep.paths_failed == 0 && !rep.non_transversal && out.raw_count == degree;
    for (const auto& s : rep.solutions) {
      if (s.is_real) ++out.raw_real_count;
      IntersectionPoint ip;
      ip.point = gauge(aff.chart.lift(s.coordinates));
      if (s.is_real)
        for (auto& b : ip.point.blocks)
          for (auto& z : b) z = {z.real(), 0.0};
      ip.residual = homogeneous_residual(checker, ip.point);
      ip.is_real = s.is_real;
      ip.condition = s.condition;
      ip.origin = s.origin;
      if (ip.residual > kOverdeterminedFilter) continue;
      if (ip.is_real) ++out.real_count;
      out.points.push_back(std::move(ip));
    }
    out.count = out.points.size();
    const bool better = attempt == 0 || out.raw_count > best.raw_count;
    if (better) best = std::move(out);
    if (best.raw_count == degree && best.paths_failed == 0) break;
  }
  return best;
}

inline IntersectReport intersect(const LinearSection& section, const TrackerConfig& cfg) {
  const VarietySpec& spec = section.spec;
  const auto big_m = static_cast<Eigen::Index>(spec.dim());
  const auto k = section.forms.rows();
  if (k < big_m) throw InputError("section has more than complementary dimension; intersection is not finite");
  const PolySystem<Complex> full = pullback(section);
  if (k == big_m) {
    return intersect_system(full, spec.degree(), cfg);
  }
  Rng rng(derive_seed(cfg.seed, 2, 0x7371));
  Eigen::MatrixXd mix(big_m, k);
  for (Eigen::Index r = 0; r < big_m; ++r)
    for (Eigen::Index c = 0; c < k; ++c) mix(r, c) = rng.normal();
  LinearSection squared;
  squared.spec = spec;
  squared.forms = mix * section.forms;
  IntersectReport r = intersect_system(pullback(squared), spec.degree(), cfg, full.equations());
  r.squared_up = true;
  return r;
}

}  // namespace trisecant

#endif  // TRISECANT_VARIETY_HPP
