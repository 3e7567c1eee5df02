#pragma once
#ifndef TRISECANT_CONSTRUCTIONS_HPP
#define TRISECANT_CONSTRUCTIONS_HPP

// Explicit linear sections of Segre-Veronese varieties with prescribed real
// counts. Equation j of a product system is prod_i f_i^(j)(x_i); when every
// f_i^(j) splits into linear factors the solutions are enumerated exactly.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trisecant/linalg.hpp"
#include "trisecant/poly.hpp"
#include "trisecant/poly_json.hpp"
#include "trisecant/random.hpp"
#include "trisecant/variety.hpp"

namespace trisecant {

enum class ConstructionKind { max_real, min_even, min_odd_case_a, min_odd_case_b, segre1n_even };

inline std::string to_string(ConstructionKind k) {
  switch (k) {
    case ConstructionKind::max_real: return "max_real";
    case ConstructionKind::min_even: return "min_even";
    case ConstructionKind::min_odd_case_a: return "min_odd_caseA";
    case ConstructionKind::min_odd_case_b: return "min_odd_caseB";
    case ConstructionKind::segre1n_even: return "segre1n_even";
  }
  return "?";
}

inline ConstructionKind construction_kind_from_string(const std::string& s) {
  for (auto k : {ConstructionKind::max_real, ConstructionKind::min_even, ConstructionKind::min_odd_case_a,
                 ConstructionKind::min_odd_case_b, ConstructionKind::segre1n_even})
    if (to_string(k) == s) return k;
  throw InputError("unknown construction kind '" + s + "'");
}

/// Exact projective point; each block scaled so its first nonzero entry is 1.
struct ExactPoint {
  std::vector<std::vector<GaussRational>> blocks;

  ParamPoint to_param() const {
    ParamPoint p;
    for (const auto& b : blocks) {
      std::vector<Complex> v;
      for (const auto& z : b) v.push_back(Field<GaussRational>::to_complex(z));
      p.blocks.push_back(std::move(v));
    }
    return gauge(std::move(p));
  }
  bool is_real() const {
    for (const auto& b : blocks)
      for (const auto& z : b)
        if (!z.is_real()) return false;
    return true;
  }
  std::vector<GaussRational> flatten() const {
    std::vector<GaussRational> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
};

struct ConstructedSystem {
  VarietySpec spec;
  PolySystem<Rational> system;
  ConstructionKind kind = ConstructionKind::max_real;
  std::optional<std::vector<ExactPoint>> oracle;
  std::size_t expected_real = 0;
  std::size_t expected_total = 0;
  std::uint64_t seed = 0;       // requested seed
  std::uint32_t redraws = 0;    // degenerate draws skipped
};

class DegenerateDraw : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

constexpr int kMaxRedraws = 32;

inline std::vector<GaussRational> normalize_projective(std::vector<GaussRational> v) {
  for (const auto& z : v) {
    if (z.is_zero()) continue;
    const GaussRational inv = GaussRational(1) / z;
    for (auto& w : v) w = w * inv;
    return v;
  }
  throw DegenerateDraw("zero kernel vector");
}

inline GaussRational dot(const std::vector<GaussRational>& a, const std::vector<GaussRational>& b) {
  GaussRational s;
  for (std::size_t k = 0; k < a.size(); ++k) s = s + a[k] * b[k];
  return s;
}

inline std::vector<GaussRational> random_real_vector(Rng& rng, std::size_t n) {
  std::vector<GaussRational> v;
  for (std::size_t k = 0; k < n; ++k) v.emplace_back(rng.small_rational());
  return v;
}

inline std::vector<GaussRational> random_complex_vector(Rng& rng, std::size_t n) {
  std::vector<GaussRational> v;
  for (std::size_t k = 0; k < n; ++k) {
    GaussRational z;
    z.re = rng.small_rational();
    z.im = rng.small_rational();
    v.push_back(z);
  }
  return v;
}

inline std::vector<GaussRational> conj_vector(const std::vector<GaussRational>& v) {
  std::vector<GaussRational> out;
  for (const auto& z : v) out.push_back(conj(z));
  return out;
}

/// factors[i][j][k]: k-th linear factor of f_i^(j).
using FactorTable = std::vector<std::vector<std::vector<std::vector<GaussRational>>>>;

inline GaussPoly product_equation(const VarietySpec& spec, const FactorTable& factors, std::size_t j) {
  const VarBlocks blocks = spec.blocks();
  GaussPoly eq = GaussPoly::constant(blocks, GaussRational(1));
  for (std::size_t i = 0; i < spec.factors(); ++i) eq = eq * product_of_linear_forms(blocks, i, factors[i][j]);
  return eq;
}

/// All solutions of the product system: partition equations into blocks of
/// sizes m_i, pick one factor per equation, solve each block's linear system.
inline std::vector<ExactPoint> enumerate_product_solutions(const VarietySpec& spec, const FactorTable& factors) {
  const std::size_t n = spec.factors();
  const std::size_t big_m = spec.dim();
  std::vector<ExactPoint> out;
  std::vector<std::size_t> owner(big_m);
  std::vector<unsigned> left(spec.m);

  auto solve_choice = [&](const std::vector<std::size_t>& choice) {
    ExactPoint p;
    for (std::size_t i = 0; i < n; ++i) {
      DenseMatrix<GaussRational> rows;
      for (std::size_t j = 0; j < big_m; ++j)
        if (owner[j] == i) rows.push_back(factors[i][j][choice[j]]);
      const auto ker = nullspace(rows, spec.m[i] + 1);
      if (ker.size() != 1) throw DegenerateDraw("linear factors are not in general position");
      p.blocks.push_back(normalize_projective(ker.front()));
    }
    // a simple solution kills exactly one block part of every equation
    for (std::size_t j = 0; j < big_m; ++j) {
      std::size_t vanishing = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& form : factors[i][j])
          if (dot(form, p.blocks[i]).is_zero()) {
            ++vanishing;
            break;
          }
      if (vanishing != 1) throw DegenerateDraw("solution lies on two block factors of one equation");
    }
    out.push_back(std::move(p));
  };

  auto choose = [&](auto&& self, std::size_t j, std::vector<std::size_t>& choice) -> void {
    if (j == big_m) {
      solve_choice(choice);
      return;
    }
    for (std::size_t k = 0; k < factors[owner[j]][j].size(); ++k) {
      choice[j] = k;
      self(self, j + 1, choice);
    }
  };
  auto assign = [&](auto&& self, std::size_t j) -> void {
    if (j == big_m) {
      std::vector<std::size_t> choice(big_m, 0);
      choose(choose, 0, choice);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (left[i] == 0) continue;
      --left[i];
      owner[j] = i;
      self(self, j + 1);
      ++left[i];
    }
  };
  assign(assign, 0);

  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if (out[a] == out[b]) throw DegenerateDraw("two oracle solutions coincide");
  return out;
}

inline RationalPoly real_part_exact(const GaussPoly& p) {
  for (const auto& [e, c] : p.terms())
    if (!c.is_real()) throw std::logic_error("expected a real polynomial");
  return split_real_imag(p).first;
}

/// Replaces each conjugate pair (g, conj g) by (Re g, Im g).
inline std::vector<RationalPoly> realify_pairs(const VarietySpec& spec, const std::vector<GaussPoly>& eqs,
                                               std::size_t pairs) {
  std::vector<RationalPoly> out;
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    if (j < 2 * pairs && j % 2 == 1) continue;
    if (j < 2 * pairs) {
      auto [re, im] = split_real_imag(eqs[j]);
      if (re.is_zero() || im.is_zero()) throw DegenerateDraw("conjugate pair has a vanishing part");
      re.declare_multidegree(spec.d);
      im.declare_multidegree(spec.d);
      out.push_back(std::move(re));
      out.push_back(std::move(im));
    } else {
      auto p = real_part_exact(eqs[j]);
      p.declare_multidegree(spec.d);
      out.push_back(std::move(p));
    }
  }
  return out;
}

template <class Build>
ConstructedSystem with_redraws(std::uint64_t seed, Build&& build) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt), 0x636f));
    try {
      ConstructedSystem c = build(rng);
      c.seed = seed;
      c.redraws = static_cast<std::uint32_t>(attempt);
      return c;
    } catch (const DegenerateDraw&) {
    }
  }
  throw DegenerateDraw("no generic draw after " + std::to_string(kMaxRedraws) + " attempts");
}

}  // namespace detail

inline ConstructedSystem build_max_real(const VarietySpec& spec, std::uint64_t seed) {
  spec.validate();
  return detail::with_redraws(seed, [&](Rng& rng) {
    const std::size_t big_m = spec.dim();
    detail::FactorTable factors(spec.factors());
    for (std::size_t i = 0; i < spec.factors(); ++i) {
      factors[i].resize(big_m);
      for (std::size_t j = 0; j < big_m; ++j)
        for (unsigned k = 0; k < spec.d[i]; ++k) factors[i][j].push_back(detail::random_real_vector(rng, spec.m[i] + 1));
    }
    ConstructedSystem c{spec, PolySystem<Rational>(spec.blocks(), {}), ConstructionKind::max_real, {}, 0, 0, 0, 0};
    for (std::size_t j = 0; j < big_m; ++j) {
      auto eq = detail::real_part_exact(detail::product_equation(spec, factors, j));
      eq.declare_multidegree(spec.d);
      c.system.push_back(std::move(eq));
    }
    c.oracle = detail::enumerate_product_solutions(spec, factors);
    c.expected_total = spec.degree();
    c.expected_real = spec.degree();
    return c;
  });
}

/// Block `even_block` uses (v1.x)^d + (v2.x)^d; other blocks generic forms.
inline ConstructedSystem build_min_even(const VarietySpec& spec, std::size_t even_block, std::uint64_t seed) {
  spec.validate();
  if (even_block >= spec.factors()) throw InputError("even block index out of range");
  if (spec.d[even_block] % 2 != 0) throw InputError("min_even needs an even degree in the chosen block");
  return detail::with_redraws(seed, [&](Rng& rng) {
    const VarBlocks blocks = spec.blocks();
    ConstructedSystem c{spec, PolySystem<Rational>(blocks, {}), ConstructionKind::min_even, {}, 0, 0, 0, 0};
    for (std::size_t j = 0; j < spec.dim(); ++j) {
      RationalPoly eq = RationalPoly::constant(blocks, Rational(1));
      for (std::size_t i = 0; i < spec.factors(); ++i) {
        RationalPoly part(blocks);
        if (i == even_block) {
          for (int r = 0; r < 2; ++r) {
            std::vector<std::vector<Rational>> forms(spec.d[i]);
            std::vector<Rational> v;
            for (unsigned k = 0; k <= spec.m[i]; ++k) v.push_back(rng.small_rational());
            std::fill(forms.begin(), forms.end(), v);
            part += product_of_linear_forms(blocks, i, forms);
          }
        } else {
          for (const auto& mon : block_monomials(spec.m[i] + 1, spec.d[i])) {
            Exponent e(blocks.total(), 0u);
            std::copy(mon.begin(), mon.end(), e.begin() + static_cast<std::ptrdiff_t>(blocks.offset(i)));
            part.add_term(std::move(e), rng.small_rational());
          }
        }
        eq = eq * part;
      }
      eq.declare_multidegree(spec.d);
      c.system.push_back(std::move(eq));
    }
    c.expected_total = spec.degree();
    c.expected_real = 0;
    return c;
  });
}

/// All d_i odd. Case A: M even, some m_i odd. Case B: M odd, two m_i odd.
inline ConstructedSystem build_min_odd(const VarietySpec& spec, std::uint64_t seed) {
  spec.validate();
  for (auto d : spec.d)
    if (d % 2 == 0) throw InputError("min_odd needs every d_i odd (use min_even otherwise)");
  const std::size_t big_m = spec.dim();
  std::size_t odd_m = 0;
  for (auto m : spec.m) odd_m += m % 2;
  const bool case_a = big_m % 2 == 0;
  if (case_a && odd_m == 0)
    throw InputError("min_odd case A needs some odd m_i; all m_i even is not covered by a construction");
  if (!case_a && odd_m < 2)
    throw InputError("min_odd case B needs at least two odd m_i; M odd with one odd m_i is not covered");
  return detail::with_redraws(seed, [&](Rng& rng) {
    const std::size_t pairs = big_m / 2;
    detail::FactorTable factors(spec.factors());
    for (std::size_t i = 0; i < spec.factors(); ++i) {
      factors[i].resize(big_m);
      for (std::size_t p = 0; p < pairs; ++p)
        for (unsigned k = 0; k < spec.d[i]; ++k) {
          auto v = detail::random_complex_vector(rng, spec.m[i] + 1);
          factors[i][2 * p + 1].push_back(detail::conj_vector(v));
          factors[i][2 * p].push_back(std::move(v));
        }
      if (!case_a)
        for (unsigned k = 0; k < spec.d[i]; ++k) factors[i][big_m - 1].push_back(detail::random_real_vector(rng, spec.m[i] + 1));
    }
    std::vector<GaussPoly> eqs;
    for (std::size_t j = 0; j < big_m; ++j) eqs.push_back(detail::product_equation(spec, factors, j));
    ConstructedSystem c{spec, PolySystem<Rational>(spec.blocks(), detail::realify_pairs(spec, eqs, pairs)),
                        case_a ? ConstructionKind::min_odd_case_a : ConstructionKind::min_odd_case_b,
                        {}, 0, 0, 0, 0};
    c.oracle = detail::enumerate_product_solutions(spec, factors);
    for (const auto& p : *c.oracle)
      if (p.is_real()) throw DegenerateDraw("real oracle solution in a min_odd draw");
    c.expected_total = spec.degree();
    c.expected_real = 0;
    return c;
  });
}

/// SV_(1,n)(1,1), n even: f_j + y_n (lambda_j x_1 + mu_j x_0) = 0, y_n x_1 = 0,
/// where f_1..f_n is a real-count-0 system for SV_(1,n-1)(1,1).
inline ConstructedSystem build_segre1n_even(unsigned n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InputError("segre1n construction needs n even and n >= 2");
  const VarietySpec spec({1, n}, {1, 1});
  const VarietySpec base_spec({1, n - 1}, {1, 1});
  const ConstructedSystem base = build_min_odd(base_spec, derive_seed(seed, 0, 0x6261));
  return detail::with_redraws(seed, [&](Rng& rng) {
    const VarBlocks blocks = spec.blocks();
    const std::size_t yn = 2 + n;  // index of y_n in the flattened variables
    auto lift = [&](const RationalPoly& f) {
      RationalPoly g(blocks);
      for (const auto& [e, c] : f.terms()) {
        Exponent e2 = e;
        e2.push_back(0u);
        g.add_term(std::move(e2), c);
      }
      return g;
    };
    auto mono = [&](std::size_t a, std::size_t b) {
      Exponent e(blocks.total(), 0u);
      e[a] = 1;
      e[b] = 1;
      return e;
    };
    ConstructedSystem c{spec, PolySystem<Rational>(blocks, {}), ConstructionKind::segre1n_even, {}, 0, 0, 0, 0};
    std::vector<Rational> mu;
    for (std::size_t j = 0; j < n; ++j) {
      RationalPoly g = lift(base.system[j]);
      const Rational lambda = rng.small_rational();
      mu.push_back(rng.small_rational());
      g.add_term(mono(1, yn), lambda);
      g.add_term(mono(0, yn), mu.back());
      g.declare_multidegree(spec.d);
      c.system.push_back(std::move(g));
    }
    RationalPoly last(blocks);
    last.add_term(mono(1, yn), Rational(1));
    last.declare_multidegree(spec.d);
    c.system.push_back(std::move(last));

    std::vector<ExactPoint> oracle;
    for (const auto& p : *base.oracle) {
      ExactPoint q = p;
      q.blocks[1].push_back(GaussRational());
      oracle.push_back(std::move(q));
    }
    // branch x = (1, 0): n linear equations in y_0..y_n
    DenseMatrix<GaussRational> rows;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<GaussRational> row;
      for (std::size_t k = 0; k < n; ++k) {
        Exponent e(2 + n, 0u);
        e[0] = 1;
        e[2 + k] = 1;
        row.emplace_back(base.system[j].coefficient(e));
      }
      row.emplace_back(mu[j]);
      rows.push_back(std::move(row));
    }
    const auto ker = nullspace(rows, n + 1);
    if (ker.size() != 1 || ker.front().back().is_zero()) throw DegenerateDraw("x1 = 0 branch is not generic");
    oracle.push_back(ExactPoint{{{GaussRational(1), GaussRational()}, detail::normalize_projective(ker.front())}});
    c.oracle = std::move(oracle);
    c.expected_total = spec.degree();
    c.expected_real = 1;
    return c;
  });
}

/// True when every oracle point satisfies every equation exactly.
inline bool oracle_exact(const ConstructedSystem& c) {
  if (!c.oracle) return true;
  for (const auto& p : *c.oracle) {
    const auto flat = p.flatten();
    for (const auto& f : c.system.equations()) {
      const GaussPoly g = f.map_coefficients<GaussRational>([](const Rational& r) { return GaussRational(r); });
      if (!g.evaluate_exact(flat).is_zero()) return false;
    }
  }
  return true;
}

struct VerifyReport {
  bool passed = false;
  std::size_t total = 0;
  std::size_t real = 0;
  std::size_t expected_total = 0;
  std::size_t expected_real = 0;
  bool transversal = false;
  std::optional<double> max_match_distance;
  std::vector<std::string> problems;
};

/// Pairs each oracle point with a distinct endpoint, nearest first; returns the
/// largest distance used or nullopt when sizes differ.
inline std::optional<double> match_points(const std::vector<ParamPoint>& a, const std::vector<ParamPoint>& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = b.size();
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double dist = projective_distance(p, b[k]);
      if (dist < best) {
        best = dist;
        at = k;
      }
    }
    used[at] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

constexpr double kOracleMatchTolerance = 1e-8;

inline PolySystem<Complex> scaled_complex_system(const PolySystem<Rational>& sys) {
  PolySystem<Complex> out(sys.blocks(), {});
  for (const auto& f : sys.equations()) {
    double norm = 0.0;
    for (const auto& [e, c] : f.terms()) norm = std::max(norm, std::abs(c.get_d()));
    ComplexPoly g = f.to_complex();
    out.push_back(norm > 0 ? g * Complex(1.0 / norm) : g);
  }
  return out;
}

inline VerifyReport verify_construction(const ConstructedSystem& c, const TrackerConfig& cfg) {
  VerifyReport r;
  r.expected_total = c.expected_total;
  r.expected_real = c.expected_real;
  const IntersectReport ir = intersect_system(scaled_complex_system(c.system), c.spec.degree(), cfg);
  r.total = ir.count;
  r.real = ir.real_count;
  r.transversal = ir.transversal;
  if (r.total != r.expected_total)
    r.problems.push_back("total " + std::to_string(r.total) + " != expected " + std::to_string(r.expected_total));
  if (r.real != r.expected_real)
    r.problems.push_back("real " + std::to_string(r.real) + " != expected " + std::to_string(r.expected_real));
  if (!ir.transversal) r.problems.push_back("solve was not transversal or lost paths");
  if (c.oracle) {
    std::vector<ParamPoint> oracle;
    for (const auto& p : *c.oracle) oracle.push_back(p.to_param());
    std::vector<ParamPoint> found;
    for (const auto& p : ir.points) found.push_back(p.point);
    r.max_match_distance = match_points(oracle, found);
    if (!r.max_match_distance)
      r.problems.push_back("oracle has " + std::to_string(oracle.size()) + " points, solver " + std::to_string(found.size()));
    else if (!(*r.max_match_distance <= kOracleMatchTolerance))
      r.problems.push_back("oracle/solver mismatch " + std::to_string(*r.max_match_distance));
    if (!oracle_exact(c)) r.problems.push_back("oracle point fails the exact system");
  }
  r.passed = r.problems.empty();
  return r;
}

inline Json to_json(const ExactPoint& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) {
    Json coords = Json::array();
    for (const auto& z : b) coords.push_back({to_string(z.re), to_string(z.im)});
    blocks.push_back(std::move(coords));
  }
  return blocks;
}

inline ExactPoint exact_point_from_json(const Json& j) {
  ExactPoint p;
  for (const auto& b : j) {
    std::vector<GaussRational> coords;
    for (const auto& z : b) coords.push_back({detail::json_to_rational(z.at(0)), detail::json_to_rational(z.at(1))});
    p.blocks.push_back(std::move(coords));
  }
  return p;
}

inline Json to_json(const ConstructedSystem& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["spec"] = to_json(c.spec);
  j["seed"] = c.seed;
  j["redraws"] = c.redraws;
  j["expected_real"] = c.expected_real;
  j["expected_total"] = c.expected_total;
  j["system"] = to_json(c.system);
  if (c.oracle) {
    Json o = Json::array();
    for (const auto& p : *c.oracle) o.push_back(to_json(p));
    j["oracle"] = std::move(o);
  } else {
    j["oracle"] = nullptr;
  }
  return j;
}

inline ConstructedSystem construction_from_json(const Json& j) {
  ConstructedSystem c{spec_from_json(j.at("spec")), system_from_json<Rational>(j.at("system")),
                      construction_kind_from_string(j.at("kind").get<std::string>()), {}, 0, 0, 0, 0};
  c.expected_real = j.at("expected_real").get<std::size_t>();
  c.expected_total = j.at("expected_total").get<std::size_t>();
  c.seed = j.value("seed", std::uint64_t{0});
  c.redraws = j.value("redraws", std::uint32_t{0});
  if (!(c.system.blocks() == c.spec.blocks())) throw InputError("system blocks do not match the spec");
  if (j.contains("oracle") && !j.at("oracle").is_null()) {
    std::vector<ExactPoint> o;
    for (const auto& p : j.at("oracle")) o.push_back(exact_point_from_json(p));
    c.oracle = std::move(o);
  }
  return c;
}

}  // namespace trisecant

#endif  // TRISECANT_CONSTRUCTIONS_HPP
