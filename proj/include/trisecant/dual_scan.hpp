#pragma once
#ifndef TRISECANT_DUAL_SCAN_HPP
#define TRISECANT_DUAL_SCAN_HPP

// Real intersection counts of plane curves with lines, over grids in the dual
// plane and along segments, and of hypersurfaces with random lines.

#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "trisecant/parallel.hpp"
#include "trisecant/poly.hpp"
#include "trisecant/poly_json.hpp"
#include "trisecant/random.hpp"
#include "trisecant/sturm.hpp"

namespace trisecant {

struct PlaneCurve {
  std::string name;
  RationalPoly form;
  unsigned degree = 0;

  PlaneCurve(std::string n, RationalPoly f) : name(std::move(n)), form(std::move(f)) {
    if (form.num_vars() != 3) throw InputError("plane curve needs a ternary form");
    degree = detail::homogeneous_degree(form);
  }
};

namespace detail {

inline RationalPoly ternary(std::initializer_list<std::pair<long, std::array<unsigned, 3>>> terms) {
  RationalPoly p(VarBlocks({3}));
  for (const auto& [c, e] : terms) p.add_term({e[0], e[1], e[2]}, Rational(c));
  return p;
}

}  // namespace detail

/// 25(x^4+y^4+z^4) - 34(x^2y^2+x^2z^2+y^2z^2)
inline PlaneCurve edge_quartic() {
  return {"edge", detail::ternary({{25, {4, 0, 0}},
                                   {25, {0, 4, 0}},
                                   {25, {0, 0, 4}},
                                   {-34, {2, 2, 0}},
                                   {-34, {2, 0, 2}},
                                   {-34, {0, 2, 2}}})};
}

/// x^4 + y^4 - z^4
inline PlaneCurve fermat_quartic() { return {"fermat4", detail::ternary({{1, {4, 0, 0}}, {1, {0, 4, 0}}, {-1, {0, 0, 4}}})}; }

/// Dual curve of the edge quartic in coordinates [u, v, w] (fixed data).
inline RationalPoly edge_dual_curve() {
  return detail::ternary({{10000, {12, 0, 0}},  {-98600, {10, 2, 0}}, {-98600, {10, 0, 2}}, {326225, {8, 4, 0}},
                          {85646, {8, 2, 2}},   {326225, {8, 0, 4}},  {-442850, {6, 6, 0}}, {-120462, {6, 4, 2}},
                          {-120462, {6, 2, 4}}, {-442850, {6, 0, 6}}, {326225, {4, 8, 0}},  {-120462, {4, 6, 2}},
                          {398634, {4, 4, 4}},  {-120462, {4, 2, 6}}, {326225, {4, 0, 8}},  {-98600, {2, 10, 0}},
                          {85646, {2, 8, 2}},   {-120462, {2, 6, 4}}, {-120462, {2, 4, 6}}, {85646, {2, 2, 8}},
                          {-98600, {2, 0, 10}}, {10000, {0, 12, 0}},  {-98600, {0, 10, 2}}, {326225, {0, 8, 4}},
                          {-442850, {0, 6, 6}}, {326225, {0, 4, 8}},  {-98600, {0, 2, 10}}, {10000, {0, 0, 12}}});
}

/// x1^4 + ... + xk^4 - x0^4 in k + 1 variables.
inline RationalPoly even_power_form(std::size_t k, unsigned degree = 4) {
  if (k == 0 || degree % 2 != 0) throw InputError("even power form needs k >= 1 and an even degree");
  RationalPoly p(VarBlocks({k + 1}));
  for (std::size_t v = 0; v <= k; ++v) {
    Exponent e(k + 1, 0u);
    e[v] = degree;
    p.add_term(std::move(e), Rational(v == 0 ? -1 : 1));
  }
  return p;
}

inline PlaneCurve builtin_curve(const std::string& name) {
  if (name == "edge") return edge_quartic();
  if (name == "fermat4") return fermat_quartic();
  throw InputError("unknown builtin curve '" + name + "' (edge, fermat4)");
}

using DualPoint = std::array<Rational, 3>;

/// Dual charts: w -> [a, b, 1], v -> [a, 1, b], u -> [1, a, b].
inline DualPoint chart_point(char chart, const Rational& a, const Rational& b) {
  switch (chart) {
    case 'w': return {a, b, Rational(1)};
    case 'v': return {a, Rational(1), b};
    case 'u': return {Rational(1), a, b};
    default: throw InputError(std::string("unknown chart '") + chart + "' (u, v, w)");
  }
}

/// Real points of the curve on the line {u x + v y + w z = 0}, or nullopt when
/// the line is tangent or passes through a singular point.
inline std::optional<std::size_t> count_dual_point(const PlaneCurve& c, const DualPoint& l) {
  const auto basis = nullspace(DenseMatrix<Rational>{{l[0], l[1], l[2]}}, 3);
  if (basis.size() != 2) throw InputError("dual point is zero");
  return count_on_line(c.form, basis[0], basis[1]);
}

constexpr long kPerturbDenominator = 1000000000;  // 1e-9

struct ScanGrid {
  char chart = 'w';
  Rational u0, u1, v0, v1;
  std::size_t resolution = 0;
  std::string curve;
  std::vector<int> cells;  // cells[j * res + i], i along u, j along v; -1 boundary

  Rational cell_u(std::size_t i) const { return u0 + (u1 - u0) * Rational(2 * static_cast<long>(i) + 1, 2 * static_cast<long>(resolution)); }
  Rational cell_v(std::size_t j) const { return v0 + (v1 - v0) * Rational(2 * static_cast<long>(j) + 1, 2 * static_cast<long>(resolution)); }
  int at(std::size_t i, std::size_t j) const { return cells.at(j * resolution + i); }

  std::map<int, std::size_t> histogram() const {
    std::map<int, std::size_t> h;
    for (int c : cells) ++h[c];
    return h;
  }
  friend bool operator==(const ScanGrid&, const ScanGrid&) = default;
};

inline ScanGrid scan(const PlaneCurve& c, char chart, const Rational& u0, const Rational& u1, const Rational& v0,
                     const Rational& v1, std::size_t resolution, std::size_t workers = 1) {
  if (resolution < 2) throw InputError("resolution must be at least 2");
  if (!(u0 < u1) || !(v0 < v1)) throw InputError("empty scan range");
  chart_point(chart, 0, 0);  // validates the chart id
  ScanGrid g{chart, u0, u1, v0, v1, resolution, c.name, std::vector<int>(resolution * resolution, -1)};
  const Rational delta(1, kPerturbDenominator);
  parallel_for(resolution, workers, [&](std::size_t j) {
    const Rational v = g.cell_v(j);
    for (std::size_t i = 0; i < resolution; ++i) {
      const Rational u = g.cell_u(i);
      const auto center = count_dual_point(c, chart_point(chart, u, v));
      int value = -1;
      if (center) {
        value = static_cast<int>(*center);
        for (const auto& [du, dv] : std::array<std::pair<int, int>, 4>{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}}) {
          const auto near = count_dual_point(c, chart_point(chart, u + delta * du, v + delta * dv));
          if (!near || *near != *center) {
            value = -1;
            break;
          }
        }
      }
      g.cells[j * resolution + i] = value;
    }
  });
  return g;
}

/// Fixed palette indexed by count; boundary cells are black.
inline std::array<unsigned char, 3> count_color(int count) {
  static constexpr std::array<std::array<unsigned char, 3>, 13> palette{{{166, 206, 227},
                                                                        {31, 120, 180},
                                                                        {178, 223, 138},
                                                                        {51, 160, 44},
                                                                        {251, 154, 153},
                                                                        {227, 26, 28},
                                                                        {253, 191, 111},
                                                                        {255, 127, 0},
                                                                        {202, 178, 214},
                                                                        {106, 61, 154},
                                                                        {255, 255, 153},
                                                                        {177, 89, 40},
                                                                        {240, 240, 240}}};
  if (count < 0) return {0, 0, 0};
  return palette[static_cast<std::size_t>(std::min(count, 12))];
}

inline Json grid_header(const ScanGrid& g) {
  return {{"chart", std::string(1, g.chart)}, {"u", {to_string(g.u0), to_string(g.u1)}},
          {"v", {to_string(g.v0), to_string(g.v1)}}, {"resolution", g.resolution}, {"curve", g.curve}};
}

/// CSV: a "# {json}" header line, then u,v,count rows (B marks boundary).
inline void write_grid_csv(const ScanGrid& g, std::ostream& out, const Json& extra = Json::object()) {
  Json h = extra;
  h["grid"] = grid_header(g);
  out << "# " << h.dump() << "\n";
  out << "u,v,count\n";
  for (std::size_t j = 0; j < g.resolution; ++j)
    for (std::size_t i = 0; i < g.resolution; ++i) {
      out << to_string(g.cell_u(i)) << ',' << to_string(g.cell_v(j)) << ',';
      const int c = g.at(i, j);
      if (c < 0)
        out << 'B';
      else
        out << c;
      out << '\n';
    }
}

inline ScanGrid read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw InputError("grid CSV needs a '# {json}' header");
  Json h;
  try {
    h = Json::parse(line.substr(2)).at("grid");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad grid header: ") + e.what());
  }
  ScanGrid g;
  g.chart = h.at("chart").get<std::string>().at(0);
  g.u0 = parse_rational(h.at("u").at(0).get<std::string>());
  g.u1 = parse_rational(h.at("u").at(1).get<std::string>());
  g.v0 = parse_rational(h.at("v").at(0).get<std::string>());
  g.v1 = parse_rational(h.at("v").at(1).get<std::string>());
  g.resolution = h.at("resolution").get<std::size_t>();
  g.curve = h.at("curve").get<std::string>();
  g.cells.assign(g.resolution * g.resolution, -1);
  std::getline(in, line);  // column names
  std::size_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (k >= g.cells.size()) throw InputError("grid CSV has too many rows");
    const auto last = line.rfind(',');
    const std::string value = line.substr(last + 1);
    g.cells[k] = value == "B" ? -1 : std::stoi(value);
    const auto first = line.find(',');
    const std::size_t i = k % g.resolution;
    const std::size_t j = k / g.resolution;
    if (parse_rational(line.substr(0, first)) != g.cell_u(i) ||
        parse_rational(line.substr(first + 1, last - first - 1)) != g.cell_v(j))
      throw InputError("grid CSV row " + std::to_string(k) + " has unexpected coordinates");
    ++k;
  }
  if (k != g.cells.size()) throw InputError("grid CSV is missing rows");
  return g;
}

/// Binary PPM, v increasing upwards.
inline void write_grid_ppm(const ScanGrid& g, std::ostream& out, const std::string& comment = {}) {
  out << "P6\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << g.resolution << ' ' << g.resolution << "\n255\n";
  for (std::size_t r = 0; r < g.resolution; ++r) {
    const std::size_t j = g.resolution - 1 - r;
    for (std::size_t i = 0; i < g.resolution; ++i) {
      const auto c = count_color(g.at(i, j));
      out.write(reinterpret_cast<const char*>(c.data()), 3);
    }
  }
}

inline void emit_grid(const ScanGrid& g, const std::string& format, std::ostream& out, const Json& extra = Json::object()) {
  if (format == "csv")
    write_grid_csv(g, out, extra);
  else if (format == "ppm")
    write_grid_ppm(g, out, extra.empty() ? std::string() : extra.dump());
  else
    throw InputError("grid format must be csv or ppm");
  if (!out) throw std::runtime_error("failed to write grid");
}

struct Crossing {
  Rational lo;
  Rational hi;
  int before = 0;
  int after = 0;
  bool resolved = false;  // isolated, width <= target, |delta| = 2

  int delta() const { return after - before; }
};

struct WalkReport {
  DualPoint from;
  DualPoint to;
  std::vector<std::pair<Rational, std::optional<std::size_t>>> samples;
  std::vector<Crossing> crossings;

  bool all_resolved_delta_two() const {
    for (const auto& c : crossings)
      if (c.resolved && std::abs(c.delta()) != 2) return false;
    return true;
  }
};

inline DualPoint segment_point(const DualPoint& a, const DualPoint& b, const Rational& t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

constexpr int kWalkMaxDepth = 40;

namespace detail {

/// Count at t, nudging off tangencies by a fraction of the bracket width.
inline std::optional<std::size_t> count_near(const PlaneCurve& c, const DualPoint& a, const DualPoint& b, Rational t,
                                             const Rational& width) {
  for (int k = 0; k < 4; ++k) {
    if (auto n = count_dual_point(c, segment_point(a, b, t))) return n;
    t += width / Rational(7 + k);
  }
  return std::nullopt;
}

inline void refine_crossing(const PlaneCurve& c, const DualPoint& a, const DualPoint& b, Rational lo, Rational hi,
                            int c_lo, int c_hi, const Rational& target, int depth, std::vector<Crossing>& out) {
  while (true) {
    const Rational width = hi - lo;
    if (width <= target && std::abs(c_hi - c_lo) == 2) {
      out.push_back({lo, hi, c_lo, c_hi, true});
      return;
    }
    if (depth >= kWalkMaxDepth) {
      out.push_back({lo, hi, c_lo, c_hi, false});
      return;
    }
    const Rational mid = (lo + hi) / 2;
    const auto m = count_near(c, a, b, mid, width / 4);
    ++depth;
    if (!m) {
      out.push_back({lo, hi, c_lo, c_hi, false});
      return;
    }
    const int cm = static_cast<int>(*m);
    if (cm == c_lo) {
      lo = mid;
    } else if (cm == c_hi) {
      hi = mid;
    } else {
      refine_crossing(c, a, b, lo, mid, c_lo, cm, target, depth, out);
      refine_crossing(c, a, b, mid, hi, cm, c_hi, target, depth, out);
      return;
    }
  }
}

}  // namespace detail

/// Samples counts on the segment a -> b and brackets every count change
/// down to width `target` (default 1e-6) in t.
inline WalkReport walk(const PlaneCurve& c, const DualPoint& a, const DualPoint& b, std::size_t steps,
                       const Rational& target = Rational(1, 1000000)) {
  if (steps < 2) throw InputError("walk needs at least 2 steps");
  if (a == b) throw InputError("walk endpoints coincide");
  WalkReport r{a, b, {}, {}};
  for (std::size_t k = 0; k <= steps; ++k) {
    const Rational t(static_cast<long>(k), static_cast<long>(steps));
    r.samples.emplace_back(t, count_dual_point(c, segment_point(a, b, t)));
  }
  if (!r.samples.front().second || !r.samples.back().second) throw InputError("walk endpoint lies on the dual curve");
  std::size_t last = 0;
  for (std::size_t k = 1; k <= steps; ++k) {
    if (!r.samples[k].second) continue;
    const int c0 = static_cast<int>(*r.samples[last].second);
    const int c1 = static_cast<int>(*r.samples[k].second);
    if (c0 != c1) detail::refine_crossing(c, a, b, r.samples[last].first, r.samples[k].first, c0, c1, target, 0, r.crossings);
    last = k;
  }
  return r;
}

/// |D(l)| / (sum |coefficients| * |l|^deg): scale-free size of a form at a point.
inline double scaled_value(const RationalPoly& d, const std::array<double, 3>& l) {
  const double n = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  const std::vector<Complex> x{l[0] / n, l[1] / n, l[2] / n};
  double scale = 0.0;
  for (const auto& [e, c] : d.terms()) scale += std::abs(c.get_d());
  return std::abs(d.to_complex().evaluate(x)) / scale;
}

inline Json to_json(const WalkReport& r) {
  Json j;
  auto point = [](const DualPoint& p) { return Json::array({to_string(p[0]), to_string(p[1]), to_string(p[2])}); };
  j["from"] = point(r.from);
  j["to"] = point(r.to);
  Json s = Json::array();
  for (const auto& [t, n] : r.samples) s.push_back({to_string(t), n ? Json(*n) : Json("B")});
  j["samples"] = std::move(s);
  Json cs = Json::array();
  for (const auto& c : r.crossings)
    cs.push_back({{"t", {to_string(c.lo), to_string(c.hi)}},
                  {"before", c.before},
                  {"after", c.after},
                  {"delta", c.delta()},
                  {"resolved", c.resolved}});
  j["crossings"] = std::move(cs);
  j["all_resolved_delta_two"] = r.all_resolved_delta_two();
  return j;
}

struct LineScanSummary {
  std::map<std::size_t, std::size_t> tally;
  std::size_t resamples = 0;
  std::size_t trials = 0;

  std::size_t max_count() const { return tally.empty() ? 0 : tally.rbegin()->first; }
  bool max_minimal() const { return max_count() <= 2; }
};

constexpr int kMaxLineResamples = 64;

/// Random real lines A + tB with Gaussian A, B (converted exactly to rationals).
inline LineScanSummary hypersurface_line_scan(const RationalPoly& g, std::size_t trials, std::uint64_t seed,
                                              std::size_t workers = 1) {
  detail::homogeneous_degree(g);
  const std::size_t n = g.num_vars();
  if (n < 2) throw InputError("line scan needs at least two variables");
  std::vector<std::optional<std::size_t>> counts(trials);
  std::vector<std::size_t> resamples(trials, 0);
  parallel_for(trials, workers, [&](std::size_t t) {
    for (int attempt = 0; attempt < kMaxLineResamples; ++attempt) {
      Rng rng(derive_seed(derive_seed(seed, t, 0x6c73), static_cast<std::uint64_t>(attempt)));
      std::vector<Rational> a, b;
      for (std::size_t k = 0; k < n; ++k) a.push_back(rational_from_double(rng.normal()));
      for (std::size_t k = 0; k < n; ++k) b.push_back(rational_from_double(rng.normal()));
      if (matrix_rank(DenseMatrix<Rational>{a, b}) < 2) {
        ++resamples[t];
        continue;
      }
      if (auto c = count_on_line(g, a, b)) {
        counts[t] = c;
        return;
      }
      ++resamples[t];
    }
  });
  LineScanSummary s;
  s.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    s.resamples += resamples[t];
    if (counts[t]) ++s.tally[*counts[t]];
  }
  return s;
}

inline Json to_json(const LineScanSummary& s) {
  Json j;
  j["trials"] = s.trials;
  j["resamples"] = s.resamples;
  Json t = Json::object();
  for (const auto& [k, v] : s.tally) t[std::to_string(k)] = v;
  j["count_tally"] = std::move(t);
  j["max_count"] = s.max_count();
  j["nmax_minimal"] = s.max_minimal();
  return j;
}

}  // namespace trisecant

#endif  // TRISECANT_DUAL_SCAN_HPP
