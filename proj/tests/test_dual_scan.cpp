#include <gtest/gtest.h>

#include <sstream>

#include "trisecant/dual_scan.hpp"

using namespace trisecant;

namespace {

std::array<double, 3> to_double(const DualPoint& p) { return {p[0].get_d(), p[1].get_d(), p[2].get_d()}; }

// Endpoints nudged off w = 0: every line with w = 0 passes through [0:0:1], where the
// edge quartic's z -> -z symmetry makes tangencies come in pairs.
const DualPoint kNearY0{0, 1, Rational(1, 50)};
const DualPoint kNearXeqY{1, -1, Rational(1, 30)};

}  // namespace

TEST(DualPoints, EdgeQuarticReferenceLines) {
  const auto e = edge_quartic();
  EXPECT_EQ(count_dual_point(e, {0, 1, 0}), std::optional<std::size_t>(0));   // y = 0
  EXPECT_EQ(count_dual_point(e, {1, -1, 0}), std::optional<std::size_t>(4));  // x = y
  EXPECT_THROW(count_dual_point(e, {0, 0, 0}), InputError);
}

TEST(DualPoints, ChartsAgree) {
  const auto e = edge_quartic();
  // [2, 3, 1] in chart w is [2/3, 1, 1/3] in chart v and [1, 3/2, 1/2] in chart u
  const auto w = count_dual_point(e, chart_point('w', 2, 3));
  EXPECT_EQ(w, count_dual_point(e, chart_point('v', Rational(2, 3), Rational(1, 3))));
  EXPECT_EQ(w, count_dual_point(e, chart_point('u', Rational(3, 2), Rational(1, 2))));
  EXPECT_THROW(chart_point('x', 0, 0), InputError);
}

TEST(Scan, EdgeQuarticCountsAreZeroTwoFour) {
  const auto g = scan(edge_quartic(), 'w', -3, 3, -3, 3, 30);
  std::set<int> seen;
  for (int c : g.cells)
    if (c >= 0) seen.insert(c);
  EXPECT_EQ(seen, (std::set<int>{0, 2, 4}));
}

TEST(Scan, FermatQuarticNeverExceedsTwo) {
  const auto g = scan(fermat_quartic(), 'w', -3, 3, -3, 3, 30);
  for (int c : g.cells) EXPECT_TRUE(c == -1 || c == 0 || c == 2) << c;
  EXPECT_GT(g.histogram()[2], 0u);
}

TEST(Scan, PureAndWorkerIndependent) {
  const auto a = scan(edge_quartic(), 'v', -2, 2, -1, 3, 16, 1);
  const auto b = scan(edge_quartic(), 'v', -2, 2, -1, 3, 16, 4);
  EXPECT_EQ(a, b);
}

TEST(Scan, InputChecks) {
  EXPECT_THROW(scan(edge_quartic(), 'w', -3, 3, -3, 3, 1), InputError);
  EXPECT_THROW(scan(edge_quartic(), 'w', 3, -3, -3, 3, 4), InputError);
}

TEST(Grid, CsvRoundTrip) {
  const auto g = scan(edge_quartic(), 'w', -1, 1, -1, 1, 2);
  std::stringstream s;
  write_grid_csv(g, s);
  EXPECT_EQ(read_grid_csv(s), g);
}

TEST(Grid, CsvBoundaryMarker) {
  ScanGrid g{'w', -1, 1, -1, 1, 2, "edge", {0, -1, 2, 4}};
  std::stringstream s;
  write_grid_csv(g, s);
  EXPECT_NE(s.str().find(",B\n"), std::string::npos);
  EXPECT_EQ(read_grid_csv(s), g);
}

TEST(Grid, PpmHeaderAndSize) {
  const auto g = scan(fermat_quartic(), 'w', -2, 2, -2, 2, 5);
  std::ostringstream s;
  write_grid_ppm(g, s);
  const std::string out = s.str();
  EXPECT_EQ(out.rfind("P6\n5 5\n255\n", 0), 0u);
  EXPECT_EQ(out.size(), std::string("P6\n5 5\n255\n").size() + 5 * 5 * 3);
  EXPECT_EQ(count_color(-1), (std::array<unsigned char, 3>{0, 0, 0}));
}

TEST(Walk, CrossingsChangeTheCountByTwo) {
  const auto e = edge_quartic();
  const auto w = walk(e, kNearY0, kNearXeqY, 64);
  ASSERT_EQ(count_dual_point(e, kNearY0), std::optional<std::size_t>(0));
  ASSERT_EQ(count_dual_point(e, kNearXeqY), std::optional<std::size_t>(4));
  int net = 0;
  for (const auto& c : w.crossings) {
    EXPECT_TRUE(c.resolved);
    EXPECT_EQ(std::abs(c.delta()), 2);
    EXPECT_LE(c.hi - c.lo, Rational(1, 1000000));
    net += c.delta();
  }
  EXPECT_GE(w.crossings.size(), 2u);
  EXPECT_EQ(net, 4);
}

TEST(Walk, SymmetricSegmentMeetsBitangents) {
  // dual {y=0} to dual {x=y} stays on w = 0; its count jumps are double tangencies
  const auto w = walk(edge_quartic(), {0, 1, 0}, {1, -1, 0}, 64);
  int net = 0;
  for (const auto& c : w.crossings) {
    net += c.delta();
    if (std::abs(c.delta()) != 2) EXPECT_FALSE(c.resolved);
  }
  EXPECT_EQ(net, 4);
  EXPECT_TRUE(w.all_resolved_delta_two());
}

TEST(Walk, FermatCrossingsAreTwo) {
  const auto w = walk(fermat_quartic(), {Rational(1, 3), Rational(1, 7), 1}, {Rational(5, 2), Rational(-3, 2), 1}, 64);
  EXPECT_FALSE(w.crossings.empty());
  for (const auto& c : w.crossings) EXPECT_EQ(std::abs(c.delta()), 2);
}

TEST(Walk, ConstantInsideARegion) {
  const auto w = walk(edge_quartic(), chart_point('w', Rational(1, 10), 0), chart_point('w', Rational(1, 5), 0), 16);
  EXPECT_TRUE(w.crossings.empty());
}

TEST(Walk, EndpointOnBoundaryIsInputError) {
  // x = z meets x^4 + y^4 - z^4 only where y^4 = 0
  EXPECT_THROW(walk(fermat_quartic(), {1, 0, -1}, {0, 1, 3}, 8), InputError);
  EXPECT_THROW(walk(fermat_quartic(), {0, 1, 3}, {0, 1, 3}, 8), InputError);
}

TEST(DualCurve, VanishesAtWalkCrossingsOnly) {
  const auto e = edge_quartic();
  const auto d = edge_dual_curve();
  const auto w = walk(e, kNearY0, kNearXeqY, 64, Rational("1/1000000000000"));
  ASSERT_FALSE(w.crossings.empty());
  for (const auto& c : w.crossings)
    EXPECT_LE(scaled_value(d, to_double(segment_point(kNearY0, kNearXeqY, (c.lo + c.hi) / 2))), 1e-6);
  // nonzero at interior cell centers of a coarse scan
  const auto g = scan(e, 'w', -3, 3, -3, 3, 12);
  for (std::size_t j = 0; j < 12; ++j)
    for (std::size_t i = 0; i < 12; ++i) {
      if (g.at(i, j) < 0) continue;
      const auto p = chart_point('w', g.cell_u(i), g.cell_v(j));
      std::vector<Rational> x{p[0], p[1], p[2]};
      EXPECT_NE(d.evaluate_exact(std::span<const Rational>(x)), 0);
    }
}

TEST(DualCurve, IsHomogeneousOfDegreeTwelveWithSymmetry) {
  const auto d = edge_dual_curve();
  EXPECT_EQ(detail::homogeneous_degree(d), 12u);
  EXPECT_EQ(d.terms().size(), 28u);
  EXPECT_EQ(d.coefficient({8, 2, 2}), d.coefficient({2, 8, 2}));
}

TEST(LineScan, EvenHypersurfacesAreMaxMinimal) {
  for (std::size_t k : {2u, 3u}) {
    const auto s = hypersurface_line_scan(even_power_form(k), 200, 4);
    EXPECT_TRUE(s.max_minimal());
    EXPECT_GT(s.tally.count(2), 0u);
    for (const auto& [c, n] : s.tally) EXPECT_TRUE(c == 0 || c == 2);
  }
}

TEST(LineScan, EdgeQuarticReachesFour) {
  const auto s = hypersurface_line_scan(edge_quartic().form, 300, 5);
  EXPECT_EQ(s.max_count(), 4u);
  EXPECT_FALSE(s.max_minimal());
}

TEST(LineScan, WorkerIndependent) {
  const auto a = hypersurface_line_scan(even_power_form(3), 50, 9, 1);
  const auto b = hypersurface_line_scan(even_power_form(3), 50, 9, 3);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}
