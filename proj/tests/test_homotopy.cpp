#include <gtest/gtest.h>

#include "trisecant/homotopy.hpp"
#include "trisecant/random.hpp"

using namespace trisecant;

namespace {

ComplexPoly term_poly(const VarBlocks& b, std::initializer_list<std::pair<Complex, Exponent>> terms) {
  ComplexPoly p(b);
  for (const auto& [c, e] : terms) p.add_term(e, c);
  return p;
}

TrackerConfig config(std::uint64_t seed) {
  TrackerConfig c;
  c.seed = seed;
  return c;
}

bool contains(const SolveReport& r, std::vector<Complex> x, double tol = 1e-8) {
  for (const auto& s : r.solutions) {
    double d = 0;
    for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(s.coordinates[k] - x[k]));
    if (d < tol) return true;
  }
  return false;
}

PolySystem<Complex> random_dense(Rng& rng, std::size_t n, unsigned deg, bool real) {
  const VarBlocks b({n});
  std::vector<ComplexPoly> eqs;
  for (std::size_t i = 0; i < n; ++i) {
    ComplexPoly f(b);
    // all monomials of degree <= deg
    std::vector<Exponent> monos{Exponent(n, 0u)};
    for (unsigned d = 1; d <= deg; ++d) {
      std::vector<Exponent> next;
      for (const auto& e : monos)
        for (std::size_t v = 0; v < n; ++v) {
          Exponent g = e;
          ++g[v];
          if (exponent_degree(g) == d && std::find(next.begin(), next.end(), g) == next.end()) next.push_back(g);
        }
      for (const auto& g : next) f.add_term(g, real ? Complex(rng.normal(), 0) : Complex(rng.normal(), rng.normal()));
      monos = std::move(next);
    }
    f.add_term(Exponent(n, 0u), Complex(rng.normal(), 0));
    eqs.push_back(std::move(f));
  }
  return {b, std::move(eqs)};
}

}  // namespace

TEST(Homotopy, UnivariateCubic) {
  const VarBlocks b({1});
  const PolySystem<Complex> sys(b, {term_poly(b, {{1.0, {3}}, {-2.0, {1}}})});
  const auto r = solve_square(sys, config(1));
  EXPECT_EQ(r.solutions.size(), 3u);
  EXPECT_EQ(r.real_count, 3u);
  EXPECT_TRUE(contains(r, {std::sqrt(2.0)}));
  EXPECT_TRUE(contains(r, {0.0}));
}

TEST(Homotopy, NoRealRoots) {
  const VarBlocks b({1});
  const PolySystem<Complex> sys(b, {term_poly(b, {{1.0, {4}}, {1.0, {0}}})});
  const auto r = solve_square(sys, config(2));
  EXPECT_EQ(r.solutions.size(), 4u);
  EXPECT_EQ(r.real_count, 0u);
}

TEST(Homotopy, CircleAndHyperbola) {
  // x^2 + y^2 = 5, xy = 2: (1,2), (2,1), (-1,-2), (-2,-1)
  const VarBlocks b({2});
  const PolySystem<Complex> sys(b, {term_poly(b, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-5.0, {0, 0}}}),
                                    term_poly(b, {{1.0, {1, 1}}, {-2.0, {0, 0}}})});
  const auto r = solve_square(sys, config(3));
  ASSERT_EQ(r.solutions.size(), 4u);
  EXPECT_EQ(r.real_count, 4u);
  for (auto [x, y] : std::vector<std::pair<double, double>>{{1, 2}, {2, 1}, {-1, -2}, {-2, -1}})
    EXPECT_TRUE(contains(r, {x, y}));
  for (const auto& s : r.solutions) EXPECT_LE(s.residual, 1e-12);
}

TEST(Homotopy, DenseRandomSystemsReachBezout) {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sys = random_dense(rng, 2, 3, false);
    const auto r = solve_square(sys, config(100 + static_cast<std::uint64_t>(rep)));
    EXPECT_EQ(r.solutions.size(), 9u) << "rep " << rep;
    const CompiledSystem cs(sys);
    for (const auto& s : r.solutions) EXPECT_LT(detail::residual(cs, detail::to_eigen(s.coordinates)), 1e-10);
  }
}

TEST(Homotopy, RealSystemsHaveConjugatePairs) {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sys = random_dense(rng, 2, 2, true);
    const auto r = solve_square(sys, config(200 + static_cast<std::uint64_t>(rep)));
    ASSERT_EQ(r.solutions.size(), 4u);
    EXPECT_EQ(r.real_count % 2, 0u);
    for (const auto& s : r.solutions) {
      if (s.is_real) continue;
      std::vector<Complex> c;
      for (auto z : s.coordinates) c.push_back(std::conj(z));
      EXPECT_TRUE(contains(r, c, 1e-6));
    }
  }
}

TEST(Homotopy, InconsistentSystemDivergesEverywhere) {
  const VarBlocks b({2});
  const PolySystem<Complex> sys(b, {term_poly(b, {{1.0, {1, 1}}, {-1.0, {0, 0}}}), term_poly(b, {{1.0, {1, 1}}, {-2.0, {0, 0}}})});
  const auto r = solve_square(sys, config(6));
  EXPECT_TRUE(r.solutions.empty());
  EXPECT_EQ(r.paths_diverged, r.paths_tracked);
}

TEST(Homotopy, DeterministicAndWorkerIndependent) {
  Rng rng(7);
  const auto sys = random_dense(rng, 3, 2, true);
  auto cfg = config(77);
  const auto a = solve_square(sys, cfg);
  cfg.workers = 4;
  const auto b = solve_square(sys, cfg);
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) EXPECT_EQ(a.solutions[i].coordinates, b.solutions[i].coordinates);
}

TEST(Homotopy, InputErrors) {
  const VarBlocks b({2});
  const auto x = ComplexPoly::variable(b, 0, 0);
  EXPECT_THROW(solve_square(PolySystem<Complex>(b, {x}), config(1)), InputError);
  EXPECT_THROW(solve_square(PolySystem<Complex>(b, {x, ComplexPoly::constant(b, 1.0)}), config(1)), InputError);
  TrackerConfig bad = config(1);
  bad.min_step = 1.0;
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Reality, ThresholdIsRelative) {
  const std::vector<Complex> big{{1e6, 1e-3}};
  const std::vector<Complex> small{{1e-3, 1e-6}};
  EXPECT_TRUE(is_real_point(big, 1e-8));
  EXPECT_FALSE(is_real_point(small, 1e-8));
}

TEST(Refine, NewtonPolishesAPerturbedRoot) {
  const VarBlocks b({1});
  const PolySystem<Complex> sys(b, {term_poly(b, {{1.0, {2}}, {-2.0, {0}}})});
  const std::vector<Complex> start{{1.4, 0.01}};
  const auto s = refine(start, sys, config(1));
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.coordinates[0].real(), std::sqrt(2.0), 1e-13);
  EXPECT_LE(s.residual, 1e-12);
}
