#include <gtest/gtest.h>

#include "trisecant/variety.hpp"

using namespace trisecant;

namespace {

// Independent oracle: the degree is the coefficient of prod h_i^{m_i} in (sum d_i h_i)^M,
// computed by expanding the power with exact integers.
mpz_class degree_by_expansion(const VarietySpec& s) {
  const std::size_t k = s.factors();
  std::map<std::vector<unsigned>, mpz_class> poly{{std::vector<unsigned>(k, 0u), 1}};
  for (unsigned step = 0; step < s.dim(); ++step) {
    std::map<std::vector<unsigned>, mpz_class> next;
    for (const auto& [e, c] : poly)
      for (std::size_t i = 0; i < k; ++i) {
        auto g = e;
        ++g[i];
        next[g] += c * s.d[i];
      }
    poly = std::move(next);
  }
  return poly[s.m];
}

TrackerConfig config(std::uint64_t seed) {
  TrackerConfig c;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(VarietySpec, DegreeMatchesExpansionOracle) {
  for (const auto& s : {VarietySpec({1, 3}, {1, 1}), VarietySpec({2, 2}, {1, 1}), VarietySpec({4}, {1}),
                        VarietySpec({1}, {4}), VarietySpec({2}, {2}), VarietySpec({1, 1, 1}, {1, 1, 1}),
                        VarietySpec({2, 1, 3}, {2, 3, 1}), VarietySpec({3, 3}, {2, 2})})
    EXPECT_EQ(s.degree_exact(), degree_by_expansion(s));
}

TEST(VarietySpec, SegreOneNHasDegreeNPlusOne) {
  for (unsigned n = 1; n <= 6; ++n) EXPECT_EQ(VarietySpec({1, n}, {1, 1}).degree(), n + 1);
}

TEST(VarietySpec, AmbientDimensionCountsMonomials) {
  for (const auto& s : {VarietySpec({1, 2}, {1, 1}), VarietySpec({2}, {2}), VarietySpec({1, 1, 1}, {1, 1, 1}),
                        VarietySpec({2, 1}, {3, 2})})
    EXPECT_EQ(ambient_monomials(s).size(), s.ambient_dim());
  EXPECT_EQ(VarietySpec({2}, {2}).ambient_dim(), 6u);
  EXPECT_EQ(VarietySpec({1, 1, 1}, {1, 1, 1}).ambient_dim(), 8u);
}

TEST(VarietySpec, RejectsBadInput) {
  EXPECT_THROW(VarietySpec({1, 2}, {1}), InputError);
  EXPECT_THROW(VarietySpec({0}, {1}), InputError);
  EXPECT_THROW(VarietySpec({}, {}), InputError);
  EXPECT_THROW(spec_from_json(nlohmann::ordered_json::parse(R"({"m":[1,-2],"d":[1,1]})")), std::exception);
  const VarietySpec s({1, 3}, {2, 1});
  EXPECT_EQ(spec_from_json(to_json(s)), s);
}

TEST(Embedding, VeroneseOfALine) {
  // (a, b) -> (a^2, ab, b^2) in graded-lex order
  const VarietySpec s({1}, {2});
  ParamPoint p{{{2.0, 3.0}}};
  const auto v = embed(s, p);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], Complex(4.0));
  EXPECT_EQ(v[1], Complex(6.0));
  EXPECT_EQ(v[2], Complex(9.0));
}

TEST(Embedding, SegreIsRankOne) {
  const VarietySpec s({1, 2}, {1, 1});
  const auto p = sample_real_point(s, 5);
  const auto v = embed(s, p);
  Eigen::MatrixXd m(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v[static_cast<std::size_t>(i * 3 + j)].real();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  EXPECT_LT(svd.singularValues()[1], 1e-14 * svd.singularValues()[0]);
}

TEST(ProjectiveDistance, InvariantUnderRescalingPerBlock) {
  const VarietySpec s({1, 2}, {1, 1});
  const auto p = sample_real_point(s, 9);
  ParamPoint q = p;
  for (auto& z : q.blocks[0]) z *= Complex(0.0, -3.0);
  for (auto& z : q.blocks[1]) z *= Complex(-2.0, 1.0);
  EXPECT_LT(projective_distance(p, q), 1e-14);
  EXPECT_GT(projective_distance(p, sample_real_point(s, 10)), 1e-3);
}

TEST(Sections, SpanContainsItsPoints) {
  const VarietySpec s({1, 2}, {1, 1});
  std::vector<ParamPoint> pts{sample_real_point(s, 1), sample_real_point(s, 2)};
  const auto sec = span_section(s, pts);
  EXPECT_EQ(sec.codim(), 4u);
  for (const auto& p : pts) {
    const auto v = embed(s, p);
    for (Eigen::Index r = 0; r < sec.forms.rows(); ++r) {
      double acc = 0;
      for (Eigen::Index c = 0; c < sec.forms.cols(); ++c) acc += sec.forms(r, c) * v[static_cast<std::size_t>(c)].real();
      EXPECT_NEAR(acc, 0.0, 1e-12);
    }
  }
  EXPECT_THROW(span_section(s, {pts[0], pts[0]}), DegenerateSpan);
}

TEST(Sections, PullbackVanishesOnSpanPoints) {
  const VarietySpec s({2}, {2});
  std::vector<ParamPoint> pts{sample_real_point(s, 3), sample_real_point(s, 4)};
  const auto sys = pullback(span_section(s, pts));
  for (const auto& p : pts) EXPECT_LT(homogeneous_residual(sys, p), 1e-12);
}

TEST(Charts, LiftInvertsTheChart) {
  const VarBlocks b({2, 3});
  const auto ch = ChartRecord::random(b, 17);
  const std::vector<Complex> u{{0.3, 0.1}, {-0.2, 0.0}, {1.5, -0.7}};
  const auto p = ch.lift(u);
  // recover u_i = U_i^T x_i since c_i is orthogonal to U_i and x = c + U u
  std::size_t at = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (Eigen::Index c = 0; c < ch.basis[i].cols(); ++c) {
      Complex acc = 0;
      for (Eigen::Index r = 0; r < ch.basis[i].rows(); ++r) acc += ch.basis[i](r, c) * p.blocks[i][static_cast<std::size_t>(r)];
      EXPECT_LT(std::abs(acc - u[at++]), 1e-14);
    }
  }
}

TEST(Intersect, RandomSectionsHitEveryPoint) {
  for (const auto& s : {VarietySpec({1, 1}, {1, 1}), VarietySpec({1}, {3}), VarietySpec({2}, {2}),
                        VarietySpec({1, 2}, {1, 1})}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto r = intersect(random_complementary_section(s, seed), config(seed));
      EXPECT_EQ(r.count, s.degree());
      EXPECT_TRUE(r.transversal);
      EXPECT_EQ(r.real_count % 2, s.degree() % 2);
      for (const auto& p : r.points) EXPECT_LT(p.residual, 1e-10);
    }
  }
}

TEST(Intersect, OverdeterminedSpanRecoversItsPoints) {
  const VarietySpec s({1, 2}, {1, 1});
  std::vector<ParamPoint> pts{sample_real_point(s, 21), sample_real_point(s, 22)};
  const auto r = intersect(span_section(s, pts), config(4));
  EXPECT_TRUE(r.squared_up);
  ASSERT_EQ(r.count, 2u);
  for (const auto& p : pts) {
    double best = 1;
    for (const auto& q : r.points) best = std::min(best, projective_distance(p, q.point));
    EXPECT_LT(best, 1e-8);
  }
}

TEST(Intersect, TooFewFormsIsAnInputError) {
  const VarietySpec s({1, 2}, {1, 1});
  Eigen::MatrixXd f = Eigen::MatrixXd::Random(2, 6);
  EXPECT_THROW(intersect(section_from_forms(s, f), config(1)), InputError);
}
