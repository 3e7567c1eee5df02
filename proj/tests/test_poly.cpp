#include <gtest/gtest.h>

#include "trisecant/linalg.hpp"
#include "trisecant/poly.hpp"
#include "trisecant/poly_json.hpp"
#include "trisecant/random.hpp"

using namespace trisecant;

namespace {

RationalPoly random_poly(Rng& rng, const VarBlocks& b, unsigned deg, int terms) {
  RationalPoly p(b);
  for (int k = 0; k < terms; ++k) {
    Exponent e(b.total(), 0u);
    for (unsigned r = 0; r < deg; ++r) e[static_cast<std::size_t>(rng.integer(0, static_cast<long>(b.total()) - 1))]++;
    p.add_term(e, rng.small_rational(20));
  }
  return p;
}

std::vector<Rational> random_point(Rng& rng, std::size_t n) {
  std::vector<Rational> x;
  for (std::size_t k = 0; k < n; ++k) x.push_back(rng.small_rational(9));
  return x;
}

}  // namespace

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
}

TEST(Rational, FromDoubleIsExact) {
  for (double x : {0.1, -3.75, 1e-9, 123456.789}) EXPECT_EQ(rational_from_double(x).get_d(), x);
}

TEST(Seeds, DerivedSeedsAreStableAndDistinct) {
  EXPECT_EQ(derive_seed(5, 3, 7), derive_seed(5, 3, 7));
  EXPECT_NE(derive_seed(5, 3, 7), derive_seed(5, 4, 7));
  EXPECT_NE(derive_seed(5, 3, 7), derive_seed(5, 3, 8));
  Rng a(11), b(11);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.normal(), b.normal());
}

TEST(MultiPoly, RingLawsAtRandomPoints) {
  Rng rng(1);
  const VarBlocks b({2, 3});
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_poly(rng, b, 2, 4);
    const auto g = random_poly(rng, b, 3, 3);
    const auto h = random_poly(rng, b, 1, 3);
    const auto x = random_point(rng, b.total());
    auto ev = [&](const RationalPoly& p) { return p.evaluate_exact(std::span<const Rational>(x)); };
    EXPECT_EQ(ev(f * (g + h)), ev(f) * (ev(g) + ev(h)));
    EXPECT_EQ(ev(f * g), ev(g * f));
    EXPECT_EQ(ev(f.pow(3)), ev(f) * ev(f) * ev(f));
    EXPECT_TRUE((f - f).is_zero());
  }
}

TEST(MultiPoly, BinomialExpansion) {
  const VarBlocks b({2});
  const auto x = RationalPoly::variable(b, 0, 0);
  const auto y = RationalPoly::variable(b, 0, 1);
  const auto p = (x + y).pow(5);
  EXPECT_EQ(p.terms().size(), 6u);
  EXPECT_EQ(p.coefficient({2, 3}), Rational(10));
  EXPECT_EQ(p.coefficient({4, 1}), Rational(5));
}

TEST(MultiPoly, MultidegreeOfProducts) {
  const VarBlocks b({2, 3});
  const auto f = product_of_linear_forms<Rational>(b, 1, {{1, 2, 3}, {0, 1, -1}});
  ASSERT_TRUE(f.multidegree());
  EXPECT_EQ(*f.multidegree(), (std::vector<unsigned>{0, 2}));
  EXPECT_EQ(f.total_degree(), 2u);
  EXPECT_THROW(product_of_linear_forms<Rational>(b, 1, {{1, 2}}), InputError);
}

TEST(MultiPoly, DerivativeMatchesPowerRule) {
  const VarBlocks b({2});
  const auto x = RationalPoly::variable(b, 0, 0);
  const auto y = RationalPoly::variable(b, 0, 1);
  const auto p = x.pow(3) * y + Rational(2) * y.pow(2);
  const auto dx = p.derivative(0);
  EXPECT_EQ(dx.coefficient({2, 1}), Rational(3));
  EXPECT_EQ(dx.terms().size(), 1u);
}

TEST(MultiPoly, ExponentLengthChecked) {
  RationalPoly p(VarBlocks({2}));
  EXPECT_THROW(p.add_term({1, 0, 0}, Rational(1)), InputError);
}

TEST(MultiPoly, ComplexEvaluationAgreesWithExact) {
  Rng rng(3);
  const VarBlocks b({3});
  const auto f = random_poly(rng, b, 3, 6);
  const auto x = random_point(rng, 3);
  std::vector<Complex> xc;
  for (const auto& v : x) xc.emplace_back(v.get_d(), 0.0);
  EXPECT_NEAR(f.to_complex().evaluate(xc).real(), f.evaluate_exact(std::span<const Rational>(x)).get_d(), 1e-9);
}

TEST(PolyJson, RoundTrip) {
  Rng rng(4);
  const VarBlocks b({2, 2});
  auto f = random_poly(rng, b, 2, 5);
  const Json j = to_json(f);
  EXPECT_EQ(poly_from_json<Rational>(j), f);
  PolySystem<Rational> sys(b, {f, random_poly(rng, b, 2, 3)});
  const auto back = system_from_json<Rational>(to_json(sys));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1], sys[1]);
}

TEST(PolyJson, RejectsMalformed) {
  EXPECT_THROW(poly_from_json<Rational>(Json::parse(R"({"terms":[]})")), InputError);
  EXPECT_THROW(poly_from_json<Rational>(Json::parse(R"({"blocks":[2],"terms":[{"exp":[1],"re":"1"}]})")), InputError);
  EXPECT_THROW(poly_from_json<Rational>(Json::parse(R"({"blocks":[2],"terms":[{"exp":[1,0],"re":"1","im":"2"}]})")),
               InputError);
}

TEST(Linalg, RationalNullspaceIsExact) {
  const DenseMatrix<Rational> a{{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 1, 0}};
  EXPECT_EQ(matrix_rank(a), 2u);
  const auto ns = nullspace(a, 4);
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& v : ns)
    for (const auto& row : a) {
      Rational s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += row[k] * v[k];
      EXPECT_EQ(s, 0);
    }
}

TEST(AffineSubstitution, PullsBackThroughCharts) {
  // f = x0*y1 - x1*y0 on P1 x P1; chart x = (1, s), y = (1, t) gives t - s
  const VarBlocks b({2, 2});
  RationalPoly f(b);
  f.add_term({1, 0, 0, 1}, Rational(1));
  f.add_term({0, 1, 1, 0}, Rational(-1));
  BlockChart<Rational> cx;
  cx.matrix = {{Rational(0)}, {Rational(1)}};
  cx.offset = {Rational(1), Rational(0)};
  const BlockChart<Rational> cy = cx;
  const auto g = substitute_affine(f, std::vector<BlockChart<Rational>>{cx, cy});
  EXPECT_EQ(g.num_vars(), 2u);
  EXPECT_EQ(g.coefficient({0, 1}), Rational(1));
  EXPECT_EQ(g.coefficient({1, 0}), Rational(-1));
}
