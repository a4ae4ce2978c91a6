#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"

using namespace cangrow;
using namespace testing_helpers;

namespace {

PrimeField k(32003);

std::vector<std::string> leads(const PolyRing<PrimeField>& P, const GroebnerBasis<PrimeField>& gb) {
  std::vector<std::string> out;
  for (const auto& m : gb.leading_monomials()) out.push_back(P.to_string(m));
  std::sort(out.begin(), out.end());
  return out;
}

// Counts monomials not divisible by any generator, by brute force over a box.
std::size_t count_outside(const std::vector<Monomial>& gens, std::size_t nvars, unsigned box) {
  std::size_t count = 0;
  std::vector<unsigned> e(nvars, 0);
  for (;;) {
    Monomial m;
    for (std::size_t i = 0; i < nvars; ++i) m.exp[i] = static_cast<std::uint16_t>(e[i]);
    bool inside = false;
    for (const auto& g : gens) inside = inside || g.divides(m);
    if (!inside) ++count;
    std::size_t i = 0;
    while (i < nvars && ++e[i] > box) e[i++] = 0;
    if (i == nvars) break;
  }
  return count;
}

}  // namespace

TEST(Buchberger, MonomialIdealIsItsOwnBasis) {
  PolyRing<PrimeField> P(k, {"x", "y", "z"});
  auto gb = buchberger(P, polys(P, {"x^2", "x*y", "y^2", "z^2"}));
  EXPECT_EQ(gb.generators.size(), 4u);
  EXPECT_EQ(leads(P, gb), (std::vector<std::string>{"x*y", "x^2", "y^2", "z^2"}));
}

TEST(Buchberger, BinomialRingOfEmbeddingDimensionThree) {
  PolyRing<PrimeField> P(k, {"x1", "x2", "x3"});
  auto gb = buchberger(P, polys(P, {"x1^2 - x2^2", "x2^2 - x3^2", "x1*x2", "x1*x3", "x2*x3"}));
  auto l = leads(P, gb);
  for (const char* m : {"x1^2", "x2^2", "x1*x2", "x1*x3", "x2*x3"})
    EXPECT_NE(std::find(l.begin(), l.end(), m), l.end()) << m;
  auto std_mons = standard_monomials(gb, 3);
  std::vector<std::string> names;
  for (const auto& m : std_mons) names.push_back(P.to_string(m));
  EXPECT_EQ(names, (std::vector<std::string>{"1", "x1", "x2", "x3", "x3^2"}));
}

TEST(Buchberger, UnitIdeal) {
  PolyRing<PrimeField> P(k, {"x"});
  EXPECT_THROW(buchberger(P, polys(P, {"x - 1", "x^2"})), UnitInIdeal);
  EXPECT_THROW(buchberger(P, polys(P, {"1"})), UnitInIdeal);
}

TEST(NormalForm, Examples) {
  PolyRing<PrimeField> P(k, {"x", "y", "z"});
  auto gb = buchberger(P, polys(P, {"x^2", "x*y", "y^2", "z^2"}));
  EXPECT_TRUE(normal_form(P, poly(P, "x^2*y"), gb).is_zero());
  EXPECT_EQ(normal_form(P, poly(P, "1"), gb), poly(P, "1"));

  PolyRing<PrimeField> Q(k, {"x1", "x2", "x3"});
  auto gb3 = buchberger(Q, polys(Q, {"x1^2 - x2^2", "x2^2 - x3^2", "x1*x2", "x1*x3", "x2*x3"}));
  EXPECT_EQ(normal_form(Q, poly(Q, "x1^2"), gb3), poly(Q, "x3^2"));
}

TEST(StandardMonomials, Examples) {
  PolyRing<PrimeField> P(k, {"x", "y", "z"});
  auto gb = buchberger(P, polys(P, {"x^2", "x*y", "y^2", "z^2"}));
  auto s = standard_monomials(gb, 3);
  std::vector<std::string> names;
  for (const auto& m : s) names.push_back(P.to_string(m));
  EXPECT_EQ(names, (std::vector<std::string>{"1", "x", "y", "z", "x*z", "y*z"}));

  PolyRing<PrimeField> P2(k, {"x", "y"});
  EXPECT_EQ(standard_monomials(buchberger(P2, polys(P2, {"x^2", "x*y", "y^2"})), 2).size(), 3u);

  auto gbxyz = buchberger(P, polys(P, {"x*y", "x*z", "y*z"}));
  EXPECT_THROW(standard_monomials(gbxyz, 3), NotArtinian);
}

class RandomIdeals : public ::testing::TestWithParam<int> {};

TEST_P(RandomIdeals, NormalFormProperties) {
  std::mt19937_64 rng(GetParam());
  PolyRing<PrimeField> P(k, {"x", "y", "z"});
  // Random binomial perturbations of pure powers stay zero-dimensional.
  std::uniform_int_distribution<int> c(-4, 4);
  std::vector<Polynomial<PrimeField>> gens;
  const char* v[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    std::string g = std::string(v[i]) + "^3";
    int a = c(rng);
    if (a) g += (a > 0 ? " + " : " - ") + std::to_string(std::abs(a)) + "*" + v[(i + 1) % 3] + "*" + v[(i + 2) % 3];
    gens.push_back(poly(P, g));
  }
  gens.push_back(poly(P, std::string(v[rng() % 3]) + "*" + v[rng() % 3] + "^2"));
  auto gb = buchberger(P, gens);
  auto mons = standard_monomials(gb, 3);

  std::vector<std::string> samples = {"x^2*y + 3*z", "y^4 - x*z^2", "x*y*z + 5", "z^5 - 2*x^3*y"};
  for (const auto& a : samples)
    for (const auto& b : samples) {
      auto pa = poly(P, a), pb = poly(P, b);
      auto na = normal_form(P, pa, gb), nb = normal_form(P, pb, gb);
      EXPECT_EQ(normal_form(P, na, gb), na);
      EXPECT_EQ(normal_form(P, P.mul(pa, pb), gb), normal_form(P, P.mul(na, nb), gb));
      EXPECT_EQ(normal_form(P, P.add(pa, pb), gb), P.add(na, nb));
      for (const auto& t : na.terms) EXPECT_NE(std::find(mons.begin(), mons.end(), t.mono), mons.end());
    }

  // Generator order does not change the reduced basis.
  std::vector<Polynomial<PrimeField>> shuffled = gens;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto gb2 = buchberger(P, shuffled);
  EXPECT_EQ(gb2.generators.size(), gb.generators.size());
  for (std::size_t i = 0; i < gb.generators.size(); ++i) EXPECT_EQ(gb2.generators[i], gb.generators[i]);
}

TEST_P(RandomIdeals, MonomialQuotientDimensionMatchesDivisibilityCount) {
  std::mt19937_64 rng(100 + GetParam());
  auto s = sample_monomial_quotient(rng, 3, 4);
  PolyRing<PrimeField> P(k, default_variable_names(s.nvars));
  std::vector<Polynomial<PrimeField>> gens;
  for (const auto& m : s.generators) gens.push_back(P.monomial(m, k.one()));
  auto gb = buchberger(P, gens);
  EXPECT_EQ(standard_monomials(gb, s.nvars).size(), count_outside(s.generators, s.nvars, 6));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomIdeals, ::testing::Range(1, 21));

TEST(PolyRingTest, CapsVariableCount) {
  std::vector<std::string> many;
  for (int i = 0; i < 13; ++i) many.push_back("v" + std::to_string(i));
  EXPECT_THROW(PolyRing<PrimeField>(k, many), SizeCap);
}
