#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace cangrow;
using namespace testing_helpers;

namespace {

using Mod = PresentedModule<PrimeField>;
using Seq = std::vector<std::size_t>;

Seq betti(const Mod& M, std::size_t steps) {
  Resolution<PrimeField> res(M);
  res.extend(steps);
  return res.betti();
}

Seq zeros(std::size_t n) { return Seq(n, 0); }

}  // namespace

TEST(Canonical, Examples) {
  auto B = ring(b_ring(3));
  auto wB = Mod::canonical(B);
  EXPECT_EQ(wB.num_generators(), 1u);
  EXPECT_EQ(wB.num_relations(), 0u);

  auto w26 = Mod::canonical(ring(kEx26));
  EXPECT_EQ(w26.num_generators(), 2u);

  auto wA = Mod::canonical(ring(kA));
  EXPECT_EQ(wA.num_generators(), 2u);
  EXPECT_EQ(wA.length(), 3u);
}

TEST(Presentation, Examples) {
  auto B = ring(b_ring(4));
  auto kB = Mod::residue_field(B);
  EXPECT_EQ(kB.num_generators(), 1u);
  EXPECT_EQ(kB.num_relations(), 4u);

  auto R = ring(kEx26);
  auto M = module(R, "ideal(z)");
  EXPECT_EQ(M.num_generators(), 1u);
  EXPECT_EQ(M.m_length(), 2u);

  auto R27 = ring(kEx27);
  auto Mx = module(R27, "cyclic(x)");
  EXPECT_EQ(Mx.num_generators(), 1u);
  EXPECT_EQ(Mx.length(), 3u);

  EXPECT_THROW(module(R, "ideal(0)"), ZeroModule);
  EXPECT_THROW(module(R, "cyclic(1)"), ZeroModule);
}

TEST(Resolution, Examples) {
  auto R = ring(kEx26);
  EXPECT_EQ(betti(Mod::canonical(R), 10), (Seq{2, 3, 6, 12, 24, 48, 96, 192, 384, 768, 1536}));

  auto B = ring(b_ring(3));
  EXPECT_EQ(betti(Mod::residue_field(B), 6), (Seq{1, 3, 8, 21, 55, 144, 377}));

  Resolution<PrimeField> res(Mod::canonical(B));
  res.extend(5);
  EXPECT_TRUE(res.terminated());
  EXPECT_EQ(res.betti(), (Seq{1}));
}

TEST(Resolution, KOverBMatchesInverseSeries) {
  for (int e = 3; e <= 5; ++e) {
    auto B = ring(b_ring(e));
    auto expect = inverse_series(e, 5);
    EXPECT_EQ(betti(Mod::residue_field(B), 5), expect) << e;
  }
}

TEST(Resolution, BudgetExhaustionThrows) {
  auto B = ring(b_ring(4));
  Resolution<PrimeField> res(Mod::residue_field(B));
  EXPECT_THROW(res.extend(8, 1000), SizeCap);
}

TEST(Tor, Examples) {
  auto R = ring(kEx27);
  auto M = module(R, "cyclic(x)"), N = module(R, "cyclic(y)");
  auto t = tor_dims(M, N, 6);
  EXPECT_EQ(t[0], 1u);
  EXPECT_EQ(Seq(t.begin() + 1, t.end()), zeros(6));

  auto B = ring(b_ring(3));
  auto k = Mod::residue_field(B);
  EXPECT_EQ(tor_dims(k, k, 5), betti(k, 5));
}

TEST(Ext, Examples) {
  auto R = ring(kEx26);
  auto M = module(R, "ideal(z)");
  auto e = ext_dims(M, Mod::free(R, 1), 6);
  EXPECT_EQ(Seq(e.begin() + 1, e.end()), zeros(6));

  EXPECT_EQ(ext_dims(Mod::free(R, 1), M, 0)[0], M.length());

  auto B = ring(b_ring(3));
  auto eB = ext_dims(Mod::residue_field(B), Mod::free(B, 1), 6);
  EXPECT_EQ(eB[0], 1u);
  EXPECT_EQ(Seq(eB.begin() + 1, eB.end()), zeros(6));
}

TEST(MatlisDual, Examples) {
  auto R = ring(kA);
  auto k = Mod::residue_field(R);
  auto kd = k.matlis_dual();
  EXPECT_EQ(kd.length(), 1u);
  EXPECT_EQ(kd.num_generators(), 1u);

  auto Rd = Mod::free(R, 1).matlis_dual();
  auto w = Mod::canonical(R);
  EXPECT_EQ(Rd.length(), w.length());
  EXPECT_EQ(Rd.num_generators(), w.num_generators());

  auto R26 = ring(kEx26);
  auto M = module(R26, "cyclic(x)");
  auto Mdd = M.matlis_dual().matlis_dual();
  EXPECT_EQ(Mdd.length(), M.length());
  EXPECT_EQ(betti(Mdd, 5), betti(M, 5));
}

TEST(Hom, Examples) {
  auto R = ring(kEx26);
  auto N = module(R, "ideal(x, z)");
  EXPECT_EQ(Mod::hom(Mod::free(R, 1), N).length(), N.length());
  EXPECT_EQ(Mod::hom(Mod::residue_field(R), Mod::free(R, 1)).length(), R->socle().size());

  auto A = ring(kA);
  auto w = Mod::canonical(A);
  EXPECT_EQ(Mod::hom(w, w).length(), A->dim());
}

TEST(Linearity, Examples) {
  auto A = ring(kA);
  Resolution<PrimeField> kA_res(Mod::residue_field(A));
  kA_res.extend(5);
  EXPECT_TRUE(is_linear_resolution(kA_res));

  // S = k[x1..x4]/(x_i x_j, x_i x_l) with i=1, j=2, l=3, plus squares to make it Artinian.
  auto S = ring("ring { field: F32003; vars: x1,x2,x3,x4; ideal: x1*x2, x1*x3, x1^2, x2^2, x3^2, x4^2 }");
  Resolution<PrimeField> sres(module(S, "cyclic(x1)"));
  sres.extend(5);
  EXPECT_TRUE(is_linear_resolution(sres));

  Resolution<PrimeField> free_res(Mod::free(A, 2));
  EXPECT_TRUE(is_linear_resolution(free_res));
  EXPECT_EQ(linear_to_step(free_res), 0u);

  // k[x]/(x^3): the resolution of R/(x) is x^2, x, x^2, ... so not linear at step 2.
  auto C = ring("ring { field: F32003; vars: x; ideal: x^3 }");
  Resolution<PrimeField> cres(module(C, "cyclic(x)"));
  cres.extend(4);
  EXPECT_FALSE(is_linear_resolution(cres));
  EXPECT_EQ(linear_to_step(cres), 1u);
}

TEST(GdimCertificate, Examples) {
  auto A = ring(kA);
  EXPECT_TRUE(gdim_zero_certificate(Mod::free(A, 1), 3).passes());
  auto B = ring(b_ring(3));
  EXPECT_TRUE(gdim_zero_certificate(Mod::canonical(B), 3).passes());
  EXPECT_FALSE(gdim_zero_certificate(Mod::canonical(A), 3).passes());
  EXPECT_THROW(gdim_zero_certificate(Mod::canonical(A), 0), InvalidArgument);
}

class RandomModules : public ::testing::TestWithParam<int> {};

TEST_P(RandomModules, HomologicalInvariants) {
  std::mt19937_64 rng(GetParam());
  PrimeField k(32003);
  auto R = detail::probe_ring(k, rng);
  auto M = detail::probe_module(R, rng);
  auto N = detail::probe_module(R, rng);
  const std::size_t depth = 3;

  Resolution<PrimeField> rM(M);
  rM.extend(depth + 1);
  auto check = verify_resolution(rM);
  EXPECT_TRUE(check.ok()) << "step " << check.failed_step;
  if (rM.terminated()) EXPECT_EQ(rM.length(), 0u) << "finite resolution must be free";

  // Betti numbers three ways.
  auto kmod = Mod::residue_field(R);
  auto tk = tor_dims(rM, kmod, depth);
  auto ek = ext_dims(rM, kmod, depth);
  for (std::size_t i = 0; i <= depth; ++i) {
    EXPECT_EQ(tk[i], rM.betti_at(i));
    EXPECT_EQ(ek[i], rM.betti_at(i));
  }

  // Balance and Matlis duality.
  auto tMN = tor_dims(M, N, depth);
  EXPECT_EQ(tMN, tor_dims(N, M, depth));
  EXPECT_EQ(ext_dims(M, N.matlis_dual(), depth), tMN);

  // Dual length and generators.
  auto Md = M.matlis_dual();
  EXPECT_EQ(Md.length(), M.length());
  EXPECT_EQ(Md.num_generators(), Mod::hom(kmod, M).length());

  // Ext^0 = Hom.
  EXPECT_EQ(ext_dims(M, N, 0)[0], Mod::hom(M, N).length());
}

TEST_P(RandomModules, TensorOfCyclicsMatchesGroebnerOracle) {
  std::mt19937_64 rng(900 + GetParam());
  PrimeField k(32003);
  auto s = sample_monomial_quotient(rng, 3, 4);
  auto vars = default_variable_names(s.nvars);
  auto R = monomial_quotient(k, vars, s.generators);
  const auto& P = R->poly_ring();
  auto pick = [&]() {
    std::vector<Polynomial<PrimeField>> out;
    out.push_back(P.variable(rng() % s.nvars));
    if (rng() % 2) out.push_back(P.add(P.variable(rng() % s.nvars), P.mul(P.variable(rng() % s.nvars), P.variable(rng() % s.nvars))));
    return out;
  };
  auto I = pick(), J = pick();
  std::vector<Mod::Vec> Iv, Jv;
  for (const auto& f : I) Iv.push_back(R->element(f));
  for (const auto& f : J) Jv.push_back(R->element(f));
  auto M = Mod::cyclic(R, Iv), N = Mod::cyclic(R, Jv);

  // Oracle: R/I (x) R/J = k[x]/(ideal + I + J), computed from scratch.
  std::vector<Polynomial<PrimeField>> all;
  for (const auto& g : s.generators) all.push_back(P.monomial(g, k.one()));
  all.insert(all.end(), I.begin(), I.end());
  all.insert(all.end(), J.begin(), J.end());
  auto gb = buchberger(P, all);
  auto expect = standard_monomials(gb, s.nvars).size();
  EXPECT_EQ(tor_dims(M, N, 0)[0], expect);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomModules, ::testing::Range(1, 26));

TEST(CanonicalModule, FreeIffGorenstein) {
  for (const auto& spec : {std::string(kA), std::string(kEx26), std::string(kEx27), b_ring(3), b_ring(5)}) {
    auto R = ring(spec);
    auto w = Mod::canonical(R);
    EXPECT_EQ(w.is_free(), R->is_gorenstein()) << spec;
    Resolution<PrimeField> res(w);
    res.extend(4);
    EXPECT_EQ(res.terminated(), R->is_gorenstein()) << spec;
  }
}

TEST(RationalField, MatchesPrimeFieldBetti) {
  auto Rq = ring_q(kEx26);
  Resolution<RationalField> res(PresentedModule<RationalField>::canonical(Rq));
  res.extend(6);
  EXPECT_EQ(res.betti(), (Seq{2, 3, 6, 12, 24, 48, 96}));
  EXPECT_TRUE(verify_resolution(res).ok());
}
