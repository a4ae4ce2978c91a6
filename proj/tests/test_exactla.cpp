#include <gtest/gtest.h>

#include <random>

#include "cangrow/linalg.hpp"

using namespace cangrow;

namespace {

// Plain dense elimination mod p, written independently of Echelon.
std::size_t dense_rank_mod(std::vector<std::vector<long>> a, long p) {
  std::size_t rank = 0, rows = a.size(), cols = rows ? a[0].size() : 0;
  auto pw = [p](long b, long e) {
    long r = 1;
    b %= p;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && ((a[piv][c] % p) + p) % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    long inv = pw(((a[rank][c] % p) + p) % p, p - 2);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      long f = ((a[r][c] % p) + p) % p * inv % p;
      for (std::size_t k = 0; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

template <Field F>
Matrix<F> random_matrix(const F& k, std::mt19937& rng, std::size_t r, std::size_t c, double density,
                        std::vector<std::vector<long>>* dense = nullptr) {
  std::uniform_int_distribution<long> val(-3, 3);
  std::bernoulli_distribution coin(density);
  std::vector<SparseVec<typename F::value_type>> rows(r);
  if (dense) dense->assign(r, std::vector<long>(c, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      if (!coin(rng)) continue;
      long x = val(rng);
      if (x == 0) continue;
      rows[i].push(static_cast<Index>(j), k.from_int(x));
      if (dense) (*dense)[i][j] = x;
    }
  return Matrix<F>::from_rows(k, c, rows);
}

}  // namespace

TEST(Rref, IdentityIsFixed) {
  PrimeField k(32003);
  auto I = Matrix<PrimeField>::identity(k, 2);
  auto r = rref(I);
  EXPECT_EQ(r.matrix, I);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, ZeroMatrix) {
  PrimeField k(32003);
  Matrix<PrimeField> Z(k, 3, 4);
  auto r = rref(Z);
  EXPECT_TRUE(r.matrix.is_zero());
  EXPECT_TRUE(r.pivots.empty());
}

TEST(Rref, RankOneRationalMatrix) {
  RationalField Q;
  Matrix<RationalField> m(Q, {{1, 2}, {2, 4}});
  auto r = rref(m);
  EXPECT_EQ(r.matrix, Matrix<RationalField>(Q, {{1, 2}, {0, 0}}));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));
}

TEST(Kernel, IdentityHasEmptyKernel) {
  PrimeField k(101);
  EXPECT_EQ(kernel_basis(Matrix<PrimeField>::identity(k, 4)).cols(), 0u);
}

TEST(Kernel, ZeroMatrixGivesStandardBasis) {
  PrimeField k(101);
  Matrix<PrimeField> Z(k, 2, 3);
  auto K = kernel_basis(Z);
  EXPECT_EQ(K, Matrix<PrimeField>::identity(k, 3));
}

TEST(Kernel, RankOneRationalMatrix) {
  RationalField Q;
  auto K = kernel_basis(Matrix<RationalField>(Q, {{1, 2}, {2, 4}}));
  ASSERT_EQ(K.cols(), 1u);
  EXPECT_EQ(K.at(0, 0), mpq_class(-2));
  EXPECT_EQ(K.at(1, 0), mpq_class(1));
}

TEST(Rank, Examples) {
  PrimeField k(32003), f5(5);
  EXPECT_EQ(rank(Matrix<PrimeField>::identity(k, 5)), 5u);
  EXPECT_EQ(rank(Matrix<PrimeField>(k, 3, 3)), 0u);
  EXPECT_EQ(rank(Matrix<PrimeField>(f5, {{1, 2}, {2, 4}})), 1u);
  // 2*row1 - row2 vanishes only in characteristic 3.
  EXPECT_EQ(rank(Matrix<PrimeField>(PrimeField(3), {{1, 2}, {2, 1}})), 1u);
  EXPECT_EQ(rank(Matrix<PrimeField>(f5, {{1, 2}, {2, 1}})), 2u);
}

TEST(FieldSpecTest, RejectsComposite) {
  EXPECT_THROW(FieldSpec::prime_field(32001), InvalidArgument);
  EXPECT_NO_THROW(FieldSpec::prime_field(32003));
  EXPECT_EQ(FieldSpec::rationals().name(), "Q");
  EXPECT_EQ(FieldSpec::prime_field(7).name(), "F7");
}

TEST(PrimeFieldTest, Arithmetic) {
  PrimeField k(7);
  EXPECT_EQ(k.mul(k.from_int(3), k.inv(k.from_int(3))), k.one());
  EXPECT_EQ(k.from_int(-1), k.from_int(6));
  EXPECT_EQ(k.to_string(k.from_int(6)), "-1");
  EXPECT_EQ(k.from_mpz(mpz_class("-100000000000000000000")), k.from_int(5));
  // 10^20 = (10^2)^10 = 2^10 = 1024 = 2 mod 7
  EXPECT_EQ(k.from_mpz(mpz_class("100000000000000000000")), k.from_int(2));
}

class RandomMatrices : public ::testing::TestWithParam<int> {};

TEST_P(RandomMatrices, RankNullityAndKernelOverPrimeField) {
  std::mt19937 rng(GetParam());
  PrimeField k(32003);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  std::size_t r = dim(rng), c = dim(rng);
  std::vector<std::vector<long>> dense;
  auto m = random_matrix(k, rng, r, c, 0.4, &dense);
  auto K = kernel_basis(m);
  EXPECT_EQ(rank(m) + K.cols(), c);
  EXPECT_TRUE((m * K).is_zero());
  EXPECT_EQ(rank(m), dense_rank_mod(dense, 32003));
  auto once = rref(m).matrix;
  EXPECT_EQ(rref(once).matrix, once);
  auto piv = rref(m).pivots;
  for (std::size_t i = 1; i < piv.size(); ++i) EXPECT_LT(piv[i - 1], piv[i]);
}

TEST_P(RandomMatrices, RationalArithmeticIsExact) {
  std::mt19937 rng(1000 + GetParam());
  RationalField Q;
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::size_t r = dim(rng), c = dim(rng);
  auto m = random_matrix(Q, rng, r, c, 0.5);
  auto K = kernel_basis(m);
  EXPECT_EQ(rank(m) + K.cols(), c);
  EXPECT_TRUE((m * K).is_zero());
  auto once = rref(m).matrix;
  EXPECT_EQ(rref(once).matrix, once);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomMatrices, ::testing::Range(1, 41));

TEST(WorkBudgetTest, ThrowsSizeCap) {
  WorkBudget b(10);
  EXPECT_NO_THROW(b.charge(5));
  EXPECT_THROW(b.charge(10), SizeCap);
}

TEST(EchelonTest, TrackedRelationsSpanDependencies) {
  PrimeField k(101);
  Echelon<PrimeField> e(k, 3, 4);
  SparseVec<std::uint32_t> a, b, c;
  a.push(0, 1);
  a.push(1, 2);
  b.push(1, 1);
  c.push(0, 1);
  c.push(1, 5);  // c = a + 3b
  EXPECT_FALSE(e.insert_tracked(a, 0).has_value());
  EXPECT_FALSE(e.insert_tracked(b, 1).has_value());
  auto rel = e.insert_tracked(c, 2);
  ASSERT_TRUE(rel.has_value());
  // rel is a combination of tracked columns summing to zero, with c's coefficient 1.
  EXPECT_EQ(rel->get(k, 2), k.one());
  EXPECT_EQ(rel->get(k, 0), k.from_int(-1));
  EXPECT_EQ(rel->get(k, 1), k.from_int(-3));
}
