#include "slocc/tensorops.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace slocc {
namespace {

using testing::random_matrix;

TEST(Tensorops, VectorizeIsColumnMajor) {
  MatrixXc m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  VectorXc expected(4);
  expected << 1.0, 3.0, 2.0, 4.0;
  EXPECT_EQ(vectorize(m), expected);
  EXPECT_EQ(fold(expected, 2, 2), m);
}

TEST(Tensorops, UnflattenIsRowMajor) {
  VectorXc v(6);
  v << 0.0, 1.0, 2.0, 3.0, 4.0, 5.0;
  const MatrixXc m = unflatten(v, 2, 3);
  EXPECT_EQ(m(0, 2), cplx(2.0));
  EXPECT_EQ(m(1, 0), cplx(3.0));
  EXPECT_EQ(flatten_rows(m), v);
}

TEST(Tensorops, FoldRejectsWrongLength) {
  const VectorXc v = VectorXc::Ones(5);
  EXPECT_THROW(fold(v, 2, 3), std::invalid_argument);
}

TEST(Tensorops, FoldVectorizeRoundTripIsExact) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXc m = random_matrix(1 + trial % 5, 1 + trial % 7, rng);
    EXPECT_EQ(fold(vectorize(m), m.rows(), m.cols()), m);
  }
}

TEST(Tensorops, KronMatchesEntrywiseDefinition) {
  std::mt19937_64 rng(2);
  const MatrixXc a = random_matrix(2, 3, rng);
  const MatrixXc b = random_matrix(3, 2, rng);
  const MatrixXc k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_EQ(k(i * 3 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(Tensorops, RealignOfKronIsOuterProductOfVectorizations) {
  std::mt19937_64 rng(3);
  for (auto [i1, i2] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{4, 4}}) {
    const MatrixXc b = random_matrix(i1, i1, rng);
    const MatrixXc c = random_matrix(i2, i2, rng);
    const MatrixXc expected = vectorize(b) * vectorize(c).transpose();
    EXPECT_LT((realign(kron(b, c), i1, i2) - expected).norm(), 1e-12 * expected.norm());
  }
}

TEST(Tensorops, RealignRejectsWrongShape) {
  const MatrixXc m = MatrixXc::Identity(6, 6);
  EXPECT_THROW(realign(m, 2, 2), std::invalid_argument);
}

TEST(Tensorops, NumericalRankCountsRelativeToLargest) {
  MatrixXc m = MatrixXc::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-6;
  m(2, 2) = 1e-12;
  EXPECT_EQ(numerical_rank(m), 2);
  EXPECT_EQ(numerical_rank(m, 1e-3), 1);
  EXPECT_EQ(numerical_rank(MatrixXc::Zero(2, 2)), 0);
}

TEST(Tensorops, SvdAndQrReconstructUpToDimensionSixteen) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 16; ++n) {
    const MatrixXc m = random_matrix(n, n + n % 3, rng);
    const auto d = svd(m);
    MatrixXc sigma = MatrixXc::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < d.sigma.size(); ++k) sigma(k, k) = d.sigma(k);
    EXPECT_LT((d.u * sigma * d.v.adjoint() - m).norm(), 1e-12 * m.norm());
    EXPECT_LT((d.u.adjoint() * d.u - MatrixXc::Identity(n, n)).norm(), 1e-12);
    for (Eigen::Index k = 1; k < d.sigma.size(); ++k) EXPECT_LE(d.sigma(k), d.sigma(k - 1));

    const auto f = qr(m);
    EXPECT_LT((f.q * f.r - m).norm(), 1e-12 * m.norm());
    for (Eigen::Index j = 0; j < f.r.cols(); ++j)
      for (Eigen::Index i = j + 1; i < f.r.rows(); ++i) EXPECT_EQ(f.r(i, j), cplx(0.0));
  }
}

TEST(Tensorops, SvdGaugeIsDeterministic) {
  std::mt19937_64 rng(5);
  const MatrixXc m = random_matrix(4, 4, rng);
  const auto d1 = svd(m);
  const auto d2 = svd(m);
  EXPECT_EQ(d1.u, d2.u);
  EXPECT_EQ(d1.v, d2.v);
}

TEST(Tensorops, Rank1KronFactorRecoversProduct) {
  std::mt19937_64 rng(6);
  const MatrixXc b = random_matrix(2, 2, rng);
  const MatrixXc c = random_matrix(3, 3, rng);
  const MatrixXc a = kron(b, c);
  const auto f = rank1_kron_factor(a, 2, 3);
  EXPECT_LT((kron(f.b, f.c) - a).norm(), 1e-12 * a.norm());
  EXPECT_NEAR(f.b.norm(), f.c.norm(), 1e-12 * f.b.norm());
}

TEST(Tensorops, Rank1KronFactorRejectsGenericMatrix) {
  std::mt19937_64 rng(7);
  const MatrixXc a = random_matrix(4, 4, rng);
  EXPECT_THROW(rank1_kron_factor(a, 2, 2), NotAProductError);
}

TEST(Tensorops, RealScalarInstantiation) {
  Eigen::MatrixXd b(2, 2), c(2, 2);
  b << 1, 2, 3, 4;
  c << 0, 1, 1, 0;
  const Eigen::MatrixXd r = realign(kron(b, c), 2, 2);
  EXPECT_LT((r - vectorize(b) * vectorize(c).transpose()).norm(), 1e-14);
}

}  // namespace
}  // namespace slocc
