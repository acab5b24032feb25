#include "slocc/catalog.hpp"
#include "slocc/solver.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace slocc {
namespace {

using testing::random_matrix;
using testing::random_state;

TEST(CoupleQ, ScalesRowsAndColumns) {
  std::mt19937_64 rng(1);
  const MatrixXc p = random_matrix(3, 3, rng);
  VectorXd l(3), lp(3);
  l << 1.0, 2.0, 4.0;
  lp << 3.0, 5.0, 7.0;
  const MatrixXc q = couple_q(p, l, lp);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(q(i, j) - p(i, j) * lp(j) / l(i)), 0.0, 1e-14);
}

TEST(Candidates, AssembleBlockTriangular) {
  std::mt19937_64 rng(2);
  PTildeCandidate pt{random_matrix(2, 2, rng), random_matrix(2, 2, rng), random_matrix(2, 2, rng)};
  const MatrixXc a = pt.assembled();
  EXPECT_EQ(a.topLeftCorner(2, 2), pt.p);
  EXPECT_EQ(a.topRightCorner(2, 2), pt.y);
  EXPECT_TRUE(a.bottomLeftCorner(2, 2).isZero());
  QTildeCandidate qt{random_matrix(2, 2, rng), random_matrix(2, 2, rng), random_matrix(2, 2, rng)};
  const MatrixXc b = qt.assembled();
  EXPECT_EQ(b.bottomLeftCorner(2, 2), qt.z);
  EXPECT_TRUE(b.topRightCorner(2, 2).isZero());

  const CandidatePair pair = structured_candidate(a, b, 2);
  EXPECT_EQ(pair.pt.p, pt.p);
  EXPECT_EQ(pair.qt.q_bar, qt.q_bar);
}

TEST(Residual, VanishesForTheTrueCoupling) {
  // A state against itself: Pt = I, Qt = I gives identity maps, which are
  // Kronecker products.
  std::mt19937_64 rng(3);
  const PureState s = random_state({2, 2, 2, 2}, rng);
  const SingularFrame f = singular_frame(s, Bipartition::cut_12_34());
  const CandidatePair c =
      structured_candidate(MatrixXc::Identity(4, 4), MatrixXc::Identity(4, 4), f.r);
  EXPECT_LT(residual(c, f, f), 1e-12);
}

TEST(SolvePTilde, FindsCertificateOnRandomOrbits) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, seed);
    const SingularFrame source = singular_frame(s, Bipartition::cut_12_34());
    const SingularFrame target = singular_frame(image, Bipartition::cut_12_34());
    SolverConfig config;
    config.seed = seed;
    const SolveOutcome out = solve_ptilde(source, target, config);
    ASSERT_EQ(out.status, SolveStatus::FOUND) << "seed " << seed;
    EXPECT_LT(out.residual, config.residual_tol);
    ASSERT_TRUE(out.candidate.has_value());
    EXPECT_LT(residual(*out.candidate, source, target), 1e-8);
  }
}

TEST(SolvePTilde, DeterministicForAFixedSeed) {
  const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, 11);
  const SingularFrame source = singular_frame(s, Bipartition::cut_12_34());
  const SingularFrame target = singular_frame(image, Bipartition::cut_12_34());
  SolverConfig config;
  config.seed = 5;
  const SolveOutcome a = solve_ptilde(source, target, config);
  const SolveOutcome b = solve_ptilde(source, target, config);
  ASSERT_EQ(a.status, b.status);
  EXPECT_EQ(a.restarts_used, b.restarts_used);
  ASSERT_TRUE(a.candidate && b.candidate);
  EXPECT_EQ(a.candidate->pt.assembled(), b.candidate->pt.assembled());
}

TEST(SolvePTilde, ExhaustsOnInequivalentPair) {
  // GHZ and W factors at rank 2: no coupling exists.
  const SingularFrame ghz = singular_frame(make_state("ghz4"), Bipartition::cut_12_34());
  const SingularFrame w = singular_frame(make_state("w4"), Bipartition::cut_12_34());
  SolverConfig config;
  config.restarts = 4;
  config.max_iterations = 100;
  const SolveOutcome out = solve_ptilde(w, ghz, config);
  EXPECT_EQ(out.status, SolveStatus::EXHAUSTED);
  EXPECT_EQ(out.restarts_used, 4);
}

TEST(SolvePTilde, RejectsMismatchedFrames) {
  const SingularFrame ghz = singular_frame(make_state("ghz4"), Bipartition::cut_12_34());
  const SingularFrame cluster = singular_frame(make_state("cluster1d"), Bipartition::cut_12_34());
  EXPECT_THROW(solve_ptilde(ghz, cluster, SolverConfig{}), std::invalid_argument);
}

TEST(BalanceState, ProducesMaximallyMixedMarginals) {
  std::mt19937_64 rng(4);
  const PureState s = random_state({2, 2, 3, 3}, rng);
  const BalanceResult b = balance_state(s, 2000, 1e-10);
  ASSERT_TRUE(b.converged);
  const PureState n = b.state.normalized();
  for (int k = 0; k < 4; ++k) {
    const int d = s.dims()[k];
    EXPECT_LT((marginal(n, k) - MatrixXc::Identity(d, d) / double(d)).norm(), 1e-8);
  }
  // The balanced state lies in the orbit of the original.
  EXPECT_TRUE(states_proportional(b.state, apply_local_ops(s, b.ops), 1e-9));
}

TEST(BalanceState, FailsOnStatesWithoutScaling) {
  // W-class states have no maximally mixed point in their orbit.
  EXPECT_FALSE(balance_state(make_state("w4")).converged);
}

TEST(SolveSingleSided, RecoversKroneckerMap) {
  std::mt19937_64 rng(5);
  const MatrixXc b = random_invertible(2, 5.0, rng);
  const MatrixXc c = random_invertible(2, 5.0, rng);
  const MatrixXc u = random_invertible(4, 5.0, rng);
  // u_prime chosen so that u * I * u_prime^{-1} = kron(b, c).
  const MatrixXc u_prime = kron(b, c).inverse() * u;
  SolverConfig config;
  const SingleSidedOutcome out = solve_single_sided(u, u_prime, 4, 2, 2, config);
  ASSERT_EQ(out.status, SolveStatus::FOUND);
  ASSERT_TRUE(out.x.has_value());
  EXPECT_NO_THROW(rank1_kron_factor(*out.x, 2, 2, 1e-6));
}

}  // namespace
}  // namespace slocc
