#include "slocc/catalog.hpp"

#include <gtest/gtest.h>

namespace slocc {
namespace {

constexpr double kA = 0.6, kB = 0.5, kC = 0.4, kD = 0.3;

TEST(GoldenCases, ExpectedDecompositionAndOperators) {
  for (const auto& g : golden_cases()) {
    SCOPED_TRACE(g.name);
    if (g.expected_rank || g.expected_lambda) {
      const SingularFrame f = singular_frame(g.s1, g.cut);
      if (g.expected_rank) EXPECT_EQ(f.r, *g.expected_rank);
      if (g.expected_lambda) {
        ASSERT_EQ(f.lambda.size(), g.expected_lambda->size());
        EXPECT_LT((f.lambda - *g.expected_lambda).norm(), 1e-12);
      }
    }
    if (g.expected_ops) {
      const VerifyResult r = verify_equivalence(g.s1, g.s2, *g.expected_ops, g.tolerance);
      EXPECT_TRUE(r.pass) << "residual " << r.residual;
    }
  }
}

TEST(GoldenCases, ExpectedVerdicts) {
  for (const auto& g : golden_cases()) {
    if (!g.expected_verdict) continue;
    SCOPED_TRACE(g.name);
    const EquivalenceVerdict v = check_fourpartite_equiv(g.s1, g.s2, g.cut, SolverConfig{});
    EXPECT_EQ(v.status, *g.expected_verdict);
    if (v.status == Verdict::EQUIVALENT) {
      EXPECT_LT(verify_equivalence(g.s1, g.s2, v.certificate->ops).residual, g.tolerance);
    }
  }
}

TEST(RandomOrbitCase, DeterministicAndConsistent) {
  const auto [s1, i1, o1] = random_orbit_case({2, 2, 3, 3}, 42);
  const auto [s2, i2, o2] = random_orbit_case({2, 2, 3, 3}, 42);
  EXPECT_EQ(s1.amps(), s2.amps());
  EXPECT_EQ(i1.amps(), i2.amps());
  EXPECT_NEAR(s1.norm(), 1.0, 1e-12);
  EXPECT_LT((apply_local_ops(s1, o1).amps() - i1.amps()).norm(), 1e-12);
  const auto [s3, i3, o3] = random_orbit_case({2, 2, 3, 3}, 43);
  EXPECT_NE(s1.amps(), s3.amps());
}

TEST(RandomInvertible, RespectsConditionCap) {
  std::mt19937_64 rng(1);
  for (double cap : {1.0001, 5.0, 20.0}) {
    for (int n = 2; n <= 4; ++n) {
      const VectorXd s = singular_values(random_invertible(n, cap, rng));
      EXPECT_LE(s(0) / s(n - 1), cap * (1 + 1e-10));
    }
  }
}

TEST(ClusterExample, FramesReconstructTheStates) {
  const auto [source, target] = cluster_example_frames(kA, kB, kC, kD);
  const cplx p[] = {kA, kB, kC, kD};
  const PureState psi2 = make_state("psi2_abcd", p);
  const PureState cluster = make_state("cluster1d");
  EXPECT_LT((source.reconstruct() - flatten_bipartition(psi2, source.cut)).norm(), 1e-14);
  EXPECT_LT((target.reconstruct() - flatten_bipartition(cluster, target.cut)).norm(), 1e-14);
}

TEST(ClusterExample, ClosedFormOperatorsVerify) {
  const cplx p[] = {kA, kB, kC, kD};
  const PureState psi2 = make_state("psi2_abcd", p);
  const PureState cluster = make_state("cluster1d");
  const double beta = std::sqrt(kA * kD / (kB * kC));
  for (const ClusterSolution s : {ClusterSolution{1.0, 1.0, 1.0, beta},
                                  ClusterSolution{cplx(0.5, 1.0), 2.0, cplx(-0.3, 0.7), -beta}}) {
    const LocalOperatorTuple ops = cluster_solution_operators(s, kA, kB, kC, kD);
    const VerifyResult r = verify_equivalence(cluster, psi2, ops);
    EXPECT_TRUE(r.pass) << "residual " << r.residual;
  }
}

TEST(ClusterExample, FitReadsBackTheParameters) {
  const ClusterSolution s{cplx(0.7, 0.2), cplx(-1.1, 0.4), cplx(0.3, -0.9),
                          std::sqrt(kA * kD / (kB * kC))};
  const MatrixXc p = cluster_solution_p(s, kA, kB, kC, kD);
  const auto fit = fit_cluster_solution(p, kA, kB, kC, kD);
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(std::abs(fit->p11 - s.p11), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(fit->alpha - s.alpha), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(fit->beta - s.beta), 0.0, 1e-12);
  MatrixXc off = p;
  off(0, 1) = 0.5;
  EXPECT_FALSE(fit_cluster_solution(off, kA, kB, kC, kD).has_value());
}

TEST(ClusterExample, SolverFindsAFamilyMember) {
  const auto [source, target] = cluster_example_frames(kA, kB, kC, kD);
  bool fitted = false;
  for (std::uint64_t seed = 0; seed < 16 && !fitted; ++seed) {
    SolverConfig config;
    config.seed = seed;
    config.balance = false;
    const SolveOutcome out = solve_ptilde(source, target, config);
    ASSERT_EQ(out.status, SolveStatus::FOUND) << "seed " << seed;
    fitted = fit_cluster_solution(out.candidate->pt.p, kA, kB, kC, kD).has_value();
  }
  EXPECT_TRUE(fitted);
}

}  // namespace
}  // namespace slocc
