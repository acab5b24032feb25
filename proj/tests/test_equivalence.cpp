#include "slocc/catalog.hpp"
#include "slocc/equivalence.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace slocc {
namespace {

using testing::random_matrix;
using testing::random_state;

MatrixXc swap_map(int d) {
  MatrixXc s = MatrixXc::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return s;
}

TEST(VerifyEquivalence, AcceptsPlantedOperators) {
  const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, 1);
  const VerifyResult r = verify_equivalence(image, s, ops);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_NEAR(std::abs(r.scalar - 1.0), 0.0, 1e-12);
}

TEST(VerifyEquivalence, ScalarGaugeCancels) {
  const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, 2);
  LocalOperatorTuple scaled = ops;
  const double factors[] = {2.0, 0.5, 3.0, 1.0 / 3.0};
  for (int k = 0; k < 4; ++k) scaled.ops[k] *= factors[k];
  EXPECT_TRUE(verify_equivalence(image, s, scaled).pass);
  scaled.ops[0] *= 7.0;  // no longer product one, still a scalar
  EXPECT_TRUE(verify_equivalence(image, s, scaled).pass);
}

TEST(VerifyEquivalence, RejectsWrongOperators) {
  const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, 3);
  LocalOperatorTuple broken = ops;
  broken.ops[2].setZero();
  EXPECT_FALSE(verify_equivalence(image, s, broken).pass);
  EXPECT_FALSE(verify_equivalence(image, s, LocalOperatorTuple::identity(s.dims())).pass);
}

TEST(NormalizeOperators, FixesGaugeAndKeepsTheProduct) {
  std::mt19937_64 rng(4);
  const PureState s = random_state({2, 3, 2, 2}, rng);
  LocalOperatorTuple ops;
  for (int d : s.dims()) ops.ops.push_back(random_matrix(d, d, rng));
  const LocalOperatorTuple n = normalize_operators(ops);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(n.ops[k].norm(), 1.0, 1e-12);
    const Eigen::Index idx = detail::argmax_abs(vectorize(n.ops[k]));
    EXPECT_NEAR(vectorize(n.ops[k])(idx).imag(), 0.0, 1e-12);
    EXPECT_GT(vectorize(n.ops[k])(idx).real(), 0.0);
  }
  const PureState a = apply_local_ops(s, ops);
  const PureState b = apply_local_ops(s, n);
  EXPECT_LT((a.amps() - b.amps()).norm(), 1e-12 * a.norm());
}

TEST(ToPartyOrder, InvertsCutOrder) {
  LocalOperatorTuple cut_ordered;
  for (int k = 0; k < 4; ++k) cut_ordered.ops.push_back(MatrixXc::Constant(2, 2, double(k)));
  // Cut 13-24 lists parties 1, 3, 2, 4.
  const LocalOperatorTuple p = to_party_order(cut_ordered, Bipartition::cut_13_24());
  EXPECT_EQ(p.ops[0](0, 0), cplx(0.0));
  EXPECT_EQ(p.ops[2](0, 0), cplx(1.0));
  EXPECT_EQ(p.ops[1](0, 0), cplx(2.0));
  EXPECT_EQ(p.ops[3](0, 0), cplx(3.0));
}

TEST(CheckFourpartite, GhzVersusW) {
  const EquivalenceVerdict v = check_fourpartite_equiv(make_state("ghz4"), make_state("w4"),
                                                       Bipartition::cut_12_34(), SolverConfig{});
  EXPECT_EQ(v.status, Verdict::INEQUIVALENT);
  ASSERT_TRUE(v.proof.has_value());
  EXPECT_FALSE(v.certificate.has_value());
  EXPECT_EQ(v.proof->first, "GHZ_CLASS");
  EXPECT_EQ(v.proof->second, "W_CLASS");
}

TEST(CheckFourpartite, StateAgainstItself) {
  for (const char* name : {"ghz4", "w4", "cluster1d"}) {
    const PureState s = make_state(name);
    const EquivalenceVerdict v =
        check_fourpartite_equiv(s, s, Bipartition::cut_12_34(), SolverConfig{});
    EXPECT_EQ(v.status, Verdict::EQUIVALENT) << name;
    ASSERT_TRUE(v.certificate.has_value());
    EXPECT_TRUE(verify_equivalence(s, s, v.certificate->ops).pass);
  }
}

TEST(CheckFourpartite, PlantAndRecoverAtEveryCut) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, 100 + seed);
    const Bipartition cut = Bipartition::all()[seed % 3];
    SolverConfig config;
    config.seed = seed;
    const EquivalenceVerdict v = check_fourpartite_equiv(image, s, cut, config);
    ASSERT_EQ(v.status, Verdict::EQUIVALENT) << "seed " << seed << " cut " << cut.name();
    // The recovered tuple may differ from the planted one by a stabilizer
    // element; only the state-level identity is required.
    EXPECT_TRUE(verify_equivalence(image, s, v.certificate->ops).pass);
    EXPECT_TRUE(v.certificate->ops.invertible());
    EXPECT_EQ(v.certificate->cut, cut.name());
  }
}

TEST(CheckFourpartite, UnequalDimsThrow) {
  std::mt19937_64 rng(5);
  EXPECT_THROW(check_fourpartite_equiv(random_state({2, 2, 2, 2}, rng),
                                       random_state({2, 2, 3, 3}, rng), Bipartition::cut_12_34(),
                                       SolverConfig{}),
               std::invalid_argument);
}

TEST(CheckAllCuts, AgreesWithSingleCut) {
  const auto [s, image, ops] = random_orbit_case({2, 2, 2, 2}, 7);
  EXPECT_EQ(check_all_cuts(image, s, SolverConfig{}).status, Verdict::EQUIVALENT);
  EXPECT_EQ(check_all_cuts(make_state("ghz4"), make_state("w4"), SolverConfig{}).status,
            Verdict::INEQUIVALENT);
}

TEST(CheckTripartite, RecoversPlantedOperators) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [s, image, ops] = random_orbit_case({3, 2, 2}, seed);
    SolverConfig config;
    config.seed = seed;
    const EquivalenceVerdict v = check_tripartite_equiv(
        TripartiteState::from_state(image), TripartiteState::from_state(s), config);
    ASSERT_EQ(v.status, Verdict::EQUIVALENT) << "seed " << seed;
    EXPECT_TRUE(verify_equivalence(image, s, v.certificate->ops).pass);
  }
}

TEST(CheckTripartite, GhzVersusW) {
  const EquivalenceVerdict v =
      check_tripartite_equiv(TripartiteState::from_state(make_state("ghz3")),
                             TripartiteState::from_state(make_state("w3")), SolverConfig{});
  EXPECT_EQ(v.status, Verdict::INEQUIVALENT);
  ASSERT_TRUE(v.proof.has_value());
}

TEST(RankPreservationProbe, KroneckerMapsAreConsistent) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXc phi = kron(random_matrix(2, 2, rng), random_matrix(3, 3, rng));
    EXPECT_EQ(rank_preservation_probe(phi, 2, 3, 64, trial).status, ProbeStatus::CONSISTENT);
  }
}

TEST(RankPreservationProbe, SwapComposedWithKroneckerIsConsistent) {
  std::mt19937_64 rng(7);
  const MatrixXc phi = kron(random_matrix(2, 2, rng), random_matrix(2, 2, rng)) * swap_map(2);
  EXPECT_EQ(rank_preservation_probe(phi, 2, 2, 64, 1).status, ProbeStatus::CONSISTENT);
}

TEST(RankPreservationProbe, GenericMapsAreViolated) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbeResult r = rank_preservation_probe(random_matrix(4, 4, rng), 2, 2, 64, trial);
    EXPECT_EQ(r.status, ProbeStatus::VIOLATED);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_LE(r.samples_run, 64);
  }
}

TEST(RankPreservationProbe, RejectsWrongShape) {
  EXPECT_THROW(rank_preservation_probe(MatrixXc::Identity(5, 5), 2, 2, 8, 0),
               std::invalid_argument);
}

}  // namespace
}  // namespace slocc
