#include "slocc/states.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace slocc {
namespace {

using testing::random_matrix;
using testing::random_state;

TEST(PureState, RejectsInvalidInput) {
  EXPECT_THROW(PureState({2}, VectorXc::Ones(2)), std::invalid_argument);
  EXPECT_THROW(PureState({2, 2, 2, 2, 2}, VectorXc::Ones(32)), std::invalid_argument);
  EXPECT_THROW(PureState({2, 1}, VectorXc::Ones(2)), std::invalid_argument);
  EXPECT_THROW(PureState({2, 2}, VectorXc::Ones(3)), std::invalid_argument);
  EXPECT_THROW(PureState({2, 2}, VectorXc::Zero(4)), std::invalid_argument);
  VectorXc bad = VectorXc::Ones(4);
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(PureState({2, 2}, bad), std::invalid_argument);
}

TEST(PureState, LastIndexVariesFastest) {
  const PureState s({2, 3}, VectorXc::LinSpaced(6, 0.0, 5.0));
  const int multi[] = {1, 2};
  EXPECT_EQ(s.index(multi), 5);
  const int other[] = {1, 0};
  EXPECT_EQ(s.index(other), 3);
}

TEST(Catalog, Ghz4HasTwoEqualAmplitudes) {
  const PureState g = make_state("ghz4");
  EXPECT_NEAR(std::abs(g.amps()(0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(g.amps()(15)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.norm(), 1.0, 1e-15);
}

TEST(Catalog, W4HasWeightOneSupport) {
  const PureState w = make_state("w4");
  for (int k = 0; k < 16; ++k) {
    const bool weight_one = k == 1 || k == 2 || k == 4 || k == 8;
    EXPECT_NEAR(std::abs(w.amps()(k)), weight_one ? 0.5 : 0.0, 1e-15) << k;
  }
}

TEST(Catalog, ParameterizedStatesAreNotRenormalized) {
  const cplx p[] = {1.0, 2.0, 3.0, 4.0};
  const PureState s = make_state("psi2_abcd", p);
  EXPECT_EQ(s.amps()(0), cplx(1.0));
  EXPECT_EQ(s.amps()(0b0111), cplx(-2.0));
  EXPECT_EQ(s.amps()(0b1010), cplx(-3.0));
  EXPECT_EQ(s.amps()(0b1101), cplx(4.0));
  const PureState abcd = make_state("psi_abcd", p);
  EXPECT_EQ(abcd.amps()(0), cplx(2.5));
  EXPECT_EQ(abcd.amps()(0b0011), cplx(-1.5));
  EXPECT_EQ(abcd.amps()(0b0110), cplx(-0.5));
}

TEST(Catalog, RejectsBadNamesAndParameters) {
  EXPECT_THROW(make_state("nope"), std::invalid_argument);
  EXPECT_THROW(make_state("psi_abcd"), std::invalid_argument);
  const cplx p[] = {1.0};
  EXPECT_THROW(make_state("ghz4", p), std::invalid_argument);
  for (const auto& name : catalog_names()) {
    if (name != "psi_abcd" && name != "psi2_abcd") EXPECT_NO_THROW(make_state(name));
  }
}

TEST(Bipartition, ParsesAndNames) {
  EXPECT_EQ(Bipartition::parse("12-34"), Bipartition::cut_12_34());
  EXPECT_EQ(Bipartition::parse("13-24"), Bipartition::cut_13_24());
  EXPECT_EQ(Bipartition::parse("14-23").name(), "14-23");
  EXPECT_THROW(Bipartition::parse("12-13"), std::invalid_argument);
  EXPECT_THROW(Bipartition::parse("1234"), std::invalid_argument);
  EXPECT_THROW(Bipartition::parse("12-35"), std::invalid_argument);
}

TEST(ApplyLocalOps, IdentityIsNoOp) {
  std::mt19937_64 rng(1);
  const PureState s = random_state({2, 3, 2}, rng);
  const PureState t = apply_local_ops(s, LocalOperatorTuple::identity(s.dims()));
  EXPECT_LT((t.amps() - s.amps()).norm(), 1e-15);
}

TEST(ApplyLocalOps, MatchesKroneckerProduct) {
  std::mt19937_64 rng(2);
  const PureState s = random_state({2, 3, 2, 2}, rng);
  LocalOperatorTuple ops;
  for (int d : s.dims()) ops.ops.push_back(random_matrix(d, d, rng));
  const MatrixXc full = kron(kron(ops.ops[0], ops.ops[1]), kron(ops.ops[2], ops.ops[3]));
  const VectorXc expected = full * s.amps();
  EXPECT_LT((apply_local_ops(s, ops).amps() - expected).norm(), 1e-12 * expected.norm());
}

TEST(ApplyLocalOps, ComposesAsMatrixProduct) {
  std::mt19937_64 rng(3);
  const PureState s = random_state({2, 2, 2}, rng);
  LocalOperatorTuple a, b, ab;
  for (int d : s.dims()) {
    a.ops.push_back(random_matrix(d, d, rng));
    b.ops.push_back(random_matrix(d, d, rng));
    ab.ops.push_back(a.ops.back() * b.ops.back());
  }
  const PureState lhs = apply_local_ops(apply_local_ops(s, b), a);
  const PureState rhs = apply_local_ops(s, ab);
  EXPECT_LT((lhs.amps() - rhs.amps()).norm(), 1e-12 * rhs.norm());
}

TEST(StatesProportional, DetectsScalarMultiples) {
  std::mt19937_64 rng(4);
  const PureState s = random_state({2, 2, 2, 2}, rng);
  EXPECT_TRUE(states_proportional(s, s.scaled(cplx(0.3, -2.0))));
  const PureState other = random_state({2, 2, 2, 2}, rng);
  EXPECT_FALSE(states_proportional(s, other));
  EXPECT_FALSE(states_proportional(s, random_state({2, 2, 4}, rng)));
}

TEST(Marginal, HasUnitTraceForNormalizedStates) {
  std::mt19937_64 rng(5);
  const PureState s = random_state({2, 3, 2}, rng);
  for (int k = 0; k < 3; ++k) {
    const MatrixXc rho = marginal(s, k);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_LT((rho - rho.adjoint()).norm(), 1e-14);
  }
  const MatrixXc ghz = marginal(make_state("ghz4"), 2);
  EXPECT_LT((ghz - 0.5 * MatrixXc::Identity(2, 2)).norm(), 1e-15);
}

TEST(TripartiteState, StateRoundTrip) {
  std::mt19937_64 rng(6);
  const PureState s = random_state({3, 2, 4}, rng);
  const TripartiteState t = TripartiteState::from_state(s);
  ASSERT_EQ(t.first_dim(), 3);
  EXPECT_EQ(t.rows(), 2);
  EXPECT_EQ(t.cols(), 4);
  EXPECT_EQ(t.slices[1](1, 3), s.amps()(1 * 8 + 1 * 4 + 3));
  EXPECT_EQ(t.to_state().amps(), s.amps());
  const TripartiteState u = TripartiteState::from_coefficient_matrix(t.coefficient_matrix(), 2, 4);
  EXPECT_EQ(u.to_state().amps(), s.amps());
}

}  // namespace
}  // namespace slocc
