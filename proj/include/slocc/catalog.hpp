#pragma once

// Worked examples as executable fixtures, and the random orbit generator used
// by the plant-and-recover tests.

#include "slocc/equivalence.hpp"

#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace slocc {

struct GoldenCase {
  std::string name;
  std::string description;
  PureState s1;
  PureState s2;
  Bipartition cut;
  std::optional<Verdict> expected_verdict;
  // Expected decomposition of s1 at `cut`.
  std::optional<int> expected_rank;
  std::optional<VectorXd> expected_lambda;
  // Operators that must pass verify_equivalence(s1, s2, ops).
  std::optional<LocalOperatorTuple> expected_ops;
  double tolerance = 1e-8;
};

std::vector<GoldenCase> golden_cases();

/// Random normalized state and random local operators with condition number
/// at most `condition_cap` (Haar * diag(s) * Haar, s log-uniform in [1, cap]);
/// returns (state, image, planted ops) with image = ops applied to state.
/// Bit-reproducible for a fixed seed.
std::tuple<PureState, PureState, LocalOperatorTuple> random_orbit_case(
    const std::vector<int>& dims, std::uint64_t seed, double condition_cap = 20.0);

/// Random invertible matrix with condition number at most `cap`.
MatrixXc random_invertible(int n, double cap, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Cluster-state example: the one-dimensional cluster state and
//   psi2 = a|0000> - b|0111> - c|1010> + d|1101>.

/// Hand-derived (12)(34) frames: `first` for psi2(a,b,c,d) (the source),
/// `second` for the cluster state (the target).
std::pair<SingularFrame, SingularFrame> cluster_example_frames(double a, double b, double c,
                                                               double d);

/// Free parameters of the invertible family solving the example's rank-one
/// conditions: P = [[p11,0,x p11,0],[0,p22,0,-x p22],[-y p11,0,-z p11,0],
/// [0,-y p22,0,z p22]] with x = alpha, y = -c beta/a, z = -c gamma/a,
/// gamma = -alpha beta and beta^2 = a d/(b c).
struct ClusterSolution {
  cplx p11;
  cplx p22;
  cplx alpha;
  cplx beta;
};

MatrixXc cluster_solution_p(const ClusterSolution& s, double a, double b, double c, double d);

/// Reads the family parameters off a P found by the solver; empty when P does
/// not have the family's structure within rel_tol.
std::optional<ClusterSolution> fit_cluster_solution(const MatrixXc& p, double a, double b,
                                                    double c, double d, double rel_tol = 1e-6);

/// The closed-form operators A1..A4 of the example, mapping psi2 onto the
/// cluster state up to a scalar.
LocalOperatorTuple cluster_solution_operators(const ClusterSolution& s, double a, double b,
                                              double c, double d);

}  // namespace slocc
