#pragma once

// Equivalence decisions. Every function maps the second state onto the first:
// a certificate (ops, c) satisfies s1 ~= c * (A_1 (x) ... (x) A_N) s2.

#include "slocc/invariants.hpp"
#include "slocc/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slocc {

enum class Verdict { EQUIVALENT, INEQUIVALENT, UNDECIDED };
std::string to_string(Verdict v);

struct Certificate {
  LocalOperatorTuple ops;  // in party order
  cplx scalar{1.0, 0.0};
  double residual = 0.0;   // relative state-level residual
  std::string cut;         // cut the certificate was found at ("" for three parties)
};

struct VerdictDiagnostics {
  std::string cut;
  double rtol = kDefaultRankTol;
  double verify_tol = 1e-8;
  std::uint64_t seed = 0;
  std::optional<double> solver_residual;
  int restarts_used = 0;
  bool balanced = false;
  // Operator recovery only succeeded after composing with the swap of the two
  // parties on one side: equivalence holds up to a permutation of parties.
  bool swapped_pair = false;
  std::optional<double> verify_residual;
  std::vector<std::string> notes;
};

struct EquivalenceVerdict {
  Verdict status = Verdict::UNDECIDED;
  std::optional<Certificate> certificate;
  std::optional<InequivalenceProof> proof;
  VerdictDiagnostics diagnostics;
};

struct VerifyResult {
  bool pass = false;
  cplx scalar{0.0, 0.0};
  double residual = 0.0;  // ||c * image - s1|| / ||s1||
};

/// Best-fit scalar c for c * apply_local_ops(s2, ops) ~ s1.
VerifyResult verify_equivalence(const PureState& s1, const PureState& s2,
                                const LocalOperatorTuple& ops, double tol = 1e-8);

/// Operators A_a, A_b, A_c, A_d (cut order) from a candidate:
/// A_a (x) A_b = (U Pt U'^H)^{-1} and A_c (x) A_d = (V Qt V'^H)^T.
/// Throws NotAProductError when either side does not factor at factor_tol.
struct RecoveredOperators {
  LocalOperatorTuple ops;  // cut order
  double sigma_ratio_u = 0.0;
  double sigma_ratio_v = 0.0;
};

RecoveredOperators recover_local_operators(const SingularFrame& frame,
                                           const SingularFrame& frame_prime,
                                           const CandidatePair& candidate,
                                           double factor_tol = 1e-6);

/// Reorders cut-ordered operators into party order.
LocalOperatorTuple to_party_order(const LocalOperatorTuple& cut_ordered, const Bipartition& cut);

/// Deterministic gauge: A_1..A_{N-1} get unit Frobenius norm with their
/// largest-magnitude entry real positive; the remaining scalar goes to A_N.
LocalOperatorTuple normalize_operators(const LocalOperatorTuple& ops);

EquivalenceVerdict check_fourpartite_equiv(const PureState& s1, const PureState& s2,
                                           const Bipartition& cut, const SolverConfig& config,
                                           double rtol = kDefaultRankTol,
                                           double verify_tol = 1e-8);

/// Tries the three cuts; an INEQUIVALENT or EQUIVALENT verdict from any cut
/// decides. Both occurring would be a contradiction and throws logic_error.
EquivalenceVerdict check_all_cuts(const PureState& s1, const PureState& s2,
                                  const SolverConfig& config, double rtol = kDefaultRankTol,
                                  double verify_tol = 1e-8);

EquivalenceVerdict check_tripartite_equiv(const TripartiteState& t1, const TripartiteState& t2,
                                          const SolverConfig& config,
                                          double rtol = kDefaultRankTol,
                                          double verify_tol = 1e-8);

enum class ProbeStatus { CONSISTENT, VIOLATED };

struct ProbeResult {
  ProbeStatus status = ProbeStatus::CONSISTENT;
  std::optional<VectorXc> witness;
  int samples_run = 0;
};

/// Checks that the I1*I2 square map phi preserves the rank of the I1 x I2
/// matrix layout (entry (i, j) = a[i*I2 + j]) on random vectors, alternating
/// rank-one and full-rank samples. CONSISTENT is evidence, not proof.
ProbeResult rank_preservation_probe(const MatrixXc& phi, int i1, int i2, int samples,
                                    std::uint64_t seed, double rtol = kDefaultRankTol);

}  // namespace slocc
