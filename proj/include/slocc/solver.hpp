#pragma once

// Search for the block-triangular coupling matrices that make both
// realignment matrices rank one.
//
// Frame convention: `frame` belongs to the source state Psi (the one the local
// operators act on) and `frame_prime` to the target Psi'. With
//   X_u = U * Pt * U'^H   and   X_v = V * Qt * V'^H,
// the target is reached by A_a (x) A_b = X_u^{-1} and A_c (x) A_d = X_v^T, where
//   Pt = [[P, Y], [0, Pbar]]   (block upper triangular, m = Ia*Ib)
//   Qt = [[Q, 0], [Z, Qbar]]   (block lower triangular, n = Ic*Id)
// and Q = couple_q(P) = Lambda^{-1} P Lambda'.

#include "slocc/decomposition.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace slocc {

struct PTildeCandidate {
  MatrixXc p;      // r x r
  MatrixXc y;      // r x (m - r)
  MatrixXc p_bar;  // (m - r) x (m - r)

  MatrixXc assembled() const;
};

struct QTildeCandidate {
  MatrixXc q;      // r x r, equals couple_q(P)
  MatrixXc z;      // (n - r) x r
  MatrixXc q_bar;  // (n - r) x (n - r)

  MatrixXc assembled() const;
};

struct CandidatePair {
  PTildeCandidate pt;
  QTildeCandidate qt;
};

struct SolverConfig {
  int restarts = 64;
  int max_iterations = 500;
  double residual_tol = 1e-9;
  std::uint64_t seed = 0;
  double invertibility_penalty_weight = 0.1;
  // Smallest/largest singular value ratio required of P, Pbar and Qbar.
  double invertibility_tol = 1e-6;
  // Alternating rank-1 projection sweeps run before each local refinement.
  int projection_sweeps = 0;
  // Search in operator-scaled frames when both states admit a scaling.
  bool balance = true;
};

enum class SolveStatus { FOUND, EXHAUSTED };

struct SolveOutcome {
  SolveStatus status = SolveStatus::EXHAUSTED;
  std::optional<CandidatePair> candidate;
  double residual = 0.0;
  int restarts_used = 0;
  bool balanced = false;
};

std::string to_string(SolveStatus s);

/// Q = Lambda^{-1} P Lambda'.
MatrixXc couple_q(const MatrixXc& p, const VectorXd& lambda, const VectorXd& lambda_prime);

/// sigma2/sigma1 of realign(U Pt U'^H) plus the same for realign(V Qt V'^H).
double residual(const CandidatePair& c, const SingularFrame& frame,
                const SingularFrame& frame_prime);

/// The candidate pair restricted to its block structure, read off from
/// unstructured Pt and Qt.
CandidatePair structured_candidate(const MatrixXc& pt, const MatrixXc& qt, int r);

/// Randomized local search for a certificate. Requires equal dims and rank.
SolveOutcome solve_ptilde(const SingularFrame& frame, const SingularFrame& frame_prime,
                          const SolverConfig& config);

/// Single-sided search used for three-party states: finds Pt = [[P, Y], [0, Pbar]]
/// (P of size rho) with realign(U Pt U'^{-1}, i1, i2) of rank one. U and U' are
/// square, invertible, not necessarily unitary.
struct SingleSidedOutcome {
  SolveStatus status = SolveStatus::EXHAUSTED;
  std::optional<MatrixXc> x;  // U Pt U'^{-1}
  std::optional<MatrixXc> pt;
  double residual = 0.0;
  int restarts_used = 0;
};

SingleSidedOutcome solve_single_sided(const MatrixXc& u, const MatrixXc& u_prime, int rho,
                                      int i1, int i2, const SolverConfig& config);

/// Local operator scaling: alternately applies rho_k^{-1/2} (unit |det|) to each
/// party until every normalized marginal is maximally mixed. On success,
/// `state` = c * (ops[0] (x) ... ) original for some scalar c.
struct BalanceResult {
  bool converged = false;
  PureState state;
  LocalOperatorTuple ops;
  double deviation = 0.0;
  int iterations = 0;
};

BalanceResult balance_state(const PureState& state, int max_sweeps = 500, double tol = 1e-12,
                            double max_condition = 1e8);

}  // namespace slocc
