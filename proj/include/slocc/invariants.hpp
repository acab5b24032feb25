#pragma once

#include "slocc/decomposition.hpp"

#include <array>
#include <optional>
#include <string>

namespace slocc {

enum class TriLabel { PRODUCT, BISEP_A_BC, BISEP_B_AC, BISEP_C_AB, W_CLASS, GHZ_CLASS };

std::string to_string(TriLabel label);

/// SLOCC class of a three-qubit state with the data that decided it.
struct TriClass {
  TriLabel label = TriLabel::PRODUCT;
  std::array<int, 3> marginal_ranks{};
  double hyperdeterminant_abs = 0.0;
  double threshold = 0.0;  // zero threshold applied to hyperdeterminant_abs
};

/// Cayley hyperdeterminant of a 2x2x2 amplitude tensor (index 4*i + 2*j + k).
cplx hyperdeterminant(const VectorXc& amps);

/// Product / biseparable / W / GHZ label. The hyperdeterminant counts as zero
/// when |Det| <= tol * ||amps||^4; marginal ranks use rank_tol.
TriClass classify_tripartite_qubit(const PureState& state, double tol = 1e-9,
                                   double rank_tol = kDefaultRankTol);

enum class InvariantKind { BIPARTITION_RANK, MARGINAL_RANK, TRIPARTITE_CLASS };

/// A violated SLOCC invariant. Every field can be recomputed from the two
/// states alone; `first` refers to s1 and `second` to s2.
struct InequivalenceProof {
  InvariantKind kind = InvariantKind::BIPARTITION_RANK;
  std::string where;   // cut name ("12-34"), party ("party 2") or factor ("psi_u at 12-34")
  std::string first;   // value for s1 (rank or class label)
  std::string second;  // value for s2
  std::string summary() const;
};

std::string to_string(InvariantKind kind);

/// Cheap sound screen. Returns a proof when bipartition ranks at any of the
/// three cuts differ, when single-party marginal ranks differ, or (all-qubit
/// states) when the rank-2 three-party factors at `cut` fall in different
/// classes. An empty result is not evidence of equivalence.
std::optional<InequivalenceProof> invariant_screen(const PureState& s1, const PureState& s2,
                                                   const Bipartition& cut,
                                                   double rtol = kDefaultRankTol);

/// The three-party factor of a frame side as a (r, Ia, Ib) state; slice k is
/// column k of U (or V).
PureState factor_state(const SingularFrame& frame, FrameSide side);

}  // namespace slocc
