#include "slocc/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slocc {

std::string to_string(TriLabel label) {
  switch (label) {
    case TriLabel::PRODUCT: return "PRODUCT";
    case TriLabel::BISEP_A_BC: return "BISEP_A_BC";
    case TriLabel::BISEP_B_AC: return "BISEP_B_AC";
    case TriLabel::BISEP_C_AB: return "BISEP_C_AB";
    case TriLabel::W_CLASS: return "W_CLASS";
    case TriLabel::GHZ_CLASS: return "GHZ_CLASS";
  }
  return "?";
}

std::string to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::BIPARTITION_RANK: return "bipartition rank";
    case InvariantKind::MARGINAL_RANK: return "marginal rank";
    case InvariantKind::TRIPARTITE_CLASS: return "three-qubit factor class";
  }
  return "?";
}

std::string InequivalenceProof::summary() const {
  return to_string(kind) + " differs at " + where + ": " + first + " vs " + second;
}

cplx hyperdeterminant(const VectorXc& amps) {
  if (amps.size() != 8) throw std::invalid_argument("hyperdeterminant: need 8 amplitudes");
  auto a = [&](int i, int j, int k) { return amps(4 * i + 2 * j + k); };
  const cplx a000 = a(0, 0, 0), a001 = a(0, 0, 1), a010 = a(0, 1, 0), a011 = a(0, 1, 1);
  const cplx a100 = a(1, 0, 0), a101 = a(1, 0, 1), a110 = a(1, 1, 0), a111 = a(1, 1, 1);
  const cplx squares = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 +
                       a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011;
  const cplx pairs = a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111 +
                     a000 * a100 * a011 * a111 + a001 * a010 * a101 * a110 +
                     a001 * a100 * a011 * a110 + a010 * a100 * a011 * a101;
  const cplx quads = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111;
  return squares - 2.0 * pairs + 4.0 * quads;
}

TriClass classify_tripartite_qubit(const PureState& state, double tol, double rank_tol) {
  if (state.dims() != std::vector<int>{2, 2, 2}) {
    throw std::invalid_argument("classify_tripartite_qubit: need dims (2,2,2)");
  }
  TriClass c;
  for (int k = 0; k < 3; ++k) c.marginal_ranks[k] = numerical_rank(party_flattening(state, k), rank_tol);
  c.hyperdeterminant_abs = std::abs(hyperdeterminant(state.amps()));
  c.threshold = tol * std::pow(state.norm(), 4);
  const auto& mr = c.marginal_ranks;
  if (mr[0] == 1 && mr[1] == 1 && mr[2] == 1) {
    c.label = TriLabel::PRODUCT;
  } else if (mr[0] == 1) {
    c.label = TriLabel::BISEP_A_BC;
  } else if (mr[1] == 1) {
    c.label = TriLabel::BISEP_B_AC;
  } else if (mr[2] == 1) {
    c.label = TriLabel::BISEP_C_AB;
  } else {
    c.label = c.hyperdeterminant_abs > c.threshold ? TriLabel::GHZ_CLASS : TriLabel::W_CLASS;
  }
  return c;
}

PureState factor_state(const SingularFrame& frame, FrameSide side) {
  const MatrixXc& basis = side == FrameSide::U ? frame.u : frame.v;
  const int rows = side == FrameSide::U ? frame.dims[0] : frame.dims[2];
  const int cols = side == FrameSide::U ? frame.dims[1] : frame.dims[3];
  // amps[k*rows*cols + i*cols + j] = basis(i*cols + j, k)
  const MatrixXc cols_r = basis.leftCols(frame.r);
  return PureState({frame.r, rows, cols}, vectorize(cols_r));
}

std::optional<InequivalenceProof> invariant_screen(const PureState& s1, const PureState& s2,
                                                   const Bipartition& cut, double rtol) {
  if (s1.dims() != s2.dims()) throw std::invalid_argument("invariant_screen: dims mismatch");
  if (s1.parties() == 4) {
    for (const auto& c : Bipartition::all()) {
      const int r1 = numerical_rank(flatten_bipartition(s1, c), rtol);
      const int r2 = numerical_rank(flatten_bipartition(s2, c), rtol);
      if (r1 != r2) {
        return InequivalenceProof{InvariantKind::BIPARTITION_RANK, c.name(), std::to_string(r1),
                                  std::to_string(r2)};
      }
    }
  }
  for (int k = 0; k < s1.parties(); ++k) {
    const int r1 = numerical_rank(party_flattening(s1, k), rtol);
    const int r2 = numerical_rank(party_flattening(s2, k), rtol);
    if (r1 != r2) {
      return InequivalenceProof{InvariantKind::MARGINAL_RANK, "party " + std::to_string(k + 1),
                                std::to_string(r1), std::to_string(r2)};
    }
  }
  const bool qubits =
      std::all_of(s1.dims().begin(), s1.dims().end(), [](int d) { return d == 2; });
  if (s1.parties() != 4 || !qubits) return std::nullopt;
  const SingularFrame f1 = singular_frame(s1, cut, rtol);
  const SingularFrame f2 = singular_frame(s2, cut, rtol);
  if (f1.r != 2 || f2.r != 2) return std::nullopt;
  for (FrameSide side : {FrameSide::U, FrameSide::V}) {
    const TriClass c1 = classify_tripartite_qubit(factor_state(f1, side), 1e-9, rtol);
    const TriClass c2 = classify_tripartite_qubit(factor_state(f2, side), 1e-9, rtol);
    if (c1.label != c2.label) {
      const std::string name = side == FrameSide::U ? "psi_u" : "psi_v";
      return InequivalenceProof{InvariantKind::TRIPARTITE_CLASS, name + " at " + cut.name(),
                                to_string(c1.label), to_string(c2.label)};
    }
  }
  return std::nullopt;
}

}  // namespace slocc
