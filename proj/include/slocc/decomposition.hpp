#pragma once

#include "slocc/states.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>

namespace slocc {

/// Full singular frame of a four-party state at one cut:
/// flatten_bipartition(state, cut) == u * [diag(lambda) 0; 0 0] * v^H.
/// Columns 0..r-1 of u and v carry the nonzero singular values; the remaining
/// columns are the orthonormal completions (the complementary directions).
struct SingularFrame {
  MatrixXc u;              // (Ia*Ib) x (Ia*Ib), unitary
  MatrixXc v;              // (Ic*Id) x (Ic*Id), unitary
  VectorXd lambda;         // r positive values, descending
  int r = 0;
  Bipartition cut;
  std::array<int, 4> dims{};  // party dimensions in cut order (a, b, c, d)
  std::optional<std::string> conditioning_warning;

  Eigen::Index rows() const { return u.rows(); }
  Eigen::Index cols() const { return v.rows(); }
  MatrixXc reconstruct() const;
};

/// Two three-party states plus the positive diagonal linking them.
/// Slice k of psi_u is column k of U laid out as an Ia x Ib matrix
/// (entry (i, j) = U(i*Ib + j, k)); likewise psi_v from the columns of V.
struct TripleStateSet {
  TripartiteState psi_u;
  VectorXd psi_lambda;
  TripartiteState psi_v;
};

enum class FrameSide { U, V };

/// (Ia*Ib) x (Ic*Id) matrix with row index ia*Ib + ib and column ic*Id + id.
MatrixXc flatten_bipartition(const PureState& state, const Bipartition& cut);

/// Singular frame at a cut; values in (rtol, 10*rtol] relative to the largest
/// attach a conditioning warning.
SingularFrame singular_frame(const PureState& state, const Bipartition& cut,
                             double rtol = kDefaultRankTol);

TripleStateSet triple_state_set(const SingularFrame& frame);
std::pair<TripleStateSet, SingularFrame> triple_state_set(const PureState& state,
                                                          const Bipartition& cut,
                                                          double rtol = kDefaultRankTol);

// Columns first..first+count-1 of the chosen side, each as a slice.
TripartiteState frame_slices(const SingularFrame& frame, FrameSide side, int first, int count);

/// Slices folded from the completion columns r.. of U (or V); empty when the
/// side has full rank.
TripartiteState complementary_state(const SingularFrame& frame, FrameSide side);

/// Same frame with a new left/right basis; used by callers that supply their
/// own (for example hand-derived) singular vectors.
SingularFrame make_frame(const MatrixXc& u, const VectorXd& lambda, const MatrixXc& v,
                         const Bipartition& cut, const std::array<int, 4>& dims);

}  // namespace slocc
