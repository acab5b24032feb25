#pragma once

#include "slocc/tensorops.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slocc {

/// Pure state of 2, 3 or 4 parties. Amplitudes are ordered lexicographically
/// by (i1, ..., iN) with the last index varying fastest, so for qubits
/// amps[k] is the amplitude of the bit string of k.
class PureState {
 public:
  PureState(std::vector<int> dims, VectorXc amps);

  const std::vector<int>& dims() const { return dims_; }
  const VectorXc& amps() const { return amps_; }
  int parties() const { return static_cast<int>(dims_.size()); }
  Eigen::Index size() const { return amps_.size(); }
  double norm() const { return amps_.norm(); }

  PureState normalized() const { return PureState(dims_, amps_ / amps_.norm()); }
  PureState scaled(cplx c) const { return PureState(dims_, c * amps_); }

  // Linear index of a multi-index (last index fastest).
  Eigen::Index index(std::span<const int> multi) const;

 private:
  std::vector<int> dims_;
  VectorXc amps_;
};

/// Three-party state as a tuple of slices: slice k is the I1 x I2 matrix
/// gamma_k(i, j) = psi(k, i, j).
struct TripartiteState {
  std::vector<MatrixXc> slices;

  int first_dim() const { return static_cast<int>(slices.size()); }
  Eigen::Index rows() const { return slices.empty() ? 0 : slices.front().rows(); }
  Eigen::Index cols() const { return slices.empty() ? 0 : slices.front().cols(); }

  // r x (I1*I2) matrix whose row k is flatten_rows(slice k).
  MatrixXc coefficient_matrix() const;
  // Same data as a three-party pure state of dims (r, I1, I2). Requires r >= 2.
  PureState to_state() const;
  static TripartiteState from_state(const PureState& s);
  static TripartiteState from_coefficient_matrix(const MatrixXc& g, Eigen::Index rows,
                                                 Eigen::Index cols);
};

/// Two ordered pairs of parties (0-based). Within-pair order fixes the row and
/// column multi-index layout of the flattened matrix.
struct Bipartition {
  std::array<int, 2> left{0, 1};
  std::array<int, 2> right{2, 3};

  static Bipartition cut_12_34() { return {{0, 1}, {2, 3}}; }
  static Bipartition cut_13_24() { return {{0, 2}, {1, 3}}; }
  static Bipartition cut_14_23() { return {{0, 3}, {1, 2}}; }
  static std::array<Bipartition, 3> all() { return {cut_12_34(), cut_13_24(), cut_14_23()}; }

  // Accepts "12-34", "13-24", "14-23" (any valid pairing of 1..4).
  static Bipartition parse(std::string_view text);
  std::string name() const;
  void validate() const;
  std::array<int, 4> order() const { return {left[0], left[1], right[0], right[1]}; }

  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

/// One invertible square operator per party.
struct LocalOperatorTuple {
  std::vector<MatrixXc> ops;

  static LocalOperatorTuple identity(const std::vector<int>& dims);
  bool invertible(double tol = kDefaultRankTol) const;
};

/// Exact amplitude tensors of the named example states:
/// ghz4, w4, ghz3, w3, cluster1d (no parameters) and psi_abcd, psi2_abcd
/// (four complex parameters a, b, c, d, used literally without renormalization).
PureState make_state(std::string_view name, std::span<const cplx> params = {});
std::vector<std::string> catalog_names();

PureState apply_local_ops(const PureState& state, const LocalOperatorTuple& ops);

// Contracts a single operator on one party.
PureState apply_on_party(const PureState& state, int party, const MatrixXc& op);

/// True iff s1 = c * s2 for a nonzero scalar c, within tol relative to the
/// largest amplitude. Mismatched dims give false.
bool states_proportional(const PureState& s1, const PureState& s2, double tol = 1e-10);

/// Reduced density matrix of one party.
MatrixXc marginal(const PureState& state, int party);

/// Matrix whose rows are indexed by the given party and columns by the rest.
MatrixXc party_flattening(const PureState& state, int party);

}  // namespace slocc
