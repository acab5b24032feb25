#pragma once

// Random fixtures shared by the unit tests.

#include "slocc/states.hpp"

#include <random>
#include <vector>

namespace slocc::testing {

inline MatrixXc random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXc m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(n(rng), n(rng));
  }
  return m;
}

inline VectorXc random_vector(Eigen::Index n, std::mt19937_64& rng) {
  return random_matrix(n, 1, rng).col(0);
}

inline PureState random_state(const std::vector<int>& dims, std::mt19937_64& rng) {
  Eigen::Index size = 1;
  for (int d : dims) size *= d;
  return PureState(dims, random_vector(size, rng).normalized());
}

inline PureState qubit_state(std::initializer_list<std::pair<int, cplx>> terms, int parties) {
  VectorXc amps = VectorXc::Zero(Eigen::Index{1} << parties);
  for (const auto& [index, value] : terms) amps(index) = value;
  return PureState(std::vector<int>(parties, 2), amps);
}

}  // namespace slocc::testing
