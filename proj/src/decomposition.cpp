#include "slocc/decomposition.hpp"

#include <sstream>
#include <stdexcept>

namespace slocc {

MatrixXc SingularFrame::reconstruct() const {
  return u.leftCols(r) * lambda.head(r).cast<cplx>().asDiagonal() * v.leftCols(r).adjoint();
}

MatrixXc flatten_bipartition(const PureState& state, const Bipartition& cut) {
  if (state.parties() != 4) {
    throw std::invalid_argument("flatten_bipartition: need a 4-party state, got " +
                                std::to_string(state.parties()));
  }
  cut.validate();
  const auto& d = state.dims();
  const auto o = cut.order();
  const int da = d[o[0]], db = d[o[1]], dc = d[o[2]], dd = d[o[3]];
  MatrixXc m(da * db, dc * dd);
  std::array<int, 4> idx{};
  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < db; ++b) {
      for (int c = 0; c < dc; ++c) {
        for (int e = 0; e < dd; ++e) {
          idx[o[0]] = a;
          idx[o[1]] = b;
          idx[o[2]] = c;
          idx[o[3]] = e;
          m(a * db + b, c * dd + e) = state.amps()(state.index(idx));
        }
      }
    }
  }
  return m;
}

SingularFrame make_frame(const MatrixXc& u, const VectorXd& lambda, const MatrixXc& v,
                         const Bipartition& cut, const std::array<int, 4>& dims) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != dims[0] * dims[1] ||
      v.rows() != dims[2] * dims[3] || lambda.size() > std::min(u.rows(), v.rows())) {
    throw std::invalid_argument("make_frame: inconsistent frame shapes");
  }
  SingularFrame f;
  f.u = u;
  f.v = v;
  f.lambda = lambda;
  f.r = static_cast<int>(lambda.size());
  f.cut = cut;
  f.dims = dims;
  return f;
}

SingularFrame singular_frame(const PureState& state, const Bipartition& cut, double rtol) {
  const MatrixXc m = flatten_bipartition(state, cut);
  const auto o = cut.order();
  const auto& d = state.dims();
  const auto dec = svd(m);
  const int r = numerical_rank(m, rtol);
  SingularFrame f = make_frame(dec.u, dec.sigma.head(r), dec.v, cut,
                               {d[o[0]], d[o[1]], d[o[2]], d[o[3]]});
  for (Eigen::Index i = 0; i < dec.sigma.size(); ++i) {
    const double rel = dec.sigma(i) / dec.sigma(0);
    if (rel > rtol && rel <= 10.0 * rtol) {
      std::ostringstream msg;
      msg << "singular value " << i + 1 << " is " << rel
          << " of the largest, close to the rank threshold " << rtol;
      f.conditioning_warning = msg.str();
    }
  }
  return f;
}

TripartiteState frame_slices(const SingularFrame& frame, FrameSide side, int first, int count) {
  const MatrixXc& basis = side == FrameSide::U ? frame.u : frame.v;
  const int rows = side == FrameSide::U ? frame.dims[0] : frame.dims[2];
  const int cols = side == FrameSide::U ? frame.dims[1] : frame.dims[3];
  TripartiteState t;
  for (int k = first; k < first + count; ++k) {
    const VectorXc col = basis.col(k);
    t.slices.push_back(unflatten(col, rows, cols));
  }
  return t;
}

TripleStateSet triple_state_set(const SingularFrame& frame) {
  return {frame_slices(frame, FrameSide::U, 0, frame.r), frame.lambda,
          frame_slices(frame, FrameSide::V, 0, frame.r)};
}

std::pair<TripleStateSet, SingularFrame> triple_state_set(const PureState& state,
                                                          const Bipartition& cut, double rtol) {
  SingularFrame f = singular_frame(state, cut, rtol);
  TripleStateSet t = triple_state_set(f);
  return {std::move(t), std::move(f)};
}

TripartiteState complementary_state(const SingularFrame& frame, FrameSide side) {
  const int total = static_cast<int>(side == FrameSide::U ? frame.u.cols() : frame.v.cols());
  return frame_slices(frame, side, frame.r, total - frame.r);
}

}  // namespace slocc
