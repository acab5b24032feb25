#include "slocc/states.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace slocc {

namespace {

Eigen::Index product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1},
                         [](Eigen::Index a, int b) { return a * b; });
}

VectorXc basis_combination(const std::vector<int>& dims,
                           std::initializer_list<std::pair<const char*, cplx>> terms) {
  VectorXc v = VectorXc::Zero(product(dims));
  for (const auto& [bits, amp] : terms) {
    Eigen::Index k = 0;
    for (const char* p = bits; *p != '\0'; ++p) k = 2 * k + (*p - '0');
    v(k) += amp;
  }
  return v;
}

// Strides for a tensor with the last index fastest.
std::vector<Eigen::Index> strides_of(const std::vector<int>& dims) {
  std::vector<Eigen::Index> st(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) st[k] = st[k + 1] * dims[k + 1];
  return st;
}

}  // namespace

PureState::PureState(std::vector<int> dims, VectorXc amps)
    : dims_(std::move(dims)), amps_(std::move(amps)) {
  if (dims_.size() < 2 || dims_.size() > 4) {
    throw std::invalid_argument("PureState: need 2 to 4 parties, got " +
                                std::to_string(dims_.size()));
  }
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("PureState: every party dimension must be >= 2");
  }
  if (amps_.size() != product(dims_)) {
    throw std::invalid_argument("PureState: " + std::to_string(amps_.size()) +
                                " amplitudes do not match dims (expected " +
                                std::to_string(product(dims_)) + ")");
  }
  if (!(amps_.norm() > 0.0) || !amps_.allFinite()) {
    throw std::invalid_argument("PureState: amplitudes must be finite and not all zero");
  }
}

Eigen::Index PureState::index(std::span<const int> multi) const {
  if (multi.size() != dims_.size()) throw std::invalid_argument("PureState::index: arity");
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < multi.size(); ++i) {
    if (multi[i] < 0 || multi[i] >= dims_[i]) throw std::out_of_range("PureState::index");
    k = k * dims_[i] + multi[i];
  }
  return k;
}

MatrixXc TripartiteState::coefficient_matrix() const {
  MatrixXc g(first_dim(), rows() * cols());
  for (int k = 0; k < first_dim(); ++k) g.row(k) = flatten_rows(slices[k]).transpose();
  return g;
}

PureState TripartiteState::to_state() const {
  const MatrixXc g = coefficient_matrix();
  const MatrixXc gt = g.transpose();
  return PureState({first_dim(), static_cast<int>(rows()), static_cast<int>(cols())},
                   vectorize(gt));
}

TripartiteState TripartiteState::from_state(const PureState& s) {
  if (s.parties() != 3) throw std::invalid_argument("TripartiteState: need a 3-party state");
  const auto& d = s.dims();
  return from_coefficient_matrix(unflatten(s.amps(), d[0], d[1] * d[2]), d[1], d[2]);
}

TripartiteState TripartiteState::from_coefficient_matrix(const MatrixXc& g, Eigen::Index rows,
                                                         Eigen::Index cols) {
  if (g.cols() != rows * cols) throw std::invalid_argument("TripartiteState: slice shape");
  TripartiteState t;
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    const VectorXc row = g.row(k).transpose();
    t.slices.push_back(unflatten(row, rows, cols));
  }
  return t;
}

Bipartition Bipartition::parse(std::string_view text) {
  if (text.size() != 5 || text[2] != '-') {
    throw std::invalid_argument("invalid cut '" + std::string(text) + "' (expected e.g. 12-34)");
  }
  auto digit = [&](char c) {
    if (c < '1' || c > '4') {
      throw std::invalid_argument("invalid cut '" + std::string(text) + "'");
    }
    return c - '1';
  };
  Bipartition b{{digit(text[0]), digit(text[1])}, {digit(text[3]), digit(text[4])}};
  b.validate();
  return b;
}

std::string Bipartition::name() const {
  std::string s;
  s += static_cast<char>('1' + left[0]);
  s += static_cast<char>('1' + left[1]);
  s += '-';
  s += static_cast<char>('1' + right[0]);
  s += static_cast<char>('1' + right[1]);
  return s;
}

void Bipartition::validate() const {
  std::array<int, 4> o = order();
  std::sort(o.begin(), o.end());
  if (o != std::array<int, 4>{0, 1, 2, 3}) {
    throw std::invalid_argument("cut " + name() + " must use each of the four parties once");
  }
}

LocalOperatorTuple LocalOperatorTuple::identity(const std::vector<int>& dims) {
  LocalOperatorTuple t;
  for (int d : dims) t.ops.push_back(MatrixXc::Identity(d, d));
  return t;
}

bool LocalOperatorTuple::invertible(double tol) const {
  for (const auto& a : ops) {
    if (a.rows() != a.cols() || a.size() == 0) return false;
    const VectorXd s = singular_values(a);
    if (!(s(s.size() - 1) > tol * s(0))) return false;
  }
  return true;
}

std::vector<std::string> catalog_names() {
  return {"ghz4", "w4", "ghz3", "w3", "psi_abcd", "cluster1d", "psi2_abcd"};
}

PureState make_state(std::string_view name, std::span<const cplx> params) {
  const double h = 1.0 / std::sqrt(2.0);
  const bool parameterized = name == "psi_abcd" || name == "psi2_abcd";
  if (parameterized) {
    if (params.size() != 4) {
      throw std::invalid_argument(std::string(name) + " takes 4 parameters, got " +
                                  std::to_string(params.size()));
    }
    if (std::all_of(params.begin(), params.end(), [](cplx z) { return z == 0.0; })) {
      throw std::invalid_argument(std::string(name) + ": parameters are all zero");
    }
  } else if (!params.empty()) {
    throw std::invalid_argument(std::string(name) + " takes no parameters");
  }
  const std::vector<int> q4{2, 2, 2, 2};
  const std::vector<int> q3{2, 2, 2};
  if (name == "ghz4") return PureState(q4, basis_combination(q4, {{"0000", h}, {"1111", h}}));
  if (name == "w4") {
    return PureState(q4, basis_combination(
                             q4, {{"0001", 0.5}, {"0010", 0.5}, {"0100", 0.5}, {"1000", 0.5}}));
  }
  if (name == "ghz3") return PureState(q3, basis_combination(q3, {{"000", h}, {"111", h}}));
  if (name == "w3") {
    const double t = 1.0 / std::sqrt(3.0);
    return PureState(q3, basis_combination(q3, {{"001", t}, {"010", t}, {"100", t}}));
  }
  if (name == "cluster1d") {
    return PureState(q4, basis_combination(q4, {{"0000", 0.5},
                                                {"0101", 0.5},
                                                {"1010", 0.5},
                                                {"1111", -0.5}}));
  }
  if (name == "psi_abcd") {
    const cplx a = params[0], b = params[1], c = params[2], d = params[3];
    return PureState(q4, basis_combination(q4, {{"0000", (a + d) / 2.0},
                                                {"1111", (a + d) / 2.0},
                                                {"0011", (a - d) / 2.0},
                                                {"1100", (a - d) / 2.0},
                                                {"0101", (b + c) / 2.0},
                                                {"1010", (b + c) / 2.0},
                                                {"0110", (b - c) / 2.0},
                                                {"1001", (b - c) / 2.0}}));
  }
  if (name == "psi2_abcd") {
    return PureState(q4, basis_combination(q4, {{"0000", params[0]},
                                                {"0111", -params[1]},
                                                {"1010", -params[2]},
                                                {"1101", params[3]}}));
  }
  throw std::invalid_argument("unknown catalog state '" + std::string(name) + "'");
}

PureState apply_on_party(const PureState& state, int party, const MatrixXc& op) {
  const auto& dims = state.dims();
  if (party < 0 || party >= state.parties()) throw std::invalid_argument("apply: bad party");
  const int d = dims[party];
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("apply: operator for party " + std::to_string(party + 1) +
                                " is " + std::to_string(op.rows()) + "x" +
                                std::to_string(op.cols()) + ", expected " + std::to_string(d) +
                                "x" + std::to_string(d));
  }
  const auto st = strides_of(dims);
  const Eigen::Index inner = st[party];
  const Eigen::Index outer = state.size() / (inner * d);
  const VectorXc& in = state.amps();
  VectorXc out = VectorXc::Zero(in.size());
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const cplx a = op(i, j);
        if (a == 0.0) continue;
        const Eigen::Index dst = (o * d + i) * inner;
        const Eigen::Index src = (o * d + j) * inner;
        out.segment(dst, inner) += a * in.segment(src, inner);
      }
    }
  }
  if (!(out.norm() > 0.0)) {
    throw std::domain_error("apply: local operator annihilates the state");
  }
  return PureState(dims, std::move(out));
}

PureState apply_local_ops(const PureState& state, const LocalOperatorTuple& ops) {
  if (static_cast<int>(ops.ops.size()) != state.parties()) {
    throw std::invalid_argument("apply_local_ops: " + std::to_string(ops.ops.size()) +
                                " operators for a " + std::to_string(state.parties()) +
                                "-party state");
  }
  PureState s = state;
  for (int k = 0; k < state.parties(); ++k) s = apply_on_party(s, k, ops.ops[k]);
  return s;
}

bool states_proportional(const PureState& s1, const PureState& s2, double tol) {
  if (s1.dims() != s2.dims()) return false;
  const VectorXc& a = s1.amps();
  const VectorXc& b = s2.amps();
  const cplx c = b.dot(a) / b.squaredNorm();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), (c * b).cwiseAbs().maxCoeff());
  return (a - c * b).cwiseAbs().maxCoeff() <= tol * scale;
}

MatrixXc party_flattening(const PureState& state, int party) {
  const auto& dims = state.dims();
  const auto st = strides_of(dims);
  const int d = dims[party];
  const Eigen::Index rest = state.size() / d;
  MatrixXc m(d, rest);
  const Eigen::Index inner = st[party];
  const Eigen::Index outer = rest / inner;
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < d; ++i) {
      m.row(i).segment(o * inner, inner) =
          state.amps().segment((o * d + i) * inner, inner).transpose();
    }
  }
  return m;
}

MatrixXc marginal(const PureState& state, int party) {
  const MatrixXc m = party_flattening(state, party);
  return m * m.adjoint();
}

}  // namespace slocc
