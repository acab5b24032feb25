#include "slocc/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace slocc {

namespace {

MatrixXc haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXc z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = cplx(normal(rng), normal(rng));
  }
  const QrResult<cplx> f = qr(z);
  MatrixXc q = f.q;
  for (Eigen::Index i = 0; i < n; ++i) q.col(i) *= detail::unit_phase(f.r(i, i));
  return q;
}

PureState psi2(double a, double b, double c, double d) {
  const std::vector<cplx> p{a, b, c, d};
  return make_state("psi2_abcd", p);
}

PureState psi_abcd(double a, double b, double c, double d) {
  const std::vector<cplx> p{a, b, c, d};
  return make_state("psi_abcd", p);
}

bool close(cplx x, cplx y, double scale, double tol) { return std::abs(x - y) <= tol * scale; }

}  // namespace

MatrixXc random_invertible(int n, double cap, std::mt19937_64& rng) {
  if (!(cap >= 1.0)) throw std::invalid_argument("random_invertible: cap must be >= 1");
  std::uniform_real_distribution<double> uniform(0.0, std::log(cap));
  VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(uniform(rng));
  if (n >= 2) {
    s(0) = 1.0;
    s(n - 1) = cap;
  }
  const MatrixXc left = haar_unitary(n, rng);
  const MatrixXc right = haar_unitary(n, rng);
  return left * s.cast<cplx>().asDiagonal() * right;
}

std::tuple<PureState, PureState, LocalOperatorTuple> random_orbit_case(
    const std::vector<int>& dims, std::uint64_t seed, double condition_cap) {
  if (!(condition_cap > 1.0)) throw std::invalid_argument("random_orbit_case: cap must be > 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  VectorXc amps(total);
  for (auto& z : amps) z = cplx(normal(rng), normal(rng));
  const PureState state = PureState(dims, amps).normalized();
  LocalOperatorTuple ops;
  for (int d : dims) ops.ops.push_back(random_invertible(d, condition_cap, rng));
  PureState image = apply_local_ops(state, ops);
  return {state, image, ops};
}

std::pair<SingularFrame, SingularFrame> cluster_example_frames(double a, double b, double c,
                                                               double d) {
  const std::array<int, 4> dims{2, 2, 2, 2};
  const Bipartition cut = Bipartition::cut_12_34();
  VectorXc u_diag(4);
  u_diag << 1.0, -1.0, -1.0, 1.0;
  MatrixXc v = MatrixXc::Zero(4, 4);
  v(0, 0) = v(1, 3) = v(2, 2) = v(3, 1) = 1.0;
  VectorXd lambda(4);
  lambda << a, b, c, d;
  VectorXc up_diag(4);
  up_diag << 1.0, 1.0, 1.0, -1.0;
  const SingularFrame source = make_frame(u_diag.asDiagonal(), lambda, v, cut, dims);
  const SingularFrame target = make_frame(up_diag.asDiagonal(), VectorXd::Constant(4, 0.5),
                                          MatrixXc::Identity(4, 4), cut, dims);
  return {source, target};
}

MatrixXc cluster_solution_p(const ClusterSolution& s, double a, double b, double c, double d) {
  (void)b;
  (void)d;
  const cplx x = s.alpha;
  const cplx gamma = -s.alpha * s.beta;
  const cplx y = -c * s.beta / a;
  const cplx z = -c * gamma / a;
  MatrixXc p = MatrixXc::Zero(4, 4);
  p(0, 0) = s.p11;
  p(0, 2) = x * s.p11;
  p(1, 1) = s.p22;
  p(1, 3) = -x * s.p22;
  p(2, 0) = -y * s.p11;
  p(2, 2) = -z * s.p11;
  p(3, 1) = -y * s.p22;
  p(3, 3) = z * s.p22;
  return p;
}

std::optional<ClusterSolution> fit_cluster_solution(const MatrixXc& p, double a, double b,
                                                    double c, double d, double rel_tol) {
  if (p.rows() != 4 || p.cols() != 4) return std::nullopt;
  const double scale = p.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return std::nullopt;
  const cplx p11 = p(0, 0), p22 = p(1, 1);
  if (std::abs(p11) <= rel_tol * scale || std::abs(p22) <= rel_tol * scale) return std::nullopt;
  for (auto [i, j] : {std::pair{0, 1}, {0, 3}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 0}, {3, 2}}) {
    if (std::abs(p(i, j)) > rel_tol * scale) return std::nullopt;
  }
  const cplx alpha = p(0, 2) / p11;
  const cplx y = -p(2, 0) / p11;
  const cplx z = -p(2, 2) / p11;
  if (std::abs(alpha) <= rel_tol || std::abs(y) <= rel_tol) return std::nullopt;
  if (!close(p(1, 3), -alpha * p22, scale, rel_tol) || !close(p(3, 1), -y * p22, scale, rel_tol) ||
      !close(p(3, 3), z * p22, scale, rel_tol)) {
    return std::nullopt;
  }
  const cplx beta = -a * y / c;
  const double beta_sq = a * d / (b * c);
  if (std::abs(beta * beta - beta_sq) > rel_tol * beta_sq) return std::nullopt;
  const cplx gamma = -alpha * beta;
  if (!close(z, -c * gamma / a, std::abs(z), rel_tol)) return std::nullopt;
  return ClusterSolution{p11, p22, alpha, beta};
}

LocalOperatorTuple cluster_solution_operators(const ClusterSolution& s, double a, double b,
                                              double c, double d) {
  (void)d;
  const cplx x = s.alpha;
  const cplx gamma = -s.alpha * s.beta;
  const cplx y = -c * s.beta / a;
  const cplx z = -c * gamma / a;
  MatrixXc a1(2, 2), a2 = MatrixXc::Zero(2, 2), a3(2, 2), a4 = MatrixXc::Zero(2, 2);
  a1 << 1.0, 1.0 / y, 1.0 / x, 1.0 / z;
  a1 *= 0.5;
  a2(0, 0) = 1.0 / s.p11;
  a2(1, 1) = -1.0 / s.p22;
  a3 << 1.0, s.beta, s.alpha, gamma;
  a3 *= 0.5;
  a4(0, 0) = s.p11 / a;
  a4(1, 1) = s.p22 / (b * s.beta);
  return LocalOperatorTuple{{a1, a2, a3, a4}};
}

std::vector<GoldenCase> golden_cases() {
  const double a = 0.6, b = 0.5, c = 0.4, d = 0.3;
  const Bipartition cut = Bipartition::cut_12_34();
  const PureState ghz = make_state("ghz4");
  const PureState cluster = make_state("cluster1d");
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<GoldenCase> cases;
  cases.push_back({"ghz-vs-w", "four-qubit GHZ and W states are inequivalent", ghz,
                   make_state("w4"), cut, Verdict::INEQUIVALENT, 2, VectorXd::Constant(2, h),
                   std::nullopt});
  cases.push_back({"abcd-proportional", "psi_abcd(1,2,3,4) and psi_abcd(2,4,6,8)",
                   psi_abcd(1, 2, 3, 4), psi_abcd(2, 4, 6, 8), cut, Verdict::EQUIVALENT,
                   std::nullopt, std::nullopt, std::nullopt});
  cases.push_back({"abcd-sign-flip", "psi_abcd(1,2,3,4) and psi_abcd(1,2,-3,-4)",
                   psi_abcd(1, 2, 3, 4), psi_abcd(1, 2, -3, -4), cut, Verdict::EQUIVALENT,
                   std::nullopt, std::nullopt, std::nullopt});
  cases.push_back({"cluster-1d-vs-2d", "one- and two-dimensional four-qubit cluster states",
                   cluster, psi2(a, b, c, d), cut, Verdict::EQUIVALENT, 4,
                   VectorXd::Constant(4, 0.5), std::nullopt});
  cases.push_back({"ghz-spectrum", "GHZ decomposition: rank 2, equal singular values", ghz, ghz,
                   cut, Verdict::EQUIVALENT, 2, VectorXd::Constant(2, h), std::nullopt});
  cases.push_back({"cluster-spectrum", "cluster decomposition: rank 4, all singular values 1/2",
                   cluster, cluster, cut, Verdict::EQUIVALENT, 4, VectorXd::Constant(4, 0.5),
                   std::nullopt});
  const ClusterSolution sol{1.0, 1.0, 1.0, std::sqrt(a * d / (b * c))};
  cases.push_back({"cluster-ops", "closed-form operators map psi2(0.6,0.5,0.4,0.3) to the cluster",
                   cluster, psi2(a, b, c, d), cut, Verdict::EQUIVALENT, std::nullopt,
                   std::nullopt, cluster_solution_operators(sol, a, b, c, d)});
  return cases;
}

}  // namespace slocc
