#include "slocc/solver.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace slocc {

namespace {

// The scaled frames only precondition the search (the result is polished in
// the original frames), so a loose balance is enough.
constexpr int kBalanceSweeps = 5000;
constexpr double kBalanceTol = 1e-5;
// Singular values closer than this (relative to the largest) count as one
// degenerate group when building starts in scaled frames.
constexpr double kDegenerateGap = 1e-3;

// Square unknown block stored column-major inside the parameter vector.
struct Block {
  Eigen::Index offset = 0;
  int size = 0;
};

// Shape of one realigned matrix (i1^2 x i2^2).
struct SideShape {
  int rows = 0;
  int cols = 0;
};

// Linear map theta -> stacked vec(realign(...)) for each side, plus the square
// blocks that must stay invertible. blocks[0] is the block whose Frobenius
// norm is pinned to one.
struct RankOneProblem {
  MatrixXc map;
  std::vector<SideShape> sides;
  std::vector<Block> blocks;
};

struct RefineOptions {
  int max_iterations = 500;
  double tol = 1e-9;
  double barrier_weight = 0.1;
  int barrier_iterations = 60;
  double barrier_decay = 0.7;
  int stall_window = 40;
};

struct RefineResult {
  VectorXc theta;
  double residual = 0.0;
  int iterations = 0;
};

MatrixXc block_of(const VectorXc& theta, const Block& b) {
  return fold(theta.segment(b.offset, Eigen::Index{b.size} * b.size), b.size, b.size);
}

double rank_one_ratio(const MatrixXc& m) {
  const VectorXd s = singular_values(m);
  if (s.size() < 2) return 0.0;
  if (!(s(0) > 0.0)) return 1.0;
  return s(1) / s(0);
}

double problem_residual(const RankOneProblem& prob, const VectorXc& theta) {
  const VectorXc y = prob.map * theta;
  double total = 0.0;
  Eigen::Index off = 0;
  for (const auto& side : prob.sides) {
    const Eigen::Index len = Eigen::Index{side.rows} * side.cols;
    total += rank_one_ratio(fold(y.segment(off, len), side.rows, side.cols));
    off += len;
  }
  return total;
}

double worst_conditioning(const RankOneProblem& prob, const VectorXc& theta) {
  double worst = 1.0;
  for (const auto& b : prob.blocks) {
    const VectorXd s = singular_values(block_of(theta, b));
    worst = std::min(worst, s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0);
  }
  return worst;
}

void normalize_theta(const RankOneProblem& prob, VectorXc& theta) {
  const Block& p = prob.blocks.front();
  const double s = theta.segment(p.offset, Eigen::Index{p.size} * p.size).norm();
  if (s > 0.0) theta /= s;
}

// Best rank-one factors a, b with a * b^T ~ R.
std::pair<VectorXc, VectorXc> top_factors(const MatrixXc& r) {
  Eigen::JacobiSVD<MatrixXc> dec(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double root = std::sqrt(dec.singularValues()(0));
  return {root * dec.matrixU().col(0), root * dec.matrixV().col(0).conjugate()};
}

// Alternating rank-one projection: replace each side by its best rank-one
// approximation and solve the linear least-squares problem for theta.
void projection_sweeps(const RankOneProblem& prob,
                       const Eigen::CompleteOrthogonalDecomposition<MatrixXc>& cod, int sweeps,
                       VectorXc& theta) {
  for (int it = 0; it < sweeps; ++it) {
    const VectorXc y = prob.map * theta;
    VectorXc target(y.size());
    Eigen::Index off = 0;
    for (const auto& side : prob.sides) {
      const Eigen::Index len = Eigen::Index{side.rows} * side.cols;
      const auto [a, b] = top_factors(fold(y.segment(off, len), side.rows, side.cols));
      target.segment(off, len) = vectorize(a * b.transpose());
      off += len;
    }
    theta = cod.solve(target);
    normalize_theta(prob, theta);
  }
}

// Levenberg-Marquardt on the bilinear system map*theta = vec(a_s b_s^T) for
// every side s, with ||P||_F = 1 enforced by a tangent row and rescaling, and
// a decaying barrier sqrt(w) * vec(B^{-1}) keeping the blocks away from
// singular matrices.
RefineResult refine(const RankOneProblem& prob, VectorXc theta, const RefineOptions& opt) {
  const Eigen::Index n_theta = theta.size();
  const Eigen::Index n_fit = prob.map.rows();
  normalize_theta(prob, theta);

  std::vector<VectorXc> left, right;
  {
    const VectorXc y = prob.map * theta;
    Eigen::Index off = 0;
    for (const auto& side : prob.sides) {
      const Eigen::Index len = Eigen::Index{side.rows} * side.cols;
      auto [a, b] = top_factors(fold(y.segment(off, len), side.rows, side.cols));
      left.push_back(std::move(a));
      right.push_back(std::move(b));
      off += len;
    }
  }
  Eigen::Index n_factor = 0;
  for (const auto& side : prob.sides) n_factor += side.rows + side.cols;
  Eigen::Index n_barrier = 0;
  for (const auto& b : prob.blocks) n_barrier += Eigen::Index{b.size} * b.size;

  auto fit_residual = [&](const VectorXc& th, const std::vector<VectorXc>& a,
                          const std::vector<VectorXc>& b) {
    VectorXc f = prob.map * th;
    Eigen::Index off = 0;
    for (std::size_t s = 0; s < prob.sides.size(); ++s) {
      const Eigen::Index len = Eigen::Index{prob.sides[s].rows} * prob.sides[s].cols;
      f.segment(off, len) -= vectorize(a[s] * b[s].transpose());
      off += len;
    }
    return f;
  };
  auto cost = [&](const VectorXc& th, const std::vector<VectorXc>& a,
                  const std::vector<VectorXc>& b, double w) {
    double c = fit_residual(th, a, b).squaredNorm();
    if (w > 0.0) {
      for (const auto& blk : prob.blocks) c += w * block_of(th, blk).inverse().squaredNorm();
    }
    return c;
  };

  double mu = 1e-3;
  RefineResult out{theta, problem_residual(prob, theta), 0};
  // Stall detection after the barrier phase: the residual must halve every
  // stall_window iterations.
  double checkpoint = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double w = it < opt.barrier_iterations && opt.barrier_weight > 0.0
                         ? opt.barrier_weight * std::pow(opt.barrier_decay, it)
                         : 0.0;
    const Eigen::Index n_rows = n_fit + 1 + (w > 0.0 ? n_barrier : 0);
    MatrixXc jac = MatrixXc::Zero(n_rows, n_theta + n_factor);
    VectorXc f = VectorXc::Zero(n_rows);
    jac.topLeftCorner(n_fit, n_theta) = prob.map;
    f.head(n_fit) = fit_residual(theta, left, right);

    Eigen::Index row = 0, col = n_theta;
    for (std::size_t s = 0; s < prob.sides.size(); ++s) {
      const int rs = prob.sides[s].rows, cs = prob.sides[s].cols;
      const Eigen::Index len = Eigen::Index{rs} * cs;
      jac.block(row, col, len, rs) = -kron(right[s], MatrixXc::Identity(rs, rs));
      jac.block(row, col + rs, len, cs) = -kron(MatrixXc::Identity(cs, cs), left[s]);
      row += len;
      col += rs + cs;
    }
    const Block& pb = prob.blocks.front();
    const Eigen::Index p_len = Eigen::Index{pb.size} * pb.size;
    jac.block(n_fit, pb.offset, 1, p_len) = theta.segment(pb.offset, p_len).adjoint();
    if (w > 0.0) {
      const double sw = std::sqrt(w);
      Eigen::Index brow = n_fit + 1;
      for (const auto& blk : prob.blocks) {
        const Eigen::Index len = Eigen::Index{blk.size} * blk.size;
        const MatrixXc inv = block_of(theta, blk).inverse();
        jac.block(brow, blk.offset, len, len) = -sw * kron(MatrixXc(inv.transpose()), inv);
        f.segment(brow, len) = sw * vectorize(inv);
        brow += len;
      }
    }

    const MatrixXc jh = jac.adjoint();
    MatrixXc h = jh * jac;
    h.diagonal().array() += mu;
    const VectorXc delta = -h.ldlt().solve(jh * f);

    VectorXc theta2 = theta + delta.head(n_theta);
    const double scale = theta2.segment(pb.offset, p_len).norm();
    if (scale > 0.0 && std::isfinite(scale)) {
      theta2 /= scale;
      std::vector<VectorXc> left2 = left, right2 = right;
      Eigen::Index c2 = n_theta;
      for (std::size_t s = 0; s < prob.sides.size(); ++s) {
        const int rs = prob.sides[s].rows, cs = prob.sides[s].cols;
        left2[s] = (left[s] + delta.segment(c2, rs)) / scale;
        right2[s] = right[s] + delta.segment(c2 + rs, cs);
        c2 += rs + cs;
      }
      const double c_new = cost(theta2, left2, right2, w);
      if (std::isfinite(c_new) && c_new < cost(theta, left, right, w)) {
        theta = std::move(theta2);
        left = std::move(left2);
        right = std::move(right2);
        mu = std::max(mu / 3.0, 1e-12);
      } else {
        mu *= 4.0;
      }
    } else {
      mu *= 4.0;
    }

    out.theta = theta;
    out.residual = problem_residual(prob, theta);
    out.iterations = it + 1;
    if (w == 0.0 && (out.residual < opt.tol || mu > 1e12)) break;
    if (w == 0.0 && opt.stall_window > 0 && (it + 1) % opt.stall_window == 0) {
      if (out.residual > 0.5 * checkpoint) break;
      checkpoint = out.residual;
    }
  }
  return out;
}

MatrixXc haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXc z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = cplx(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<MatrixXc> dec(z);
  MatrixXc q = dec.householderQ() * MatrixXc::Identity(n, n);
  const MatrixXc r = dec.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) q.col(i) *= detail::unit_phase(r(i, i));
  return q;
}

// Random start: Haar-unitary normalized block, identity on the other square
// blocks, zero coupling blocks.
VectorXc random_start(const RankOneProblem& prob, Eigen::Index n_theta, std::mt19937_64& rng) {
  VectorXc theta = VectorXc::Zero(n_theta);
  for (std::size_t k = 0; k < prob.blocks.size(); ++k) {
    const Block& b = prob.blocks[k];
    const MatrixXc m = k == 0 ? haar_unitary(b.size, rng) : MatrixXc::Identity(b.size, b.size);
    theta.segment(b.offset, Eigen::Index{b.size} * b.size) = vectorize(m);
  }
  normalize_theta(prob, theta);
  return theta;
}

// ---------------------------------------------------------------------------
// Four-party layout: theta = (vec P, vec Y, vec Pbar, vec Z, vec Qbar).

struct FourLayout {
  int r = 0, m = 0, n = 0;
  Eigen::Index p = 0, y = 0, p_bar = 0, z = 0, q_bar = 0, total = 0;

  FourLayout(int r_, int m_, int n_) : r(r_), m(m_), n(n_) {
    p = 0;
    y = p + Eigen::Index{r} * r;
    p_bar = y + Eigen::Index{r} * (m - r);
    z = p_bar + Eigen::Index{m - r} * (m - r);
    q_bar = z + Eigen::Index{n - r} * r;
    total = q_bar + Eigen::Index{n - r} * (n - r);
  }

  CandidatePair unpack(const VectorXc& th, const VectorXd& lam, const VectorXd& lam_p) const {
    CandidatePair c;
    c.pt.p = fold(th.segment(p, Eigen::Index{r} * r), r, r);
    c.pt.y = MatrixXc(r, m - r);
    if (m > r) c.pt.y = fold(th.segment(y, Eigen::Index{r} * (m - r)), r, m - r);
    c.pt.p_bar = MatrixXc(m - r, m - r);
    if (m > r) c.pt.p_bar = fold(th.segment(p_bar, Eigen::Index{m - r} * (m - r)), m - r, m - r);
    c.qt.q = couple_q(c.pt.p, lam, lam_p);
    c.qt.z = MatrixXc(n - r, r);
    if (n > r) c.qt.z = fold(th.segment(z, Eigen::Index{n - r} * r), n - r, r);
    c.qt.q_bar = MatrixXc(n - r, n - r);
    if (n > r) c.qt.q_bar = fold(th.segment(q_bar, Eigen::Index{n - r} * (n - r)), n - r, n - r);
    return c;
  }

  VectorXc pack(const CandidatePair& c) const {
    VectorXc th(total);
    th.segment(p, Eigen::Index{r} * r) = vectorize(c.pt.p);
    if (m > r) {
      th.segment(y, Eigen::Index{r} * (m - r)) = vectorize(c.pt.y);
      th.segment(p_bar, Eigen::Index{m - r} * (m - r)) = vectorize(c.pt.p_bar);
    }
    if (n > r) {
      th.segment(z, Eigen::Index{n - r} * r) = vectorize(c.qt.z);
      th.segment(q_bar, Eigen::Index{n - r} * (n - r)) = vectorize(c.qt.q_bar);
    }
    return th;
  }
};

// Start for operator-scaled frames. Two scaled states in one orbit differ by
// local unitaries, so there Pt and Qt are unitary up to a scalar: the coupling
// blocks vanish and P commutes with Lambda. P is drawn block-diagonal Haar over
// the groups of equal singular values, Pbar and Qbar Haar, Y = Z = 0.
VectorXc spectral_unitary_start(const SingularFrame& f, const FourLayout& lay,
                                std::mt19937_64& rng) {
  MatrixXc p = MatrixXc::Zero(lay.r, lay.r);
  for (int i = 0; i < lay.r;) {
    int j = i + 1;
    while (j < lay.r && std::abs(f.lambda(j) - f.lambda(i)) <= kDegenerateGap * f.lambda(0)) ++j;
    p.block(i, i, j - i, j - i) = haar_unitary(j - i, rng);
    i = j;
  }
  CandidatePair c;
  c.pt.p = p;
  c.pt.y = MatrixXc::Zero(lay.r, lay.m - lay.r);
  c.pt.p_bar = lay.m > lay.r ? haar_unitary(lay.m - lay.r, rng) : MatrixXc(0, 0);
  c.qt.z = MatrixXc::Zero(lay.n - lay.r, lay.r);
  c.qt.q_bar = lay.n > lay.r ? haar_unitary(lay.n - lay.r, rng) : MatrixXc(0, 0);
  return lay.pack(c);
}

void check_frames(const SingularFrame& f, const SingularFrame& fp) {
  if (f.dims != fp.dims) throw std::invalid_argument("solve_ptilde: frames have different dims");
  if (f.r != fp.r) {
    throw std::invalid_argument("solve_ptilde: frames have different ranks (" +
                                std::to_string(f.r) + " vs " + std::to_string(fp.r) + ")");
  }
}

RankOneProblem four_party_problem(const SingularFrame& f, const SingularFrame& fp,
                                  const FourLayout& lay) {
  const auto& d = f.dims;
  const int ru = d[0] * d[0], cu = d[1] * d[1], rv = d[2] * d[2], cv = d[3] * d[3];
  RankOneProblem prob;
  prob.sides = {{ru, cu}, {rv, cv}};
  prob.map = MatrixXc::Zero(ru * cu + rv * cv, lay.total);
  const MatrixXc up_h = fp.u.adjoint();
  const MatrixXc vp_h = fp.v.adjoint();
  for (Eigen::Index k = 0; k < lay.total; ++k) {
    VectorXc e = VectorXc::Zero(lay.total);
    e(k) = 1.0;
    const CandidatePair c = lay.unpack(e, f.lambda, fp.lambda);
    const MatrixXc xu = f.u * c.pt.assembled() * up_h;
    const MatrixXc xv = f.v * c.qt.assembled() * vp_h;
    prob.map.col(k).head(ru * cu) = vectorize(realign(xu, d[0], d[1]));
    prob.map.col(k).tail(rv * cv) = vectorize(realign(xv, d[2], d[3]));
  }
  prob.blocks.push_back({lay.p, lay.r});
  if (lay.m > lay.r) prob.blocks.push_back({lay.p_bar, lay.m - lay.r});
  if (lay.n > lay.r) prob.blocks.push_back({lay.q_bar, lay.n - lay.r});
  return prob;
}

PureState frame_state(const SingularFrame& f) {
  const MatrixXc m = f.reconstruct();
  return PureState({f.dims[0], f.dims[1], f.dims[2], f.dims[3]}, flatten_rows(m));
}

// theta for (frame, frame_prime) read off from the unstructured pair
// X_u, X_v; the V side is rescaled so that its leading block equals couple_q(P).
VectorXc theta_from_maps(const MatrixXc& xu, const MatrixXc& xv, const SingularFrame& f,
                         const SingularFrame& fp, const FourLayout& lay) {
  const MatrixXc pt = f.u.adjoint() * xu * fp.u;
  MatrixXc qt = f.v.adjoint() * xv * fp.v;
  const MatrixXc q = couple_q(pt.topLeftCorner(lay.r, lay.r), f.lambda, fp.lambda);
  const cplx c = (q.adjoint() * qt.topLeftCorner(lay.r, lay.r)).trace() / q.squaredNorm();
  if (std::abs(c) > 0.0) qt /= c;
  return lay.pack(structured_candidate(pt, qt, lay.r));
}

VectorXc structured_identity_start(const SingularFrame& f, const SingularFrame& fp,
                                   const FourLayout& lay) {
  return theta_from_maps(MatrixXc::Identity(lay.m, lay.m), MatrixXc::Identity(lay.n, lay.n), f,
                         fp, lay);
}

// Runs the restarts on `prob`; `accept` maps a locally converged theta to a
// final verdict (it may refine further) and returns true to stop.
struct SearchStats {
  int restarts_used = 0;
  double best_residual = std::numeric_limits<double>::infinity();
};

using StartFn = std::function<VectorXc(std::mt19937_64&)>;

// Restart 0 runs from first_start; later restarts draw from make_start, or
// from random_start when none is given.
SearchStats run_restarts(const RankOneProblem& prob, const VectorXc& first_start,
                         const SolverConfig& cfg,
                         const std::function<bool(const RefineResult&)>& accept,
                         const StartFn& make_start = {}) {
  SearchStats stats;
  std::optional<Eigen::CompleteOrthogonalDecomposition<MatrixXc>> cod;
  if (cfg.projection_sweeps > 0) cod.emplace(prob.map);
  RefineOptions opt;
  opt.max_iterations = cfg.max_iterations;
  opt.tol = cfg.residual_tol;
  opt.barrier_weight = cfg.invertibility_penalty_weight;
  for (int k = 0; k < cfg.restarts; ++k) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
    VectorXc theta = k == 0       ? first_start
                     : make_start ? make_start(rng)
                                  : random_start(prob, first_start.size(), rng);
    normalize_theta(prob, theta);
    if (cod) projection_sweeps(prob, *cod, cfg.projection_sweeps, theta);
    const RefineResult res = refine(prob, theta, opt);
    stats.restarts_used = k + 1;
    stats.best_residual = std::min(stats.best_residual, res.residual);
    if (res.residual < cfg.residual_tol &&
        worst_conditioning(prob, res.theta) > cfg.invertibility_tol && accept(res)) {
      return stats;
    }
  }
  return stats;
}

}  // namespace

std::string to_string(SolveStatus s) { return s == SolveStatus::FOUND ? "FOUND" : "EXHAUSTED"; }

MatrixXc PTildeCandidate::assembled() const {
  const Eigen::Index r = p.rows(), k = p_bar.rows();
  MatrixXc out = MatrixXc::Zero(r + k, r + k);
  out.topLeftCorner(r, r) = p;
  if (k > 0) {
    out.topRightCorner(r, k) = y;
    out.bottomRightCorner(k, k) = p_bar;
  }
  return out;
}

MatrixXc QTildeCandidate::assembled() const {
  const Eigen::Index r = q.rows(), k = q_bar.rows();
  MatrixXc out = MatrixXc::Zero(r + k, r + k);
  out.topLeftCorner(r, r) = q;
  if (k > 0) {
    out.bottomLeftCorner(k, r) = z;
    out.bottomRightCorner(k, k) = q_bar;
  }
  return out;
}

MatrixXc couple_q(const MatrixXc& p, const VectorXd& lambda, const VectorXd& lambda_prime) {
  if (p.rows() != p.cols() || p.rows() != lambda.size() || lambda.size() != lambda_prime.size()) {
    throw std::invalid_argument("couple_q: P is " + std::to_string(p.rows()) + "x" +
                                std::to_string(p.cols()) + " but the spectra have sizes " +
                                std::to_string(lambda.size()) + " and " +
                                std::to_string(lambda_prime.size()));
  }
  return lambda.cwiseInverse().cast<cplx>().asDiagonal() * p *
         lambda_prime.cast<cplx>().asDiagonal();
}

CandidatePair structured_candidate(const MatrixXc& pt, const MatrixXc& qt, int r) {
  const Eigen::Index m = pt.rows(), n = qt.rows();
  CandidatePair c;
  c.pt.p = pt.topLeftCorner(r, r);
  c.pt.y = pt.topRightCorner(r, m - r);
  c.pt.p_bar = pt.bottomRightCorner(m - r, m - r);
  c.qt.q = qt.topLeftCorner(r, r);
  c.qt.z = qt.bottomLeftCorner(n - r, r);
  c.qt.q_bar = qt.bottomRightCorner(n - r, n - r);
  return c;
}

double residual(const CandidatePair& c, const SingularFrame& frame,
                const SingularFrame& frame_prime) {
  check_frames(frame, frame_prime);
  const auto& d = frame.dims;
  const MatrixXc xu = frame.u * c.pt.assembled() * frame_prime.u.adjoint();
  const MatrixXc xv = frame.v * c.qt.assembled() * frame_prime.v.adjoint();
  return rank_one_ratio(realign(xu, d[0], d[1])) + rank_one_ratio(realign(xv, d[2], d[3]));
}

BalanceResult balance_state(const PureState& state, int max_sweeps, double tol,
                            double max_condition) {
  const int n = state.parties();
  BalanceResult out{false, state.normalized(), LocalOperatorTuple::identity(state.dims()), 0.0, 0};
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double dev = 0.0;
    for (int k = 0; k < n; ++k) {
      const int d = out.state.dims()[k];
      const MatrixXc rho = marginal(out.state, k);
      dev = std::max(dev, (d * rho - MatrixXc::Identity(d, d)).norm());
      Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho);
      const VectorXd w = es.eigenvalues();
      if (!(w(0) > 1e-14 * w(d - 1))) {
        out.deviation = dev;
        out.iterations = sweep;
        return out;  // rank-deficient marginal: no scaling exists
      }
      const double det_root = std::exp(-0.5 * w.array().log().sum() / d);
      const MatrixXc g = es.eigenvectors() * w.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                         es.eigenvectors().adjoint() / det_root;
      out.state = apply_on_party(out.state, k, g).normalized();
      out.ops.ops[k] = g * out.ops.ops[k];
    }
    out.deviation = dev;
    out.iterations = sweep + 1;
    if (dev < tol) {
      out.converged = true;
      break;
    }
  }
  for (const auto& g : out.ops.ops) {
    const VectorXd s = singular_values(g);
    if (!(s(0) < max_condition * s(s.size() - 1))) out.converged = false;
  }
  return out;
}

SolveOutcome solve_ptilde(const SingularFrame& frame, const SingularFrame& frame_prime,
                          const SolverConfig& config) {
  check_frames(frame, frame_prime);
  if (config.restarts < 1 || !(config.residual_tol > 0.0)) {
    throw std::invalid_argument("solve_ptilde: need restarts >= 1 and residual_tol > 0");
  }
  const FourLayout lay(frame.r, static_cast<int>(frame.rows()), static_cast<int>(frame.cols()));
  const RankOneProblem prob = four_party_problem(frame, frame_prime, lay);

  SolveOutcome out;
  auto finish = [&](const VectorXc& theta, int used) {
    out.status = SolveStatus::FOUND;
    out.candidate = lay.unpack(theta, frame.lambda, frame_prime.lambda);
    out.residual = residual(*out.candidate, frame, frame_prime);
    out.restarts_used = used;
    return true;
  };

  // The direct candidate Pt = U^H U', Qt = V^H V' solves identical frames at once.
  const VectorXc start = structured_identity_start(frame, frame_prime, lay);
  {
    VectorXc th = start;
    normalize_theta(prob, th);
    if (problem_residual(prob, th) < config.residual_tol &&
        worst_conditioning(prob, th) > config.invertibility_tol) {
      finish(th, 1);
      return out;
    }
  }

  // Polishes a theta expressed in the original frames and accepts it if it
  // still meets the tolerances there.
  RefineOptions polish;
  polish.max_iterations = 50;
  polish.tol = config.residual_tol;
  polish.barrier_weight = 0.0;
  int restart_counter = 0;
  auto accept_original = [&](VectorXc theta) {
    normalize_theta(prob, theta);
    if (problem_residual(prob, theta) >= config.residual_tol) {
      theta = refine(prob, theta, polish).theta;
    }
    if (problem_residual(prob, theta) < config.residual_tol &&
        worst_conditioning(prob, theta) > config.invertibility_tol) {
      return finish(theta, restart_counter);
    }
    return false;
  };

  std::optional<BalanceResult> b1, b2;
  std::optional<SingularFrame> bf, bfp;
  if (config.balance) {
    b1 = balance_state(frame_state(frame), kBalanceSweeps, kBalanceTol);
    b2 = balance_state(frame_state(frame_prime), kBalanceSweeps, kBalanceTol);
    if (b1->converged && b2->converged) {
      bf = singular_frame(b1->state, Bipartition::cut_12_34());
      bfp = singular_frame(b2->state, Bipartition::cut_12_34());
      if (bf->r != frame.r || bfp->r != frame.r) bf.reset();
    }
  }

  SearchStats stats;
  if (bf) {
    out.balanced = true;
    const RankOneProblem bprob = four_party_problem(*bf, *bfp, lay);
    const auto& s = b1->ops.ops;
    const auto& sp = b2->ops.ops;
    const MatrixXc sl = kron(s[0], s[1]), sr = kron(s[2], s[3]);
    const MatrixXc slp = kron(sp[0], sp[1]), srp = kron(sp[2], sp[3]);
    const MatrixXc sl_inv = sl.inverse(), srp_inv_t = srp.inverse().transpose();
    const MatrixXc sr_t = sr.transpose();
    stats = run_restarts(bprob, structured_identity_start(*bf, *bfp, lay), config,
                         [&](const RefineResult& res) {
                           ++restart_counter;
                           const CandidatePair c = lay.unpack(res.theta, bf->lambda, bfp->lambda);
                           const MatrixXc xu_hat = bf->u * c.pt.assembled() * bfp->u.adjoint();
                           const MatrixXc xv_hat = bf->v * c.qt.assembled() * bfp->v.adjoint();
                           const MatrixXc xu = sl_inv * xu_hat * slp;
                           const MatrixXc xv = sr_t * xv_hat * srp_inv_t;
                           return accept_original(theta_from_maps(xu, xv, frame, frame_prime, lay));
                         },
                         [&](std::mt19937_64& rng) {
                           return spectral_unitary_start(*bf, lay, rng);
                         });
  } else {
    stats = run_restarts(prob, start, config, [&](const RefineResult& res) {
      ++restart_counter;
      return accept_original(res.theta);
    });
  }
  if (out.status == SolveStatus::FOUND) {
    out.restarts_used = stats.restarts_used;
    return out;
  }
  out.residual = stats.best_residual;
  out.restarts_used = stats.restarts_used;
  return out;
}

SingleSidedOutcome solve_single_sided(const MatrixXc& u, const MatrixXc& u_prime, int rho,
                                      int i1, int i2, const SolverConfig& config) {
  const int m = static_cast<int>(u.rows());
  if (u.cols() != m || u_prime.rows() != m || u_prime.cols() != m || m != i1 * i2 || rho < 1 ||
      rho > m) {
    throw std::invalid_argument("solve_single_sided: inconsistent shapes");
  }
  const Eigen::Index n_p = Eigen::Index{rho} * rho;
  const Eigen::Index n_y = Eigen::Index{rho} * (m - rho);
  const Eigen::Index n_pb = Eigen::Index{m - rho} * (m - rho);
  const Eigen::Index total = n_p + n_y + n_pb;
  auto assemble = [&](const VectorXc& th) {
    MatrixXc pt = MatrixXc::Zero(m, m);
    pt.topLeftCorner(rho, rho) = fold(th.head(n_p), rho, rho);
    if (m > rho) {
      pt.topRightCorner(rho, m - rho) = fold(th.segment(n_p, n_y), rho, m - rho);
      pt.bottomRightCorner(m - rho, m - rho) = fold(th.tail(n_pb), m - rho, m - rho);
    }
    return pt;
  };
  auto pack = [&](const MatrixXc& pt) {
    VectorXc th(total);
    th.head(n_p) = vectorize(pt.topLeftCorner(rho, rho));
    if (m > rho) {
      th.segment(n_p, n_y) = vectorize(pt.topRightCorner(rho, m - rho));
      th.tail(n_pb) = vectorize(pt.bottomRightCorner(m - rho, m - rho));
    }
    return th;
  };

  const MatrixXc up_inv = u_prime.inverse();
  RankOneProblem prob;
  prob.sides = {{i1 * i1, i2 * i2}};
  prob.map = MatrixXc::Zero(Eigen::Index{i1} * i1 * i2 * i2, total);
  for (Eigen::Index k = 0; k < total; ++k) {
    VectorXc e = VectorXc::Zero(total);
    e(k) = 1.0;
    prob.map.col(k) = vectorize(realign(MatrixXc(u * assemble(e) * up_inv), i1, i2));
  }
  prob.blocks.push_back({0, rho});
  if (m > rho) prob.blocks.push_back({n_p + n_y, m - rho});

  SingleSidedOutcome out;
  auto finish = [&](const VectorXc& th, int used) {
    out.status = SolveStatus::FOUND;
    out.pt = assemble(th);
    out.x = u * *out.pt * up_inv;
    out.residual = problem_residual(prob, th);
    out.restarts_used = used;
    return true;
  };
  VectorXc start = pack(u.inverse() * u_prime);
  normalize_theta(prob, start);
  if (problem_residual(prob, start) < config.residual_tol &&
      worst_conditioning(prob, start) > config.invertibility_tol) {
    finish(start, 1);
    return out;
  }
  int counter = 0;
  const SearchStats stats = run_restarts(prob, start, config, [&](const RefineResult& res) {
    return finish(res.theta, ++counter);
  });
  out.restarts_used = stats.restarts_used;
  if (out.status != SolveStatus::FOUND) out.residual = stats.best_residual;
  return out;
}

}  // namespace slocc
