#include "slocc/equivalence.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace slocc {

namespace {

// Permutation with SWAP * kron(x, y) = kron(y, x) for x, y of size d.
MatrixXc swap_matrix(int d) {
  MatrixXc s = MatrixXc::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  }
  return s;
}

struct FactorAttempt {
  std::optional<KronFactors<cplx>> factors;
  double sigma_ratio = 1.0;
  bool swapped = false;
};

// Factors k = A (x) B; when that fails for equal factor sizes, reports whether
// k * SWAP would have factored instead.
FactorAttempt factor_or_swap(const MatrixXc& k, int i1, int i2, double tol) {
  FactorAttempt out;
  try {
    out.factors = rank1_kron_factor(k, i1, i2, tol);
    const VectorXd s = singular_values(realign(k, i1, i2));
    out.sigma_ratio = s.size() > 1 ? s(1) / s(0) : 0.0;
    return out;
  } catch (const NotAProductError& e) {
    out.sigma_ratio = e.sigma1() > 0 ? e.sigma2() / e.sigma1() : 1.0;
  }
  if (i1 == i2) {
    try {
      rank1_kron_factor(MatrixXc(k * swap_matrix(i1)), i1, i2, tol);
      out.swapped = true;
    } catch (const NotAProductError&) {
    }
  }
  return out;
}

EquivalenceVerdict inequivalent(InequivalenceProof proof, VerdictDiagnostics diag) {
  EquivalenceVerdict v;
  v.status = Verdict::INEQUIVALENT;
  v.proof = std::move(proof);
  v.diagnostics = std::move(diag);
  return v;
}

EquivalenceVerdict undecided(VerdictDiagnostics diag, std::string note) {
  EquivalenceVerdict v;
  v.status = Verdict::UNDECIDED;
  diag.notes.push_back(std::move(note));
  v.diagnostics = std::move(diag);
  return v;
}

EquivalenceVerdict verified_or_undecided(const PureState& s1, const PureState& s2,
                                         const LocalOperatorTuple& ops, const std::string& cut,
                                         VerdictDiagnostics diag) {
  const LocalOperatorTuple normalized = normalize_operators(ops);
  const VerifyResult vr = verify_equivalence(s1, s2, normalized, diag.verify_tol);
  diag.verify_residual = vr.residual;
  if (!vr.pass) {
    return undecided(std::move(diag),
                     "solver reached a low residual but the recovered operators fail "
                     "state-level verification");
  }
  EquivalenceVerdict v;
  v.status = Verdict::EQUIVALENT;
  v.certificate = Certificate{normalized, vr.scalar, vr.residual, cut};
  v.diagnostics = std::move(diag);
  return v;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::EQUIVALENT: return "EQUIVALENT";
    case Verdict::INEQUIVALENT: return "INEQUIVALENT";
    case Verdict::UNDECIDED: return "UNDECIDED";
  }
  return "?";
}

VerifyResult verify_equivalence(const PureState& s1, const PureState& s2,
                                const LocalOperatorTuple& ops, double tol) {
  VerifyResult out;
  out.residual = std::numeric_limits<double>::infinity();
  if (s1.dims() != s2.dims() || static_cast<int>(ops.ops.size()) != s2.parties()) return out;
  for (int k = 0; k < s2.parties(); ++k) {
    if (ops.ops[k].rows() != s2.dims()[k] || ops.ops[k].cols() != s2.dims()[k]) return out;
  }
  VectorXc image;
  try {
    image = apply_local_ops(s2, ops).amps();
  } catch (const std::exception&) {
    return out;  // the operators annihilate s2
  }
  if (!image.allFinite()) return out;
  out.scalar = image.dot(s1.amps()) / image.squaredNorm();
  out.residual = (out.scalar * image - s1.amps()).norm() / s1.norm();
  out.pass = out.residual <= tol;
  return out;
}

RecoveredOperators recover_local_operators(const SingularFrame& frame,
                                           const SingularFrame& frame_prime,
                                           const CandidatePair& candidate, double factor_tol) {
  const auto& d = frame.dims;
  const MatrixXc xu = frame.u * candidate.pt.assembled() * frame_prime.u.adjoint();
  const MatrixXc xv = frame.v * candidate.qt.assembled() * frame_prime.v.adjoint();
  const MatrixXc left = xu.inverse();
  const MatrixXc right = xv.transpose();
  const auto fu = rank1_kron_factor(left, d[0], d[1], factor_tol);
  const auto fv = rank1_kron_factor(right, d[2], d[3], factor_tol);
  auto ratio = [](const VectorXd& s) { return s.size() > 1 ? s(1) / s(0) : 0.0; };
  RecoveredOperators out;
  out.ops.ops = {fu.b, fu.c, fv.b, fv.c};
  out.sigma_ratio_u = ratio(singular_values(realign(left, d[0], d[1])));
  out.sigma_ratio_v = ratio(singular_values(realign(right, d[2], d[3])));
  return out;
}

LocalOperatorTuple to_party_order(const LocalOperatorTuple& cut_ordered, const Bipartition& cut) {
  const auto o = cut.order();
  LocalOperatorTuple out;
  out.ops.resize(4);
  for (int k = 0; k < 4; ++k) out.ops[o[k]] = cut_ordered.ops[k];
  return out;
}

LocalOperatorTuple normalize_operators(const LocalOperatorTuple& ops) {
  LocalOperatorTuple out = ops;
  if (out.ops.empty()) return out;
  cplx carried{1.0, 0.0};
  for (std::size_t k = 0; k + 1 < out.ops.size(); ++k) {
    MatrixXc& a = out.ops[k];
    const double n = a.norm();
    if (n == 0.0) continue;
    const VectorXc flat = vectorize(a);
    const cplx phase = detail::unit_phase(flat(detail::argmax_abs(flat)));
    a /= n * phase;
    carried *= n * phase;
  }
  out.ops.back() *= carried;
  return out;
}

EquivalenceVerdict check_fourpartite_equiv(const PureState& s1, const PureState& s2,
                                           const Bipartition& cut, const SolverConfig& config,
                                           double rtol, double verify_tol) {
  if (s1.dims() != s2.dims()) throw std::invalid_argument("check: states have different dims");
  if (s1.parties() != 4) throw std::invalid_argument("check: need four-party states");
  cut.validate();

  VerdictDiagnostics diag;
  diag.cut = cut.name();
  diag.rtol = rtol;
  diag.verify_tol = verify_tol;
  diag.seed = config.seed;

  if (auto proof = invariant_screen(s1, s2, cut, rtol)) return inequivalent(*proof, diag);

  const SingularFrame frame = singular_frame(s2, cut, rtol);
  const SingularFrame frame_prime = singular_frame(s1, cut, rtol);
  if (frame.r != frame_prime.r) {
    return inequivalent({InvariantKind::BIPARTITION_RANK, cut.name(), std::to_string(frame_prime.r),
                         std::to_string(frame.r)},
                        diag);
  }
  for (const auto* f : {&frame_prime, &frame}) {
    if (f->conditioning_warning) diag.notes.push_back(*f->conditioning_warning);
  }

  const SolveOutcome outcome = solve_ptilde(frame, frame_prime, config);
  diag.solver_residual = outcome.residual;
  diag.restarts_used = outcome.restarts_used;
  diag.balanced = outcome.balanced;
  if (outcome.status != SolveStatus::FOUND) {
    return undecided(std::move(diag), "certificate search exhausted " +
                                          std::to_string(outcome.restarts_used) +
                                          " restarts; this is not an inequivalence proof");
  }

  const auto& d = frame.dims;
  const CandidatePair& c = *outcome.candidate;
  const MatrixXc left =
      (frame.u * c.pt.assembled() * frame_prime.u.adjoint()).inverse();
  const MatrixXc right = (frame.v * c.qt.assembled() * frame_prime.v.adjoint()).transpose();
  const FactorAttempt fu = factor_or_swap(left, d[0], d[1], 1e-6);
  const FactorAttempt fv = factor_or_swap(right, d[2], d[3], 1e-6);
  if (!fu.factors || !fv.factors) {
    diag.swapped_pair = fu.swapped || fv.swapped;
    std::string note = diag.swapped_pair
                           ? "operators factor only after swapping two parties on one side"
                           : "candidate does not factor into local operators";
    return undecided(std::move(diag), std::move(note));
  }
  LocalOperatorTuple cut_ordered;
  cut_ordered.ops = {fu.factors->b, fu.factors->c, fv.factors->b, fv.factors->c};
  return verified_or_undecided(s1, s2, to_party_order(cut_ordered, cut), cut.name(),
                               std::move(diag));
}

EquivalenceVerdict check_all_cuts(const PureState& s1, const PureState& s2,
                                  const SolverConfig& config, double rtol, double verify_tol) {
  std::optional<EquivalenceVerdict> equivalent, inequivalent_v, last;
  for (const auto& cut : Bipartition::all()) {
    EquivalenceVerdict v = check_fourpartite_equiv(s1, s2, cut, config, rtol, verify_tol);
    if (v.status == Verdict::EQUIVALENT && !equivalent) equivalent = v;
    if (v.status == Verdict::INEQUIVALENT && !inequivalent_v) inequivalent_v = v;
    last = std::move(v);
  }
  if (equivalent && inequivalent_v) {
    throw std::logic_error("check_all_cuts: cut " + equivalent->diagnostics.cut +
                           " certified equivalence but cut " + inequivalent_v->diagnostics.cut +
                           " proved inequivalence");
  }
  if (inequivalent_v) return *inequivalent_v;
  if (equivalent) return *equivalent;
  return *last;
}

EquivalenceVerdict check_tripartite_equiv(const TripartiteState& t1, const TripartiteState& t2,
                                          const SolverConfig& config, double rtol,
                                          double verify_tol) {
  if (t1.first_dim() != t2.first_dim() || t1.rows() != t2.rows() || t1.cols() != t2.cols()) {
    throw std::invalid_argument("check_tripartite_equiv: tuples have different shapes");
  }
  if (t1.first_dim() < 2) {
    throw std::invalid_argument("check_tripartite_equiv: need at least two slices");
  }
  const PureState s1 = t1.to_state();
  const PureState s2 = t2.to_state();
  const int i1 = static_cast<int>(t1.rows()), i2 = static_cast<int>(t1.cols());

  VerdictDiagnostics diag;
  diag.rtol = rtol;
  diag.verify_tol = verify_tol;
  diag.seed = config.seed;

  if (s1.dims() == std::vector<int>{2, 2, 2}) {
    const TriClass c1 = classify_tripartite_qubit(s1, 1e-9, rtol);
    const TriClass c2 = classify_tripartite_qubit(s2, 1e-9, rtol);
    if (c1.label != c2.label) {
      return inequivalent({InvariantKind::TRIPARTITE_CLASS, "three-qubit state",
                           to_string(c1.label), to_string(c2.label)},
                          diag);
    }
  }
  if (auto proof = invariant_screen(s1, s2, Bipartition::cut_12_34(), rtol)) {
    return inequivalent(*proof, diag);
  }

  // Search on operator-scaled copies when both admit a scaling.
  PureState w1 = s1, w2 = s2;
  MatrixXc scale1 = MatrixXc::Identity(i1 * i2, i1 * i2), scale2 = scale1;
  const BalanceResult b1 = balance_state(s1, 2000, 1e-8);
  const BalanceResult b2 = balance_state(s2, 2000, 1e-8);
  if (config.balance && b1.converged && b2.converged) {
    w1 = b1.state;
    w2 = b2.state;
    scale1 = kron(b1.ops.ops[1], b1.ops.ops[2]);
    scale2 = kron(b2.ops.ops[1], b2.ops.ops[2]);
    diag.balanced = true;
  }
  const MatrixXc c1 = party_flattening(w1, 0);
  const MatrixXc c2 = party_flattening(w2, 0);
  const int rho = numerical_rank(c2, rtol);
  // Columns 0..rho-1 span the slice space (as vectors a[i*I2 + j]); the rest
  // complete it to a basis.
  const MatrixXc u_target = svd(c1).v.conjugate();
  const MatrixXc u_source = svd(c2).v.conjugate();
  const SingleSidedOutcome outcome =
      solve_single_sided(u_source, u_target, rho, i1, i2, config);
  diag.solver_residual = outcome.residual;
  diag.restarts_used = outcome.restarts_used;
  if (outcome.status != SolveStatus::FOUND) {
    return undecided(std::move(diag), "certificate search exhausted " +
                                          std::to_string(outcome.restarts_used) +
                                          " restarts; this is not an inequivalence proof");
  }
  const MatrixXc x = scale2.inverse() * *outcome.x * scale1;
  const FactorAttempt f = factor_or_swap(x.inverse(), i1, i2, 1e-6);
  if (!f.factors) {
    diag.swapped_pair = f.swapped;
    std::string note = f.swapped ? "operators factor only after swapping the last two parties"
                                 : "candidate does not factor into local operators";
    return undecided(std::move(diag), std::move(note));
  }

  // First-party operator: least-squares map between the slice spaces,
  // completed to an invertible matrix on the complement.
  const MatrixXc k1 = kron(f.factors->b, f.factors->c);
  const MatrixXc o1 = party_flattening(s1, 0);
  const MatrixXc image = party_flattening(s2, 0) * k1.transpose();
  const int r = t1.first_dim();
  const auto d1 = svd(o1);
  const auto d2 = svd(image);
  MatrixXc g = o1 * image.completeOrthogonalDecomposition().pseudoInverse();
  if (rho < r) {
    g += d1.u.rightCols(r - rho) * d2.u.rightCols(r - rho).adjoint();
  }
  LocalOperatorTuple ops;
  ops.ops = {g, f.factors->b, f.factors->c};
  return verified_or_undecided(s1, s2, ops, "", std::move(diag));
}

ProbeResult rank_preservation_probe(const MatrixXc& phi, int i1, int i2, int samples,
                                    std::uint64_t seed, double rtol) {
  if (i1 < 1 || i2 < 1 || phi.rows() != i1 * i2 || phi.cols() != i1 * i2) {
    throw std::invalid_argument("rank_preservation_probe: map is " + std::to_string(phi.rows()) +
                                "x" + std::to_string(phi.cols()) + ", expected " +
                                std::to_string(i1 * i2) + " square");
  }
  if (samples < 1) throw std::invalid_argument("rank_preservation_probe: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](int n) {
    VectorXc v(n);
    for (auto& z : v) z = cplx(normal(rng), normal(rng));
    return v;
  };
  ProbeResult out;
  for (int s = 0; s < samples; ++s) {
    VectorXc a;
    if (s % 2 == 0) {
      const VectorXc x = gaussian(i1), y = gaussian(i2);
      a = kron(x, y);
    } else {
      a = gaussian(i1 * i2);
    }
    out.samples_run = s + 1;
    const int before = numerical_rank(unflatten(a, i1, i2), rtol);
    const VectorXc b = phi * a;
    const int after = numerical_rank(unflatten(b, i1, i2), rtol);
    if (before != after) {
      out.status = ProbeStatus::VIOLATED;
      out.witness = a;
      return out;
    }
  }
  return out;
}

}  // namespace slocc
