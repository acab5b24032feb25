// slocc: decide SLOCC equivalence of multipartite pure states from the shell.
//
// Exit codes: 0 success / equivalent / pass, 1 inequivalent / fail,
// 2 unreadable input or bad usage, 3 invalid cut, 4 undecided,
// 5 dimension mismatch or wrong number of parties.

#include "slocc/catalog.hpp"
#include "slocc/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace slocc;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitParse = 2;
constexpr int kExitCut = 3;
constexpr int kExitUndecided = 4;
constexpr int kExitDims = 5;

// Raised inside a command to leave with a specific exit code.
struct CommandError {
  int code;
  std::string message;
};

std::string format_complex(cplx z) {
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.6g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  }
  return buf;
}

std::string format_dims(const std::vector<int>& dims) {
  std::string out = "(";
  for (std::size_t k = 0; k < dims.size(); ++k) out += (k ? "," : "") + std::to_string(dims[k]);
  return out + ")";
}

void print_matrix(std::ostream& os, const MatrixXc& m, const std::string& indent) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << format_complex(m(i, j));
    os << "]\n";
  }
}

PureState load_state(const std::string& path) {
  try {
    return read_state(path);
  } catch (const ParseError& e) {
    throw CommandError{kExitParse, e.what()};
  }
}

Bipartition load_cut(const std::string& text) {
  try {
    return Bipartition::parse(text);
  } catch (const std::invalid_argument& e) {
    throw CommandError{kExitCut, e.what()};
  }
}

json vector_to_json(const VectorXd& v) { return std::vector<double>(v.begin(), v.end()); }

json slices_to_json(const TripartiteState& t) {
  json out = json::array();
  for (const auto& s : t.slices) out.push_back(matrix_to_json(s));
  return out;
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeArgs {
  std::string state;
  std::string cut = "12-34";
  double tol = kDefaultRankTol;
};

int cmd_decompose(const DecomposeArgs& args, bool as_json) {
  const PureState s = load_state(args.state);
  const Bipartition cut = load_cut(args.cut);
  if (s.parties() != 4) {
    throw CommandError{kExitDims, "decompose needs a four-party state, got dims " +
                                      format_dims(s.dims())};
  }
  const auto [set, frame] = triple_state_set(s, cut, args.tol);
  std::vector<std::string> warnings;
  if (frame.conditioning_warning) warnings.push_back(*frame.conditioning_warning);

  if (as_json) {
    json out = {{"cut", cut.name()},
                {"dims", s.dims()},
                {"r", frame.r},
                {"lambda", vector_to_json(frame.lambda)},
                {"psi_u", slices_to_json(set.psi_u)},
                {"psi_v", slices_to_json(set.psi_v)},
                {"warnings", warnings}};
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "cut: " << cut.name() << "\n"
            << "dims: " << format_dims(s.dims()) << "\n"
            << "r: " << frame.r << "\n"
            << "lambda:";
  for (double l : frame.lambda) std::cout << ' ' << format_complex(l);
  std::cout << '\n';
  for (auto [name, t] : {std::pair{"psi_u", &set.psi_u}, std::pair{"psi_v", &set.psi_v}}) {
    for (std::size_t k = 0; k < t->slices.size(); ++k) {
      std::cout << name << " slice " << k << ":\n";
      print_matrix(std::cout, t->slices[k], "  ");
    }
  }
  for (const auto& w : warnings) std::cout << "warning: " << w << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string a;
  std::string b;
  std::string cut = "12-34";
  bool all_cuts = false;
  double tol = kDefaultRankTol;
  double verify_tol = 1e-8;
  int restarts = SolverConfig{}.restarts;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string cert_out;
};

int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::EQUIVALENT: return kExitOk;
    case Verdict::INEQUIVALENT: return kExitNegative;
    case Verdict::UNDECIDED: return kExitUndecided;
  }
  return kExitUndecided;
}

int cmd_check(const CheckArgs& args, bool as_json) {
  const PureState s1 = load_state(args.a);
  const PureState s2 = load_state(args.b);
  if (s1.dims() != s2.dims()) {
    throw CommandError{kExitDims, "dims differ: " + format_dims(s1.dims()) + " vs " +
                                      format_dims(s2.dims())};
  }
  SolverConfig config;
  config.restarts = args.restarts;
  config.seed = args.seed;

  EquivalenceVerdict verdict;
  if (s1.parties() == 4) {
    const Bipartition cut = load_cut(args.cut);
    verdict = args.all_cuts ? check_all_cuts(s1, s2, config, args.tol, args.verify_tol)
                            : check_fourpartite_equiv(s1, s2, cut, config, args.tol,
                                                      args.verify_tol);
  } else if (s1.parties() == 3) {
    verdict = check_tripartite_equiv(TripartiteState::from_state(s1),
                                     TripartiteState::from_state(s2), config, args.tol,
                                     args.verify_tol);
  } else {
    throw CommandError{kExitDims, "check needs three or four parties, got dims " +
                                      format_dims(s1.dims())};
  }

  std::optional<CertificateFile> cert;
  if (verdict.certificate) {
    cert = CertificateFile{verdict.certificate->ops, verdict.certificate->scalar,
                           verdict.certificate->cut, verdict.certificate->residual,
                           diagnostics_to_json(verdict.diagnostics)};
    if (!args.cert_out.empty()) write_certificate(args.cert_out, *cert);
  }

  if (as_json) {
    json out = {{"verdict", to_string(verdict.status)},
                {"seed", args.seed},
                {"seed_defaulted", !args.seed_given},
                {"certificate", cert ? certificate_to_json(*cert) : json(nullptr)},
                {"proof", verdict.proof ? proof_to_json(*verdict.proof) : json(nullptr)},
                {"diagnostics", diagnostics_to_json(verdict.diagnostics)},
                {"cert_out", args.cert_out.empty() || !cert ? json(nullptr)
                                                            : json(args.cert_out)}};
    std::cout << out.dump(2) << '\n';
    return verdict_exit_code(verdict.status);
  }
  std::cout << "verdict: " << to_string(verdict.status) << "\n"
            << "seed: " << args.seed << (args.seed_given ? "" : " (default)") << '\n';
  if (!verdict.diagnostics.cut.empty()) std::cout << "cut: " << verdict.diagnostics.cut << '\n';
  if (verdict.proof) std::cout << "proof: " << verdict.proof->summary() << '\n';
  if (cert) {
    std::cout << "certificate: scalar " << format_complex(cert->scalar) << ", residual "
              << verdict.certificate->residual << '\n';
    for (std::size_t k = 0; k < cert->ops.ops.size(); ++k) {
      std::cout << "  A" << k + 1 << ":\n";
      print_matrix(std::cout, cert->ops.ops[k], "    ");
    }
    if (!args.cert_out.empty()) std::cout << "certificate written to " << args.cert_out << '\n';
  }
  const auto& d = verdict.diagnostics;
  if (d.solver_residual) std::cout << "solver residual: " << *d.solver_residual << '\n';
  std::cout << "restarts used: " << d.restarts_used << '\n';
  for (const auto& note : d.notes) std::cout << "note: " << note << '\n';
  return verdict_exit_code(verdict.status);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string a;
  std::string b;
  std::string cert;
  double tol = 1e-8;
};

int cmd_verify(const VerifyArgs& args, bool as_json) {
  const PureState s1 = load_state(args.a);
  const PureState s2 = load_state(args.b);
  CertificateFile cert;
  try {
    cert = read_certificate(args.cert);
  } catch (const ParseError& e) {
    throw CommandError{kExitParse, e.what()};
  }

  // A certificate whose shape does not fit the states simply fails.
  std::string mismatch;
  if (s1.dims() != s2.dims()) {
    mismatch = "state dims differ";
  } else if (cert.ops.ops.size() != s1.dims().size()) {
    mismatch = "certificate has " + std::to_string(cert.ops.ops.size()) + " operators for " +
               std::to_string(s1.parties()) + " parties";
  } else {
    for (std::size_t k = 0; k < cert.ops.ops.size(); ++k) {
      if (cert.ops.ops[k].rows() != s1.dims()[k]) {
        mismatch = "operator " + std::to_string(k + 1) + " has the wrong size";
      }
    }
  }
  VerifyResult r;
  bool invertible = false;
  if (mismatch.empty()) {
    r = verify_equivalence(s1, s2, cert.ops, args.tol);
    invertible = cert.ops.invertible();
    if (!invertible) mismatch = "an operator is singular";
  }
  const bool pass = mismatch.empty() && r.pass;

  if (as_json) {
    json out = {{"pass", pass},
                {"scalar", json::array({r.scalar.real(), r.scalar.imag()})},
                {"residual", r.residual},
                {"tol", args.tol},
                {"reason", mismatch.empty() ? json(nullptr) : json(mismatch)}};
    std::cout << out.dump(2) << '\n';
    return pass ? kExitOk : kExitNegative;
  }
  std::cout << (pass ? "pass" : "fail") << "\n"
            << "scalar: " << format_complex(r.scalar) << "\n"
            << "residual: " << r.residual << " (tol " << args.tol << ")\n";
  if (!mismatch.empty()) std::cout << "reason: " << mismatch << '\n';
  return pass ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------------------
// classify3

struct Classify3Args {
  std::string state;
  double tol = 1e-9;
};

int cmd_classify3(const Classify3Args& args, bool as_json) {
  const PureState s = load_state(args.state);
  if (s.dims() != std::vector<int>{2, 2, 2}) {
    throw CommandError{kExitDims, "classify3 needs dims (2,2,2), got " + format_dims(s.dims())};
  }
  const TriClass c = classify_tripartite_qubit(s, args.tol);
  if (as_json) {
    json out = {{"label", to_string(c.label)},
                {"marginal_ranks", c.marginal_ranks},
                {"hyperdeterminant_abs", c.hyperdeterminant_abs},
                {"threshold", c.threshold}};
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "label: " << to_string(c.label) << "\n"
            << "marginal ranks: " << c.marginal_ranks[0] << ' ' << c.marginal_ranks[1] << ' '
            << c.marginal_ranks[2] << "\n"
            << "|hyperdeterminant|: " << c.hyperdeterminant_abs << " (zero threshold "
            << c.threshold << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// orbit

struct OrbitArgs {
  std::string state;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double cond_cap = 20.0;
  std::string out;
  std::string cert_out;
};

int cmd_orbit(const OrbitArgs& args, bool as_json) {
  const PureState s = load_state(args.state);
  std::mt19937_64 rng(args.seed);
  LocalOperatorTuple ops;
  for (int d : s.dims()) ops.ops.push_back(random_invertible(d, args.cond_cap, rng));
  const PureState image = apply_local_ops(s, ops);
  const std::string cert_path = args.cert_out.empty() ? args.out + ".cert" : args.cert_out;

  // The image is the first state: verify <out> <state> <cert> passes.
  CertificateFile cert{ops, cplx{1.0, 0.0}, "", 0.0,
                       json{{"planted", true}, {"seed", args.seed}, {"cond_cap", args.cond_cap}}};
  write_state(args.out, image);
  write_certificate(cert_path, cert);

  std::vector<double> conds;
  for (const auto& a : ops.ops) {
    const VectorXd sv = singular_values(a);
    conds.push_back(sv(0) / sv(sv.size() - 1));
  }
  if (as_json) {
    json out = {{"seed", args.seed},
                {"seed_defaulted", !args.seed_given},
                {"image", args.out},
                {"certificate", cert_path},
                {"condition_numbers", conds}};
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "seed: " << args.seed << (args.seed_given ? "" : " (default)") << "\n"
            << "image written to " << args.out << "\n"
            << "planted operators written to " << cert_path << "\n"
            << "condition numbers:";
  for (double c : conds) std::cout << ' ' << c;
  std::cout << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// make

struct MakeArgs {
  std::string name;
  std::vector<double> params;
  std::string out;
};

int cmd_make(const MakeArgs& args, bool as_json) {
  std::vector<cplx> params(args.params.begin(), args.params.end());
  PureState s = [&] {
    try {
      return make_state(args.name, params);
    } catch (const std::invalid_argument& e) {
      throw CommandError{kExitParse, e.what()};
    }
  }();
  write_state(args.out, s);
  if (as_json) {
    std::cout << json{{"name", args.name}, {"dims", s.dims()}, {"out", args.out}}.dump(2) << '\n';
  } else {
    std::cout << args.name << ' ' << format_dims(s.dims()) << " written to " << args.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide SLOCC equivalence of multipartite pure states"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Triple-state decomposition at a cut");
  decompose->add_option("state", dec.state, "State file")->required();
  decompose->add_option("--cut", dec.cut, "Cut: 12-34, 13-24 or 14-23")->capture_default_str();
  decompose->add_option("--tol", dec.tol, "Relative rank tolerance")->capture_default_str();

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "Decide whether two states are SLOCC equivalent");
  check->add_option("a", chk.a, "Target state file")->required();
  check->add_option("b", chk.b, "Source state file (operators act on it)")->required();
  auto* cut_opt = check->add_option("--cut", chk.cut, "Cut to search at")->capture_default_str();
  check->add_flag("--all-cuts", chk.all_cuts, "Try all three cuts")->excludes(cut_opt);
  check->add_option("--tol", chk.tol, "Relative rank tolerance")->capture_default_str();
  check->add_option("--verify-tol", chk.verify_tol, "State-level verification tolerance")
      ->capture_default_str();
  check->add_option("--restarts", chk.restarts, "Solver restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* chk_seed = check->add_option("--seed", chk.seed, "Solver seed (default 0)");
  check->add_option("--cert-out", chk.cert_out, "Write the certificate here when equivalent");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check a certificate against two states");
  verify->add_option("a", ver.a, "Target state file")->required();
  verify->add_option("b", ver.b, "Source state file")->required();
  verify->add_option("cert", ver.cert, "Certificate file")->required();
  verify->add_option("--tol", ver.tol, "Relative residual tolerance")->capture_default_str();

  Classify3Args cls;
  auto* classify3 = app.add_subcommand("classify3", "SLOCC class of a three-qubit state");
  classify3->add_option("state", cls.state, "State file")->required();
  classify3->add_option("--tol", cls.tol, "Relative hyperdeterminant threshold")
      ->capture_default_str();

  OrbitArgs orb;
  auto* orbit = app.add_subcommand("orbit", "Apply random local operators to a state");
  orbit->add_option("state", orb.state, "State file")->required();
  auto* orb_seed = orbit->add_option("--seed", orb.seed, "Random seed (default 0)");
  orbit->add_option("--cond-cap", orb.cond_cap, "Largest operator condition number")
      ->check(CLI::Range(1.0, 1e12))
      ->capture_default_str();
  orbit->add_option("--out", orb.out, "Image state file")->required();
  orbit->add_option("--cert-out", orb.cert_out, "Planted operators (default <out>.cert)");

  MakeArgs mk;
  auto* make = app.add_subcommand("make", "Write a named example state");
  make->add_option("name", mk.name, "ghz4, w4, ghz3, w3, cluster1d, psi_abcd, psi2_abcd")
      ->required();
  make->add_option("--params", mk.params, "Parameters a,b,c,d")->delimiter(',');
  make->add_option("--out", mk.out, "Output state file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }
  chk.seed_given = chk_seed->count() > 0;
  orb.seed_given = orb_seed->count() > 0;

  try {
    if (*decompose) return cmd_decompose(dec, as_json);
    if (*check) return cmd_check(chk, as_json);
    if (*verify) return cmd_verify(ver, as_json);
    if (*classify3) return cmd_classify3(cls, as_json);
    if (*orbit) return cmd_orbit(orb, as_json);
    if (*make) return cmd_make(mk, as_json);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitParse;
}
