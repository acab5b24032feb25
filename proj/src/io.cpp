#include "slocc/io.hpp"

#include <fstream>
#include <sstream>

namespace slocc {

namespace {

using nlohmann::json;

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("field '" + field + "': expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& require(const json& j, const std::string& key) {
  if (!j.is_object()) throw ParseError("document is not a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field '" + key + "'");
  return *it;
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

json matrix_to_json(const MatrixXc& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXc matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParseError("field '" + field + "': expected a non-empty list of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXc m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw ParseError("field '" + field + "': row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k], field);
  }
  return m;
}

json state_to_json(const PureState& s) {
  json amps = json::array();
  for (const cplx& z : s.amps()) amps.push_back(complex_to_json(z));
  return {{"dims", s.dims()}, {"amps", std::move(amps)}};
}

PureState state_from_json(const json& j) {
  const json& dims_j = require(j, "dims");
  if (!dims_j.is_array()) throw ParseError("field 'dims': expected a list of integers");
  std::vector<int> dims;
  for (const auto& d : dims_j) {
    if (!d.is_number_integer()) throw ParseError("field 'dims': expected a list of integers");
    dims.push_back(d.get<int>());
  }
  const json& amps_j = require(j, "amps");
  if (!amps_j.is_array()) throw ParseError("field 'amps': expected a list of [re, im] pairs");
  VectorXc amps(static_cast<Eigen::Index>(amps_j.size()));
  for (std::size_t k = 0; k < amps_j.size(); ++k) amps(k) = complex_from_json(amps_j[k], "amps");
  try {
    return PureState(std::move(dims), std::move(amps));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("fields 'dims'/'amps': ") + e.what());
  }
}

json certificate_to_json(const CertificateFile& c) {
  json ops = json::array();
  for (const auto& a : c.ops.ops) ops.push_back(matrix_to_json(a));
  return {{"version", kCertificateVersion}, {"ops", std::move(ops)},
          {"scalar", complex_to_json(c.scalar)}, {"cut", c.cut},
          {"residual", c.residual}, {"diagnostics", c.diagnostics}};
}

CertificateFile certificate_from_json(const json& j) {
  const json& version = require(j, "version");
  if (!version.is_string() || version.get<std::string>() != kCertificateVersion) {
    throw ParseError(std::string("field 'version': expected \"") + kCertificateVersion + "\"");
  }
  CertificateFile c;
  const json& ops = require(j, "ops");
  if (!ops.is_array() || ops.empty()) throw ParseError("field 'ops': expected a list of matrices");
  for (std::size_t k = 0; k < ops.size(); ++k) {
    MatrixXc m = matrix_from_json(ops[k], "ops[" + std::to_string(k) + "]");
    if (m.rows() != m.cols()) {
      throw ParseError("field 'ops[" + std::to_string(k) + "]': operator is not square");
    }
    c.ops.ops.push_back(std::move(m));
  }
  c.scalar = complex_from_json(require(j, "scalar"), "scalar");
  const json& cut = require(j, "cut");
  if (!cut.is_string()) throw ParseError("field 'cut': expected a string");
  c.cut = cut.get<std::string>();
  const json& residual = require(j, "residual");
  if (!residual.is_number()) throw ParseError("field 'residual': expected a number");
  c.residual = residual.get<double>();
  if (const auto it = j.find("diagnostics"); it != j.end()) c.diagnostics = *it;
  return c;
}

json diagnostics_to_json(const VerdictDiagnostics& d) {
  json j = {{"cut", d.cut},
            {"rtol", d.rtol},
            {"verify_tol", d.verify_tol},
            {"seed", d.seed},
            {"restarts_used", d.restarts_used},
            {"balanced", d.balanced},
            {"swapped_pair", d.swapped_pair},
            {"notes", d.notes}};
  j["solver_residual"] = d.solver_residual ? json(*d.solver_residual) : json(nullptr);
  j["verify_residual"] = d.verify_residual ? json(*d.verify_residual) : json(nullptr);
  return j;
}

json proof_to_json(const InequivalenceProof& p) {
  return {{"invariant", to_string(p.kind)},
          {"where", p.where},
          {"first", p.first},
          {"second", p.second},
          {"summary", p.summary()}};
}

PureState read_state(const std::filesystem::path& path) { return state_from_json(parse_file(path)); }

void write_state(const std::filesystem::path& path, const PureState& s) {
  write_file(path, state_to_json(s));
}

CertificateFile read_certificate(const std::filesystem::path& path) {
  return certificate_from_json(parse_file(path));
}

void write_certificate(const std::filesystem::path& path, const CertificateFile& c) {
  write_file(path, certificate_to_json(c));
}

}  // namespace slocc
