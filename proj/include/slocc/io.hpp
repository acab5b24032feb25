#pragma once

// JSON documents for states and certificates.
//
// State:        {"dims": [2, 2, 2, 2], "amps": [[re, im], ...]}
// Certificate:  {"version": "slocc-certificate/1",
//                "ops": [[[[re, im], ...row...], ...rows...], ...one per party...],
//                "scalar": [re, im], "cut": "12-34", "residual": r,
//                "diagnostics": {...}}
// Doubles are written with round-trip precision, so reading back is bit-exact.

#include "slocc/equivalence.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace slocc {

/// Malformed document; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kCertificateVersion = "slocc-certificate/1";

struct CertificateFile {
  LocalOperatorTuple ops;
  cplx scalar{1.0, 0.0};
  std::string cut;
  double residual = 0.0;
  nlohmann::json diagnostics = nlohmann::json::object();
};

nlohmann::json state_to_json(const PureState& s);
PureState state_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const CertificateFile& c);
CertificateFile certificate_from_json(const nlohmann::json& j);

nlohmann::json diagnostics_to_json(const VerdictDiagnostics& d);
nlohmann::json proof_to_json(const InequivalenceProof& p);
nlohmann::json matrix_to_json(const MatrixXc& m);
MatrixXc matrix_from_json(const nlohmann::json& j, const std::string& field);

// File helpers; reading throws ParseError for unreadable or malformed files.
PureState read_state(const std::filesystem::path& path);
void write_state(const std::filesystem::path& path, const PureState& s);
CertificateFile read_certificate(const std::filesystem::path& path);
void write_certificate(const std::filesystem::path& path, const CertificateFile& c);

}  // namespace slocc
