#ifndef MBP_IO_HPP
#define MBP_IO_HPP

#include <string>

#include "mbp/diffops.hpp"
#include "mbp/orthopoly.hpp"
#include "mbp/verify.hpp"
#include "mbp/weights.hpp"

namespace mbp {

/// Parsed configuration file: one weight spec plus run options.
struct ConfigFile {
  MatrixWeightSpec spec;
  Precision precision = Precision::Extended;
  bool tolerance_given = false;
};

/// Parses the JSON config text; unknown keys are rejected. Throws Error
/// with ConfigError on any parse or shape problem.
ConfigFile parse_config_text(const std::string& text);

/// Reads a config file and applies the MBP_PRECISION environment override.
ConfigFile load_config(const std::string& path);

/// Documents are self-describing JSON with schema tag "mbp/1". Doubles are
/// printed with 17 significant digits so reparsing is bit-exact; matrices
/// serialize row-major, polynomials by x-power, operators by d-order.
std::string write_moments_document(const MatrixWeightSpec& spec,
                                   const MomentTable& table);
std::string write_operator_document(const MatrixWeightSpec& spec,
                                    const PolyDiffOp& d,
                                    const PolyDiffOp& d_tilde,
                                    const Matrix& k_tilde, const Matrix& a,
                                    const MatrixPolynomial& t);
std::string write_orthopoly_document(const MatrixWeightSpec& spec,
                                     const MonicSequence& seq);
std::string write_report_document(const VerificationReport& report);

/// Inverse of write_moments_document (used for round-trip checks).
MomentTable parse_moments_document(const std::string& text);

}  // namespace mbp

#endif  // MBP_IO_HPP
