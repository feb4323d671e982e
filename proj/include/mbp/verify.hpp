#ifndef MBP_VERIFY_HPP
#define MBP_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mbp/orthopoly.hpp"
#include "mbp/weights.hpp"

namespace mbp {

struct SuiteOptions {
  bool fast = false;
  double tolerance_factor = 1.0;  // multiplies every check tolerance
  std::uint64_t seed = 0x5EED;
  int n_max = 8;
  Precision precision = Precision::Extended;
};

struct CheckRecord {
  std::string name;
  std::string status;  // "pass", "fail", or "skipped"
  double residual = 0.0;
  double tolerance = 0.0;
  double runtime_ms = 0.0;
  std::string detail;
};

struct VerificationReport {
  MatrixWeightSpec spec;
  SuiteOptions options;
  std::vector<ValidationIssue> validation;
  std::vector<CheckRecord> checks;
  bool overall_pass = false;
};

/// Independent oracle for matrix_moments: entrywise adaptive quadrature of
/// x^k W(x) over a truncated / singularity-split domain. k is capped at 12.
Matrix quadrature_oracle_moment(const ValidatedSpec& spec, int k);

/// Dimension of {X : X L = L X for all L}, by SVD null space of the stacked
/// Sylvester system with threshold = svd_threshold * largest singular value.
int commutant_dimension(const std::vector<Matrix>& mats,
                        double svd_threshold = 1e-9);

/// Runs the 13-check suite. Validation issues other than the Jacobi sum
/// condition skip every check; a sum-condition violation lets the
/// weight-level checks run and surfaces at operator construction.
VerificationReport run_suite(const MatrixWeightSpec& spec,
                             const SuiteOptions& options = {});

}  // namespace mbp

#endif  // MBP_VERIFY_HPP
