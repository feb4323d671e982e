#ifndef MBP_WEIGHTS_HPP
#define MBP_WEIGHTS_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "mbp/error.hpp"

namespace mbp {

using Matrix = Eigen::MatrixXd;
using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

enum class Family { Hermite, Laguerre, Jacobi };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// One classical scalar weight: e^{-x^2+2bx}, e^{-x} x^alpha, or
/// (1-x)^alpha (1+x)^beta.
struct ScalarWeightSpec {
  Family family = Family::Hermite;
  double b = 0.0;      // Hermite shift
  double alpha = 0.0;  // Laguerre / Jacobi
  double beta = 0.0;   // Jacobi only

  static ScalarWeightSpec hermite(double b);
  static ScalarWeightSpec laguerre(double alpha);
  static ScalarWeightSpec jacobi(double alpha, double beta);

  /// Open support interval of the weight.
  std::pair<double, double> support() const;

  /// Pointwise value w(x); requires x inside the open support.
  double evaluate(double x) const;

  /// Integrability: Laguerre alpha > -1, Jacobi alpha, beta > -1.
  bool params_in_range() const;
};

/// Parameters of an N x N weight W = T(x) diag(w_1..w_N) T(x)^*,
/// T(x) = I + Ax with A the 2-step nilpotent matrix built from `a`.
struct MatrixWeightSpec {
  Family family = Family::Hermite;
  int size = 0;
  std::vector<ScalarWeightSpec> rows;  // size N, same family
  std::vector<double> a;               // size N-1, all nonzero
  double working_tolerance = 1e-9;
};

struct ValidationIssue {
  ErrorCode code;
  std::string detail;
};

struct ValidationResult {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
  bool has(ErrorCode c) const;
};

/// Checks every MatrixWeightSpec invariant; reports all violations by name.
ValidationResult check_spec(const MatrixWeightSpec& spec);

/// A spec that passed validation. Obtained via validate_spec, or via
/// assume_valid for deliberately out-of-family control weights.
class ValidatedSpec {
 public:
  const MatrixWeightSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }
  int size() const { return spec_.size; }

  static ValidatedSpec assume_valid(MatrixWeightSpec spec) {
    return ValidatedSpec(std::move(spec));
  }

 private:
  explicit ValidatedSpec(MatrixWeightSpec spec) : spec_(std::move(spec)) {}
  friend ValidatedSpec validate_spec(const MatrixWeightSpec&);
  MatrixWeightSpec spec_;
};

/// Throws Error with the first violation's code (message lists all of them).
ValidatedSpec validate_spec(const MatrixWeightSpec& spec);

/// A = sum_j a_{2j-1} E_{2j-1,2j} + sum_j a_{2j} E_{2j+1,2j} (1-based),
/// satisfying A^2 = 0.
Matrix nilpotent_matrix(const std::vector<double>& a, int n);
MatrixL nilpotent_matrix_ext(const std::vector<double>& a, int n);

/// k-th moment of a scalar weight over its support, by closed form.
double scalar_moment(const ScalarWeightSpec& w, int k);

/// Moments m_0..m_K in extended precision (backs the Gram solves).
std::vector<long double> scalar_moments_ext(const ScalarWeightSpec& w, int K);

/// Matrix moments M_0..M_K of W, both in binary64 and extended precision.
struct MomentTable {
  int size = 0;
  std::vector<Matrix> entries;      // M_k, symmetric
  std::vector<MatrixL> entries_ext; // same, long double
  int max_order() const { return static_cast<int>(entries.size()) - 1; }
};

MomentTable matrix_moments(const ValidatedSpec& spec, int K);

/// W(x) = T(x) diag(w_i(x)) T(x)^T at a point of the open support.
Matrix evaluate_weight(const ValidatedSpec& spec, double x);

}  // namespace mbp

#endif  // MBP_WEIGHTS_HPP
