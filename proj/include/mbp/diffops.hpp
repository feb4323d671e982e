#ifndef MBP_DIFFOPS_HPP
#define MBP_DIFFOPS_HPP

#include <vector>

#include "mbp/polyops.hpp"
#include "mbp/weights.hpp"

namespace mbp {

/// Differential operator sum_j d^j F_j(x) with matrix-polynomial
/// coefficients, acting on the right of a matrix polynomial:
///   P . D = sum_j P^{(j)}(x) F_j(x).
class PolyDiffOp {
 public:
  PolyDiffOp() = default;
  PolyDiffOp(int n, std::vector<MatrixPolynomial> coeffs);
  static PolyDiffOp zero(int n);
  /// Zero-order operator "right multiplication by F".
  static PolyDiffOp multiplication(MatrixPolynomial f);

  int size() const { return n_; }
  /// Largest j with F_j nonzero; -1 for the zero operator.
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  MatrixPolynomial coeff(int j) const;
  const std::vector<MatrixPolynomial>& coeffs() const { return coeffs_; }

  PolyDiffOp operator+(const PolyDiffOp& o) const;
  PolyDiffOp operator-(const PolyDiffOp& o) const;
  PolyDiffOp operator*(double s) const;

  /// True iff every coefficient is a diagonal matrix polynomial (within tol).
  bool all_diagonal(double tol = 0.0) const;
  /// True iff deg(F_j) <= j for every j.
  bool degrees_within_order() const;
  double max_abs_coeff() const;

 private:
  int n_ = 0;
  std::vector<MatrixPolynomial> coeffs_;
};

/// N x N matrix of rational functions (coefficient of one d-power of a
/// RatDiffOp).
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n);
  static RationalMatrix from_polynomial(const MatrixPolynomial& p);

  int size() const { return n_; }
  RationalFunction& at(int i, int j);
  const RationalFunction& at(int i, int j) const;
  bool is_diagonal() const;

 private:
  int n_ = 0;
  std::vector<RationalFunction> entries_;  // row-major
};

/// Differential operator with rational-function coefficients; holds formal
/// W-adjoints, whose coefficients leave the polynomial ring in general.
struct RatDiffOp {
  int n = 0;
  std::vector<RationalMatrix> coeffs;  // index = d-order
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Matrix eigenvalues Lambda_n = sum_i [n]_i F_i^i of the monic sequence,
/// [n]_i = n(n-1)...(n-i+1).
struct EigenvalueSequence {
  std::vector<Matrix> values;  // index n = 0..n_max
};

/// Classical second-order operator d^2 rho + d (w rho)'/w, as a 1x1 PolyDiffOp.
PolyDiffOp build_classical_operator(const ScalarWeightSpec& w);

/// Diagonal operator d^2 rho I + d diag((w_j rho)'/w_j).
PolyDiffOp build_tilde_operator(const ValidatedSpec& spec);

/// K = sum_j E_{2j,2j} and the family's constant correction K~ = 2K, K,
/// or (alpha_1+beta_1) K.
Matrix k_matrix(int n);
Matrix k_tilde_matrix(const ValidatedSpec& spec);

/// T(x) = I + Ax for the spec's nilpotent matrix A.
MatrixPolynomial unipotent_factor(const ValidatedSpec& spec);

/// The second-order operator D_H, D_L, or D_J of the weight's algebra,
/// built from its closed-form coefficients and cross-checked internally
/// against T (D~ + K~) T^{-1}.
PolyDiffOp build_bochner_operator(const ValidatedSpec& spec);

/// P . D = sum_j P^{(j)} F_j.
MatrixPolynomial apply_right(const MatrixPolynomial& p, const PolyDiffOp& d);

/// Operator product with (P . D1) . D2 = P . compose(D1, D2).
PolyDiffOp compose(const PolyDiffOp& d1, const PolyDiffOp& d2);

/// T o D o T^{-1} with T acting as a zero-order operator; requires T to have
/// a polynomial inverse.
PolyDiffOp conjugate_by_unipotent(const PolyDiffOp& d, const MatrixPolynomial& t);

/// Requires deg(F_i) <= i; throws DegreeViolation otherwise.
EigenvalueSequence eigenvalue_sequence(const PolyDiffOp& d, int n_max);

/// Formal W~-adjoint of an operator with diagonal coefficients, with
/// W~ = diag(w_1..w_N); every coefficient stays a rational function.
RatDiffOp formal_adjoint_diagonal(const PolyDiffOp& d, const ValidatedSpec& spec);
RatDiffOp formal_adjoint_diagonal(const RatDiffOp& d, const ValidatedSpec& spec);

RatDiffOp to_rational(const PolyDiffOp& d);
/// Max cross-multiplication residual between coefficients of a and b.
double ratdiffop_residual(const RatDiffOp& a, const RatDiffOp& b);
double ratdiffop_residual(const RatDiffOp& a, const PolyDiffOp& b);

struct LeadingCoefficientReport {
  int half_order = 0;     // m with order = 2m
  double scale = 0.0;     // fitted c in F_top ~ c rho^m I
  double residual = 0.0;  // max-norm of F_top - c rho^m I
  bool is_rho_power = false;
};

/// Tests whether the top coefficient equals c rho(x)^m I; throws OddOrder
/// for odd-order operators.
LeadingCoefficientReport leading_coefficient_analysis(const PolyDiffOp& d,
                                                      Family family);

}  // namespace mbp

#endif  // MBP_DIFFOPS_HPP
