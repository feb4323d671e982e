#ifndef MBP_POLYOPS_HPP
#define MBP_POLYOPS_HPP

#include <vector>

#include "mbp/weights.hpp"

namespace mbp {

/// Dense univariate scalar polynomial, coefficient index = power of x.
/// Trailing exact-zero coefficients are trimmed; zero polynomial has
/// degree() == -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  static Polynomial constant(double c);
  static Polynomial monomial(int power, double c = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double coeff(int k) const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  double eval(double x) const;
  Polynomial derivative() const;
  double max_abs_coeff() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const;

  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::vector<double> coeffs_;
  void trim();
};

/// Ratio of scalar polynomials; the denominator is made monic on
/// construction. Equality is decided by cross-multiplication, never by
/// division, and there is no approximate GCD reduction.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial::constant(1.0)) {}
  RationalFunction(Polynomial num, Polynomial den);
  static RationalFunction from_polynomial(Polynomial p);
  static RationalFunction constant(double c);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  /// True iff the denominator is the constant 1 after canonicalization.
  bool is_polynomial() const { return den_.degree() == 0; }

  double eval(double x) const;
  RationalFunction derivative() const;

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator*(double s) const;
  RationalFunction operator-() const;

 private:
  Polynomial num_, den_;
};

/// |num1*den2 - num2*den1| max coefficient, the cross-multiplication residual.
double cross_mul_residual(const RationalFunction& f, const RationalFunction& g);
bool approx_equal(const RationalFunction& f, const RationalFunction& g,
                  double tol);

/// Matrix-valued polynomial; coeffs()[k] is the N x N coefficient of x^k.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  MatrixPolynomial(int n, std::vector<Matrix> coeffs);
  static MatrixPolynomial zero(int n);
  static MatrixPolynomial identity(int n);
  static MatrixPolynomial constant(Matrix m);
  /// c * x^power * I
  static MatrixPolynomial scalar_monomial(int n, int power, double c = 1.0);

  int size() const { return n_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Matrix coeff(int k) const;
  const std::vector<Matrix>& coeffs() const { return coeffs_; }

  Matrix eval(double x) const;
  MatrixPolynomial derivative() const;
  double max_abs_coeff() const;

  MatrixPolynomial operator+(const MatrixPolynomial& o) const;
  MatrixPolynomial operator-(const MatrixPolynomial& o) const;
  MatrixPolynomial operator*(const MatrixPolynomial& o) const;
  MatrixPolynomial operator*(double s) const;
  MatrixPolynomial operator-() const;

  /// Constant-matrix multiplication on either side.
  friend MatrixPolynomial operator*(const Matrix& c, const MatrixPolynomial& p);
  MatrixPolynomial operator*(const Matrix& c) const;

  bool exactly_equal(const MatrixPolynomial& o) const;

 private:
  int n_ = 0;
  std::vector<Matrix> coeffs_;
  void trim();
  void require_same_size(const MatrixPolynomial& o) const;
};

MatrixPolynomial matpoly_mul(const MatrixPolynomial& p,
                             const MatrixPolynomial& q);
MatrixPolynomial matpoly_derivative(const MatrixPolynomial& p);

/// Max-norm of p - q over all coefficients.
double matpoly_distance(const MatrixPolynomial& p, const MatrixPolynomial& q);

/// Inverse of a unipotent matrix polynomial T = I + (nilpotent part), by a
/// terminating Neumann series. Throws NotUnipotent when the series does not
/// terminate with T*S = I.
MatrixPolynomial unipotent_inverse(const MatrixPolynomial& t);

/// rho(x) from the classical table: 1, x, or 1 - x^2.
Polynomial rho_polynomial(Family family);

struct LogDerivatives {
  RationalFunction w_rho_prime_over_w;  // (w rho)'/w, a polynomial
  RationalFunction w_prime_over_w;      // w'/w
};

/// Log-derivative data of a classical scalar weight.
LogDerivatives log_derivative_pair(const ScalarWeightSpec& w);

}  // namespace mbp

#endif  // MBP_POLYOPS_HPP
