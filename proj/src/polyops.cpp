#include "mbp/polyops.hpp"

#include <algorithm>
#include <cmath>

namespace mbp {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int power, double c) {
  std::vector<double> v(power + 1, 0.0);
  v[power] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::coeff(int k) const {
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
}

double Polynomial::eval(double x) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> v(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (size_t k = 0; k < v.size(); ++k) v[k] = coeff(k) + o.coeff(k);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<double> v(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (size_t k = 0; k < v.size(); ++k) v[k] = coeff(k) - o.coeff(k);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<double> v(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j)
      v[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> v = coeffs_;
  for (double& c : v) c *= s;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

// ---------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero())
    throw Error(ErrorCode::ParamOutOfRange, "zero denominator");
  const double lead = den_.coeffs().back();
  if (lead != 1.0) {
    num_ = num_ * (1.0 / lead);
    den_ = den_ * (1.0 / lead);
  }
}

RationalFunction RationalFunction::from_polynomial(Polynomial p) {
  return RationalFunction(std::move(p), Polynomial::constant(1.0));
}

RationalFunction RationalFunction::constant(double c) {
  return from_polynomial(Polynomial::constant(c));
}

double RationalFunction::eval(double x) const {
  return num_.eval(x) / den_.eval(x);
}

RationalFunction RationalFunction::derivative() const {
  // (n/d)' = (n'd - nd') / d^2
  return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(),
                          den_ * den_);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(double s) const {
  return RationalFunction(num_ * s, den_);
}

RationalFunction RationalFunction::operator-() const { return *this * -1.0; }

double cross_mul_residual(const RationalFunction& f, const RationalFunction& g) {
  Polynomial diff =
      f.numerator() * g.denominator() - g.numerator() * f.denominator();
  return diff.max_abs_coeff();
}

bool approx_equal(const RationalFunction& f, const RationalFunction& g,
                  double tol) {
  const double scale =
      std::max((f.numerator() * g.denominator()).max_abs_coeff(),
               (g.numerator() * f.denominator()).max_abs_coeff());
  return cross_mul_residual(f, g) <= tol * (1.0 + scale);
}

// ---------------------------------------------------------- MatrixPolynomial

MatrixPolynomial::MatrixPolynomial(int n, std::vector<Matrix> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
  for (const Matrix& c : coeffs_) {
    if (c.rows() != n_ || c.cols() != n_)
      throw Error(ErrorCode::SizeMismatch, "coefficient is not N x N");
  }
  trim();
}

MatrixPolynomial MatrixPolynomial::zero(int n) {
  return MatrixPolynomial(n, {});
}

MatrixPolynomial MatrixPolynomial::identity(int n) {
  return MatrixPolynomial(n, {Matrix::Identity(n, n)});
}

MatrixPolynomial MatrixPolynomial::constant(Matrix m) {
  const int n = static_cast<int>(m.rows());
  return MatrixPolynomial(n, {std::move(m)});
}

MatrixPolynomial MatrixPolynomial::scalar_monomial(int n, int power, double c) {
  std::vector<Matrix> v(power + 1, Matrix::Zero(n, n));
  v[power] = Matrix::Identity(n, n) * c;
  return MatrixPolynomial(n, std::move(v));
}

void MatrixPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().cwiseAbs().maxCoeff() == 0.0)
    coeffs_.pop_back();
}

void MatrixPolynomial::require_same_size(const MatrixPolynomial& o) const {
  if (n_ != o.n_)
    throw Error(ErrorCode::SizeMismatch, "matrix polynomial sizes differ");
}

Matrix MatrixPolynomial::coeff(int k) const {
  if (k >= 0 && k < static_cast<int>(coeffs_.size())) return coeffs_[k];
  return Matrix::Zero(n_, n_);
}

Matrix MatrixPolynomial::eval(double x) const {
  Matrix v = Matrix::Zero(n_, n_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

MatrixPolynomial MatrixPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return zero(n_);
  std::vector<Matrix> d;
  d.reserve(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k)
    d.push_back(static_cast<double>(k) * coeffs_[k]);
  return MatrixPolynomial(n_, std::move(d));
}

double MatrixPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const Matrix& c : coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

MatrixPolynomial MatrixPolynomial::operator+(const MatrixPolynomial& o) const {
  require_same_size(o);
  std::vector<Matrix> v;
  const int d = std::max(degree(), o.degree());
  for (int k = 0; k <= d; ++k) v.push_back(coeff(k) + o.coeff(k));
  return MatrixPolynomial(n_, std::move(v));
}

MatrixPolynomial MatrixPolynomial::operator-(const MatrixPolynomial& o) const {
  require_same_size(o);
  std::vector<Matrix> v;
  const int d = std::max(degree(), o.degree());
  for (int k = 0; k <= d; ++k) v.push_back(coeff(k) - o.coeff(k));
  return MatrixPolynomial(n_, std::move(v));
}

MatrixPolynomial MatrixPolynomial::operator*(const MatrixPolynomial& o) const {
  require_same_size(o);
  if (is_zero() || o.is_zero()) return zero(n_);
  std::vector<Matrix> v(coeffs_.size() + o.coeffs_.size() - 1,
                        Matrix::Zero(n_, n_));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j)
      v[i + j] += coeffs_[i] * o.coeffs_[j];
  return MatrixPolynomial(n_, std::move(v));
}

MatrixPolynomial MatrixPolynomial::operator*(double s) const {
  std::vector<Matrix> v = coeffs_;
  for (Matrix& c : v) c *= s;
  return MatrixPolynomial(n_, std::move(v));
}

MatrixPolynomial MatrixPolynomial::operator-() const { return *this * -1.0; }

MatrixPolynomial operator*(const Matrix& c, const MatrixPolynomial& p) {
  std::vector<Matrix> v = p.coeffs();
  for (Matrix& m : v) m = c * m;
  return MatrixPolynomial(p.size(), std::move(v));
}

MatrixPolynomial MatrixPolynomial::operator*(const Matrix& c) const {
  std::vector<Matrix> v = coeffs_;
  for (Matrix& m : v) m = m * c;
  return MatrixPolynomial(n_, std::move(v));
}

bool MatrixPolynomial::exactly_equal(const MatrixPolynomial& o) const {
  if (n_ != o.n_ || coeffs_.size() != o.coeffs_.size()) return false;
  for (size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != o.coeffs_[k]) return false;
  return true;
}

MatrixPolynomial matpoly_mul(const MatrixPolynomial& p,
                             const MatrixPolynomial& q) {
  return p * q;
}

MatrixPolynomial matpoly_derivative(const MatrixPolynomial& p) {
  return p.derivative();
}

double matpoly_distance(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  return (p - q).max_abs_coeff();
}

MatrixPolynomial unipotent_inverse(const MatrixPolynomial& t) {
  const int n = t.size();
  const MatrixPolynomial id = MatrixPolynomial::identity(n);
  const MatrixPolynomial m = t - id;  // must be jointly nilpotent
  if (!m.is_zero() && !m.coeff(0).isZero(0.0)) {
    throw Error(ErrorCode::NotUnipotent, "constant term is not the identity");
  }
  MatrixPolynomial s = id;
  MatrixPolynomial power = id;
  for (int k = 1; k <= n; ++k) {
    power = power * (-m);
    if (power.is_zero()) break;
    if (k == n) {
      throw Error(ErrorCode::NotUnipotent,
                  "Neumann series does not terminate within N steps");
    }
    s = s + power;
  }
  const MatrixPolynomial check = t * s - id;
  if (check.max_abs_coeff() > 1e-12 * (1.0 + t.max_abs_coeff())) {
    throw Error(ErrorCode::NotUnipotent, "T * S != I after series inversion");
  }
  return s;
}

Polynomial rho_polynomial(Family family) {
  switch (family) {
    case Family::Hermite: return Polynomial::constant(1.0);
    case Family::Laguerre: return Polynomial::monomial(1);
    case Family::Jacobi: return Polynomial({1.0, 0.0, -1.0});
  }
  return Polynomial();
}

LogDerivatives log_derivative_pair(const ScalarWeightSpec& w) {
  if (!w.params_in_range())
    throw Error(ErrorCode::ParamOutOfRange, "invalid scalar weight parameters");
  LogDerivatives out;
  switch (w.family) {
    case Family::Hermite:
      // (w rho)'/w = w'/w = -2x + 2b
      out.w_rho_prime_over_w =
          RationalFunction::from_polynomial(Polynomial({2.0 * w.b, -2.0}));
      out.w_prime_over_w = out.w_rho_prime_over_w;
      break;
    case Family::Laguerre:
      out.w_rho_prime_over_w =
          RationalFunction::from_polynomial(Polynomial({w.alpha + 1.0, -1.0}));
      out.w_prime_over_w =
          RationalFunction(Polynomial({w.alpha, -1.0}), Polynomial::monomial(1));
      break;
    case Family::Jacobi:
      out.w_rho_prime_over_w = RationalFunction::from_polynomial(
          Polynomial({w.beta - w.alpha, -(w.alpha + w.beta + 2.0)}));
      // (-alpha(1+x) + beta(1-x)) / (1 - x^2)
      out.w_prime_over_w =
          RationalFunction(Polynomial({w.beta - w.alpha, -(w.alpha + w.beta)}),
                           Polynomial({1.0, 0.0, -1.0}));
      break;
  }
  return out;
}

}  // namespace mbp
