#include "mbp/diffops.hpp"

#include <cmath>
#include <utility>

namespace mbp {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / (i + 1);
  return std::round(r);
}

void trim_op(std::vector<MatrixPolynomial>& coeffs) {
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
}

}  // namespace

PolyDiffOp::PolyDiffOp(int n, std::vector<MatrixPolynomial> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!c.is_zero() && c.size() != n_)
      throw Error(ErrorCode::SizeMismatch, "operator coefficient size mismatch");
  }
  for (auto& c : coeffs_) {
    if (c.is_zero()) c = MatrixPolynomial::zero(n_);
  }
  trim_op(coeffs_);
}

PolyDiffOp PolyDiffOp::zero(int n) { return PolyDiffOp(n, {}); }

PolyDiffOp PolyDiffOp::multiplication(MatrixPolynomial f) {
  int n = f.size();
  return PolyDiffOp(n, {std::move(f)});
}

MatrixPolynomial PolyDiffOp::coeff(int j) const {
  if (j < 0 || j >= static_cast<int>(coeffs_.size()))
    return MatrixPolynomial::zero(n_);
  return coeffs_[j];
}

PolyDiffOp PolyDiffOp::operator+(const PolyDiffOp& o) const {
  if (n_ != o.n_)
    throw Error(ErrorCode::SizeMismatch, "operator size mismatch in +");
  std::vector<MatrixPolynomial> out;
  int m = std::max(order(), o.order());
  out.reserve(m + 1);
  for (int j = 0; j <= m; ++j) out.push_back(coeff(j) + o.coeff(j));
  return PolyDiffOp(n_, std::move(out));
}

PolyDiffOp PolyDiffOp::operator-(const PolyDiffOp& o) const {
  return *this + o * -1.0;
}

PolyDiffOp PolyDiffOp::operator*(double s) const {
  std::vector<MatrixPolynomial> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c * s);
  return PolyDiffOp(n_, std::move(out));
}

bool PolyDiffOp::all_diagonal(double tol) const {
  for (const auto& f : coeffs_) {
    for (const auto& m : f.coeffs()) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

bool PolyDiffOp::degrees_within_order() const {
  for (int j = 0; j < static_cast<int>(coeffs_.size()); ++j)
    if (coeffs_[j].degree() > j) return false;
  return true;
}

double PolyDiffOp::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, c.max_abs_coeff());
  return m;
}

RationalMatrix::RationalMatrix(int n) : n_(n), entries_(n * n) {}

RationalMatrix RationalMatrix::from_polynomial(const MatrixPolynomial& p) {
  RationalMatrix out(p.size());
  for (int i = 0; i < p.size(); ++i) {
    for (int j = 0; j < p.size(); ++j) {
      std::vector<double> c(p.degree() + 1);
      for (int k = 0; k <= p.degree(); ++k) c[k] = p.coeff(k)(i, j);
      out.at(i, j) = RationalFunction::from_polynomial(Polynomial(std::move(c)));
    }
  }
  return out;
}

RationalFunction& RationalMatrix::at(int i, int j) {
  return entries_[static_cast<size_t>(i) * n_ + j];
}

const RationalFunction& RationalMatrix::at(int i, int j) const {
  return entries_[static_cast<size_t>(i) * n_ + j];
}

bool RationalMatrix::is_diagonal() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && !at(i, j).is_zero()) return false;
  return true;
}

PolyDiffOp build_classical_operator(const ScalarWeightSpec& w) {
  LogDerivatives ld = log_derivative_pair(w);
  if (!ld.w_rho_prime_over_w.is_polynomial())
    throw Error(ErrorCode::InternalCheckFailure,
                "(w rho)'/w is not a polynomial");
  Polynomial f1 = ld.w_rho_prime_over_w.numerator();
  Polynomial rho = rho_polynomial(w.family);

  auto lift = [](const Polynomial& p) {
    std::vector<Matrix> coeffs;
    for (int k = 0; k <= p.degree(); ++k) {
      Matrix m(1, 1);
      m(0, 0) = p.coeff(k);
      coeffs.push_back(m);
    }
    return MatrixPolynomial(1, std::move(coeffs));
  };
  return PolyDiffOp(1, {MatrixPolynomial::zero(1), lift(f1), lift(rho)});
}

PolyDiffOp build_tilde_operator(const ValidatedSpec& spec) {
  int n = spec.size();
  Polynomial rho = rho_polynomial(spec.family());

  int deg1 = 0;
  std::vector<Polynomial> diag;
  diag.reserve(n);
  for (const auto& row : spec.spec().rows) {
    LogDerivatives ld = log_derivative_pair(row);
    diag.push_back(ld.w_rho_prime_over_w.numerator());
    deg1 = std::max(deg1, diag.back().degree());
  }
  std::vector<Matrix> f1;
  for (int k = 0; k <= deg1; ++k) {
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = diag[i].coeff(k);
    f1.emplace_back(std::move(m));
  }
  std::vector<Matrix> f2;
  for (int k = 0; k <= rho.degree(); ++k)
    f2.push_back(rho.coeff(k) * Matrix::Identity(n, n));
  return PolyDiffOp(n, {MatrixPolynomial::zero(n),
                        MatrixPolynomial(n, std::move(f1)),
                        MatrixPolynomial(n, std::move(f2))});
}

Matrix k_matrix(int n) {
  Matrix k = Matrix::Zero(n, n);
  for (int i = 1; i < n; i += 2) k(i, i) = 1.0;
  return k;
}

Matrix k_tilde_matrix(const ValidatedSpec& spec) {
  double scale = 0.0;
  switch (spec.family()) {
    case Family::Hermite:
      scale = 2.0;
      break;
    case Family::Laguerre:
      scale = 1.0;
      break;
    case Family::Jacobi:
      scale = spec.spec().rows[0].alpha + spec.spec().rows[0].beta;
      break;
  }
  return k_matrix(spec.size()) * scale;
}

MatrixPolynomial unipotent_factor(const ValidatedSpec& spec) {
  int n = spec.size();
  return MatrixPolynomial(
      n, {Matrix::Identity(n, n), nilpotent_matrix(spec.spec().a, n)});
}

PolyDiffOp build_bochner_operator(const ValidatedSpec& spec) {
  int n = spec.size();
  const auto& rows = spec.spec().rows;
  if (spec.family() == Family::Jacobi) {
    // Re-checked here because deliberately weakened specs reach this point.
    double sum1 = rows[0].alpha + rows[0].beta;
    for (int j = 1; j < n; ++j) {
      double expect = rows[j].alpha + rows[j].beta + 1.0 +
                      ((j + 1) % 2 == 0 ? 1.0 : -1.0);
      if (std::abs(sum1 - expect) > spec.spec().working_tolerance)
        throw Error(ErrorCode::JacobiSumViolation,
                    "alpha_1+beta_1 != alpha_j+beta_j+1+(-1)^j at row " +
                        std::to_string(j + 1));
    }
  }
  Matrix a_mat = nilpotent_matrix(spec.spec().a, n);

  // Coefficients of the d term (f1_c + f1_x x) and the zero-order term,
  // filled entry by entry from the closed forms.
  Matrix f1_c = Matrix::Zero(n, n);
  Matrix f1_x = Matrix::Zero(n, n);
  Matrix f0 = Matrix::Zero(n, n);
  Matrix f2_c = Matrix::Zero(n, n);
  Matrix f2_xx = Matrix::Zero(n, n);

  switch (spec.family()) {
    case Family::Hermite:
      f2_c = Matrix::Identity(n, n);
      for (int i = 0; i < n; ++i) {
        f1_c(i, i) = 2.0 * rows[i].b;
        f1_x(i, i) = -2.0;
        if (i % 2 == 1) f0(i, i) = 2.0;
      }
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (a_mat(s, t) != 0.0) {
            double a = a_mat(s, t);
            f1_c(s, t) = 2.0 * a;
            f1_x(s, t) = 2.0 * a * (rows[t].b - rows[s].b);
            f0(s, t) = 2.0 * a * rows[t].b;
          }
      break;
    case Family::Laguerre:
      f2_xx = Matrix::Identity(n, n);  // reused below as the x^1 slot
      for (int i = 0; i < n; ++i) {
        f1_c(i, i) = rows[i].alpha + 1.0;
        f1_x(i, i) = -1.0;
        if (i % 2 == 1) f0(i, i) = 1.0;
      }
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (a_mat(s, t) != 0.0) {
            double a = a_mat(s, t);
            f1_x(s, t) = a * (2.0 + rows[t].alpha - rows[s].alpha);
            f0(s, t) = a * (rows[t].alpha + 1.0);
          }
      break;
    case Family::Jacobi: {
      f2_c = Matrix::Identity(n, n);
      f2_xx = -Matrix::Identity(n, n);
      double sum1 = rows[0].alpha + rows[0].beta;
      for (int i = 0; i < n; ++i) {
        f1_c(i, i) = rows[i].beta - rows[i].alpha;
        f1_x(i, i) = -(rows[i].alpha + rows[i].beta + 2.0);
        if (i % 2 == 1) f0(i, i) = sum1;
      }
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (a_mat(s, t) != 0.0) {
            double a = a_mat(s, t);
            f1_c(s, t) = 2.0 * a;
            f1_x(s, t) = a * (rows[t].beta - rows[s].beta + rows[s].alpha -
                              rows[t].alpha);
            f0(s, t) = a * (rows[t].beta - rows[t].alpha);
          }
      break;
    }
  }

  std::vector<Matrix> f2_coeffs;
  if (spec.family() == Family::Laguerre) {
    f2_coeffs = {Matrix::Zero(n, n), f2_xx};  // x I
  } else if (spec.family() == Family::Hermite) {
    f2_coeffs = {f2_c};  // I
  } else {
    f2_coeffs = {f2_c, Matrix::Zero(n, n), f2_xx};  // (1 - x^2) I
  }
  PolyDiffOp d(n, {MatrixPolynomial(n, {f0}), MatrixPolynomial(n, {f1_c, f1_x}),
                   MatrixPolynomial(n, std::move(f2_coeffs))});

  // Postcondition: the closed form must agree with T (D~ + K~) T^{-1}.
  PolyDiffOp via_conj = conjugate_by_unipotent(
      build_tilde_operator(spec) +
          PolyDiffOp::multiplication(
              MatrixPolynomial::constant(k_tilde_matrix(spec))),
      unipotent_factor(spec));
  PolyDiffOp diff = d - via_conj;
  double scale = 1.0 + d.max_abs_coeff();
  if (diff.max_abs_coeff() > 1e-10 * scale)
    throw Error(ErrorCode::InternalCheckFailure,
                "closed-form operator disagrees with conjugation route");
  return d;
}

MatrixPolynomial apply_right(const MatrixPolynomial& p, const PolyDiffOp& d) {
  if (p.size() != d.size())
    throw Error(ErrorCode::SizeMismatch, "apply_right size mismatch");
  MatrixPolynomial out = MatrixPolynomial::zero(p.size());
  MatrixPolynomial deriv = p;
  for (int j = 0; j <= d.order(); ++j) {
    out = out + matpoly_mul(deriv, d.coeff(j));
    deriv = deriv.derivative();
  }
  return out;
}

PolyDiffOp compose(const PolyDiffOp& d1, const PolyDiffOp& d2) {
  if (d1.size() != d2.size())
    throw Error(ErrorCode::SizeMismatch, "compose size mismatch");
  int n = d1.size();
  int m1 = d1.order(), m2 = d2.order();
  if (m1 < 0 || m2 < 0) return PolyDiffOp::zero(n);

  // Precompute derivatives of the first operator's coefficients.
  std::vector<std::vector<MatrixPolynomial>> df(m1 + 1);
  for (int i = 0; i <= m1; ++i) {
    df[i].push_back(d1.coeff(i));
    for (int r = 0; r < m2; ++r) df[i].push_back(df[i].back().derivative());
  }

  std::vector<MatrixPolynomial> out(m1 + m2 + 1, MatrixPolynomial::zero(n));
  for (int i = 0; i <= m1; ++i)
    for (int k = 0; k <= m2; ++k)
      for (int j = k; j <= m2; ++j)
        out[i + k] =
            out[i + k] + matpoly_mul(df[i][j - k], d2.coeff(j)) * binom(j, k);
  return PolyDiffOp(n, std::move(out));
}

PolyDiffOp conjugate_by_unipotent(const PolyDiffOp& d,
                                  const MatrixPolynomial& t) {
  MatrixPolynomial t_inv = unipotent_inverse(t);
  return compose(compose(PolyDiffOp::multiplication(t), d),
                 PolyDiffOp::multiplication(t_inv));
}

EigenvalueSequence eigenvalue_sequence(const PolyDiffOp& d, int n_max) {
  if (!d.degrees_within_order())
    throw Error(ErrorCode::DegreeViolation,
                "coefficient degree exceeds its derivative order");
  int n = d.size();
  EigenvalueSequence seq;
  seq.values.reserve(n_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    Matrix lam = Matrix::Zero(n, n);
    double falling = 1.0;
    for (int i = 0; i <= d.order(); ++i) {
      if (i > 0) falling *= static_cast<double>(m - i + 1);
      if (falling == 0.0) break;
      lam += falling * d.coeff(i).coeff(i);
    }
    seq.values.push_back(std::move(lam));
  }
  return seq;
}

RatDiffOp to_rational(const PolyDiffOp& d) {
  RatDiffOp out;
  out.n = d.size();
  for (int j = 0; j <= d.order(); ++j)
    out.coeffs.push_back(RationalMatrix::from_polynomial(d.coeff(j)));
  return out;
}

RatDiffOp formal_adjoint_diagonal(const RatDiffOp& d,
                                  const ValidatedSpec& spec) {
  int n_size = d.n;
  if (n_size != spec.size())
    throw Error(ErrorCode::SizeMismatch, "adjoint size mismatch");
  for (const auto& c : d.coeffs)
    if (!c.is_diagonal())
      throw Error(ErrorCode::NonDiagonalCoefficient,
                  "formal adjoint requires diagonal coefficients");
  int ord = d.order();
  if (ord < 0) return d;

  // Per diagonal entry i, with l = w_i'/w_i:
  //   (w q)^{(m)} / w = L^m(q),  L(q) = q' + l q,
  // so each adjoint coefficient stays rational.
  std::vector<RationalFunction> log_d;
  log_d.reserve(n_size);
  for (const auto& row : spec.spec().rows)
    log_d.push_back(log_derivative_pair(row).w_prime_over_w);

  RatDiffOp out;
  out.n = n_size;
  out.coeffs.assign(ord + 1, RationalMatrix(n_size));
  for (int i = 0; i < n_size; ++i) {
    for (int k = 0; k <= ord; ++k) {
      RationalFunction g;
      for (int j = 0; j + k <= ord; ++j) {
        RationalFunction q = d.coeffs[ord - j].at(i, i);
        if (q.is_zero()) continue;
        for (int r = 0; r < ord - k - j; ++r)
          q = q.derivative() + log_d[i] * q;
        double sign = ((ord - j) % 2 == 0) ? 1.0 : -1.0;
        g = g + q * (sign * binom(ord - j, k));
      }
      out.coeffs[k].at(i, i) = g;
    }
  }
  return out;
}

RatDiffOp formal_adjoint_diagonal(const PolyDiffOp& d,
                                  const ValidatedSpec& spec) {
  return formal_adjoint_diagonal(to_rational(d), spec);
}

double ratdiffop_residual(const RatDiffOp& a, const RatDiffOp& b) {
  if (a.n != b.n)
    throw Error(ErrorCode::SizeMismatch, "residual size mismatch");
  double worst = 0.0;
  int ord = std::max(a.order(), b.order());
  RationalFunction zero;
  for (int k = 0; k <= ord; ++k) {
    for (int i = 0; i < a.n; ++i) {
      for (int j = 0; j < a.n; ++j) {
        const RationalFunction& fa =
            (k <= a.order()) ? a.coeffs[k].at(i, j) : zero;
        const RationalFunction& fb =
            (k <= b.order()) ? b.coeffs[k].at(i, j) : zero;
        worst = std::max(worst, cross_mul_residual(fa, fb));
      }
    }
  }
  return worst;
}

double ratdiffop_residual(const RatDiffOp& a, const PolyDiffOp& b) {
  return ratdiffop_residual(a, to_rational(b));
}

LeadingCoefficientReport leading_coefficient_analysis(const PolyDiffOp& d,
                                                      Family family) {
  int ord = d.order();
  if (ord < 0 || ord % 2 != 0)
    throw Error(ErrorCode::OddOrder, "leading analysis needs even order");
  LeadingCoefficientReport rep;
  rep.half_order = ord / 2;

  Polynomial rho_m = Polynomial::constant(1.0);
  Polynomial rho = rho_polynomial(family);
  for (int i = 0; i < rep.half_order; ++i) rho_m = rho_m * rho;

  int n = d.size();
  MatrixPolynomial ref = MatrixPolynomial::zero(n);
  {
    std::vector<Matrix> coeffs;
    for (int k = 0; k <= rho_m.degree(); ++k)
      coeffs.push_back(rho_m.coeff(k) * Matrix::Identity(n, n));
    ref = MatrixPolynomial(n, std::move(coeffs));
  }

  MatrixPolynomial top = d.coeff(ord);
  double dot = 0.0, norm2 = 0.0;
  int deg = std::max(top.degree(), ref.degree());
  for (int k = 0; k <= deg; ++k) {
    Matrix tk = top.coeff(k), rk = ref.coeff(k);
    dot += (tk.array() * rk.array()).sum();
    norm2 += (rk.array() * rk.array()).sum();
  }
  rep.scale = dot / norm2;
  rep.residual = matpoly_distance(top, ref * rep.scale);
  rep.is_rho_power = rep.residual < 1e-9 * (1.0 + std::abs(rep.scale));
  return rep;
}

}  // namespace mbp
