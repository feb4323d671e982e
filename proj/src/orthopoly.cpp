#include "mbp/orthopoly.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace mbp {

const char* precision_name(Precision p) {
  return p == Precision::F64 ? "f64" : "extended";
}

namespace {

// One polynomial = list of coefficient matrices, constant term first.
template <class Mat>
using Coeffs = std::vector<Mat>;

template <class Mat>
Mat ip(const Coeffs<Mat>& p, const Coeffs<Mat>& q, const std::vector<Mat>& m) {
  const int need = static_cast<int>(p.size() + q.size()) - 2;
  if (need >= static_cast<int>(m.size()))
    throw Error(ErrorCode::MomentTableTooSmall,
                "inner product needs moment order " + std::to_string(need));
  const int n = static_cast<int>(m[0].rows());
  Mat out = Mat::Zero(n, n);
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j)
      out += p[i] * m[i + j] * q[j].transpose();
  return out;
}

// Relative gap: coefficients grow like high-order moments, so compare
// against the polynomials' own scale.
template <class Mat>
double coeff_gap(const Coeffs<Mat>& p, const Coeffs<Mat>& q) {
  double worst = 0.0, scale = 1.0;
  size_t m = std::max(p.size(), q.size());
  const int n = static_cast<int>(p[0].rows());
  for (size_t k = 0; k < m; ++k) {
    Mat a = k < p.size() ? p[k] : Mat(Mat::Zero(n, n));
    Mat b = k < q.size() ? q[k] : Mat(Mat::Zero(n, n));
    worst = std::max(worst,
                     static_cast<double>((a - b).cwiseAbs().maxCoeff()));
    scale = std::max({scale, static_cast<double>(a.cwiseAbs().maxCoeff()),
                      static_cast<double>(b.cwiseAbs().maxCoeff())});
  }
  return worst / scale;
}

// Solve X A = B for symmetric positive definite A.
template <class Mat>
Mat solve_right(const Mat& b, const Mat& a) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularGram, "norm matrix not positive definite");
  return llt.solve(b.transpose()).transpose();
}

// P_n coefficients by solving the block-Hankel orthogonality system
//   sum_{j<n} G_{n,j} M_{j+k} = -M_{n+k},  k = 0..n-1.
template <class Mat>
std::vector<Coeffs<Mat>> gram_path(const std::vector<Mat>& m, int n_max) {
  const int n_size = static_cast<int>(m[0].rows());
  std::vector<Coeffs<Mat>> out;
  out.push_back({Mat::Identity(n_size, n_size)});
  for (int n = 1; n <= n_max; ++n) {
    if (2 * n - 1 >= static_cast<int>(m.size()))
      throw Error(ErrorCode::MomentTableTooSmall,
                  "gram path needs moments through order 2n-1");
    Mat h(n * n_size, n * n_size);
    Mat rhs(n * n_size, n_size);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k)
        h.block(j * n_size, k * n_size, n_size, n_size) = m[j + k];
      rhs.block(j * n_size, 0, n_size, n_size) = -m[n + j].transpose();
    }
    Eigen::LLT<Mat> llt(h);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::SingularGram,
                  "block-Hankel moment matrix not positive definite");
    Mat sol = llt.solve(rhs);  // stacked transposed coefficients
    Coeffs<Mat> p(n + 1);
    for (int j = 0; j < n; ++j)
      p[j] = sol.block(j * n_size, 0, n_size, n_size).transpose();
    p[n] = Mat::Identity(n_size, n_size);
    out.push_back(std::move(p));
  }
  return out;
}

template <class Mat>
Coeffs<Mat> shift_x(const Coeffs<Mat>& p) {
  Coeffs<Mat> out;
  out.push_back(Mat::Zero(p[0].rows(), p[0].cols()));
  for (const auto& c : p) out.push_back(c);
  return out;
}

template <class Mat>
struct BuildResult {
  std::vector<Coeffs<Mat>> P;
  std::vector<Mat> H, B, C;
  double discrepancy = 0.0;
};

template <class Mat>
BuildResult<Mat> build(const std::vector<Mat>& m, int n_max) {
  const int n_size = static_cast<int>(m[0].rows());
  BuildResult<Mat> r;
  r.P = gram_path(m, n_max);

  r.H.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) r.H.push_back(ip(r.P[n], r.P[n], m));

  r.B.assign(n_max + 1, Mat::Zero(n_size, n_size));
  r.C.assign(n_max + 1, Mat::Zero(n_size, n_size));
  for (int n = 0; n < n_max; ++n)
    r.B[n] = solve_right(Mat(ip(shift_x(r.P[n]), r.P[n], m)), r.H[n]);
  for (int n = 1; n < n_max; ++n) r.C[n] = solve_right(r.H[n], r.H[n - 1]);

  // Independent path: iterate the recurrence from P_0, P_1 with B, C
  // recomputed from the iterates themselves.
  std::vector<Coeffs<Mat>> q;
  q.push_back({Mat::Identity(n_size, n_size)});
  std::vector<Mat> qh{m[0]};
  for (int n = 0; n < n_max; ++n) {
    Mat bn = solve_right(Mat(ip(shift_x(q[n]), q[n], m)), qh[n]);
    Coeffs<Mat> next = shift_x(q[n]);
    for (size_t k = 0; k < q[n].size(); ++k) next[k] -= bn * q[n][k];
    if (n > 0) {
      Mat cn = solve_right(qh[n], qh[n - 1]);
      for (size_t k = 0; k < q[n - 1].size(); ++k) next[k] -= cn * q[n - 1][k];
    }
    q.push_back(std::move(next));
    qh.push_back(ip(q[n + 1], q[n + 1], m));
  }
  for (int n = 0; n <= n_max; ++n)
    r.discrepancy = std::max(r.discrepancy, coeff_gap(r.P[n], q[n]));
  return r;
}

MatrixPolynomial to_matpoly(const Coeffs<Matrix>& c) {
  return MatrixPolynomial(static_cast<int>(c[0].rows()), c);
}

Matrix demote(const MatrixL& m) { return m.cast<double>(); }

}  // namespace

Matrix inner_product(const MatrixPolynomial& p, const MatrixPolynomial& q,
                     const MomentTable& m) {
  Coeffs<Matrix> pc(p.coeffs()), qc(q.coeffs());
  if (pc.empty()) pc.push_back(Matrix::Zero(m.size, m.size));
  if (qc.empty()) qc.push_back(Matrix::Zero(m.size, m.size));
  return ip(pc, qc, m.entries);
}

MonicSequence monic_sequence(const MomentTable& m, int n_max,
                             Precision precision) {
  if (m.max_order() < 2 * n_max + 1)
    throw Error(ErrorCode::MomentTableTooSmall,
                "need moments through order 2 n_max + 1");
  MonicSequence seq;
  seq.size = m.size;
  seq.n_max = n_max;
  if (precision == Precision::F64) {
    auto r = build(m.entries, n_max);
    for (auto& p : r.P) seq.P.push_back(to_matpoly(p));
    seq.H = std::move(r.H);
    seq.B = std::move(r.B);
    seq.C = std::move(r.C);
    seq.dual_path_discrepancy = r.discrepancy;
  } else {
    auto r = build(m.entries_ext, n_max);
    for (auto& p : r.P) {
      Coeffs<Matrix> c;
      for (auto& mat : p) c.push_back(demote(mat));
      seq.P.push_back(to_matpoly(c));
    }
    for (auto& h : r.H) seq.H.push_back(demote(h));
    for (auto& b : r.B) seq.B.push_back(demote(b));
    for (auto& c : r.C) seq.C.push_back(demote(c));
    seq.dual_path_discrepancy = r.discrepancy;
  }
  return seq;
}

double check_eigenfunction(const MonicSequence& seq, const PolyDiffOp& d) {
  EigenvalueSequence lam = eigenvalue_sequence(d, seq.n_max);
  double worst = 0.0;
  for (int n = 0; n <= seq.n_max; ++n) {
    MatrixPolynomial r =
        apply_right(seq.P[n], d) - lam.values[n] * seq.P[n];
    double scale = std::max(1.0, seq.P[n].max_abs_coeff());
    worst = std::max(worst, r.max_abs_coeff() / scale);
  }
  return worst;
}

double check_symmetry(const PolyDiffOp& d, const MomentTable& m,
                      int degree_cap) {
  const int n = d.size();
  std::vector<MatrixPolynomial> mono, applied;
  for (int i = 0; i <= degree_cap; ++i) {
    mono.push_back(MatrixPolynomial::scalar_monomial(n, i));
    applied.push_back(apply_right(mono.back(), d));
  }
  double worst = 0.0;
  for (int i = 0; i <= degree_cap; ++i) {
    for (int j = 0; j <= degree_cap; ++j) {
      Matrix lhs = inner_product(applied[i], mono[j], m);
      Matrix rhs = inner_product(mono[i], applied[j], m);
      double scale = m.entries[i + j].cwiseAbs().maxCoeff() + 1.0;
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / scale);
    }
  }
  return worst;
}

}  // namespace mbp
