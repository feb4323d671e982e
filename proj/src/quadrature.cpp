#include "mbp/quadrature.hpp"

#include <cmath>

namespace mbp {

namespace {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1] (QUADPACK values).
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277,
                       0.381830050505119, 0.417959183673469};

struct Panel {
  Matrix kronrod;
  double gap;  // max-norm of Kronrod minus Gauss
};

Panel gk15(const std::function<Matrix(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Matrix center = f(c);
  Matrix resk = kWgk[7] * center;
  Matrix resg = kWg[3] * center;
  for (int i = 0; i < 7; ++i) {
    Matrix sum = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    resk += kWgk[i] * sum;
    if (i % 2 == 1) resg += kWg[i / 2] * sum;
  }
  Panel p;
  p.kronrod = h * resk;
  p.gap = (h * (resk - resg)).cwiseAbs().maxCoeff();
  return p;
}

void refine(const std::function<Matrix(double)>& f, double a, double b,
            const Panel& p, double tol, double tol_floor, int depth,
            Matrix& total) {
  if (p.gap <= tol || depth >= 48) {
    if (p.gap > tol)
      throw Error(ErrorCode::QuadratureNonConvergence,
                  "bisection depth limit reached");
    total += p.kronrod;
    return;
  }
  const double mid = 0.5 * (a + b);
  // Child budgets halve but never chase below roundoff resolution.
  const double child = std::max(0.5 * tol, tol_floor);
  Panel left = gk15(f, a, mid), right = gk15(f, mid, b);
  refine(f, a, mid, left, child, tol_floor, depth + 1, total);
  refine(f, mid, b, right, child, tol_floor, depth + 1, total);
}

}  // namespace

Matrix integrate_matrix_adaptive(const std::function<Matrix(double)>& f,
                                 double a, double b, double rel_tol,
                                 double abs_floor) {
  Panel whole = gk15(f, a, b);
  double scale = whole.kronrod.cwiseAbs().maxCoeff();
  double tol = std::max(abs_floor, rel_tol * scale);
  double tol_floor = std::max(abs_floor * 1e-3, 1e-16 * (1.0 + scale));
  Matrix total = Matrix::Zero(whole.kronrod.rows(), whole.kronrod.cols());
  refine(f, a, b, whole, tol, tol_floor, 0, total);
  return total;
}

}  // namespace mbp
