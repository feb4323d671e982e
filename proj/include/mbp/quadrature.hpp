#ifndef MBP_QUADRATURE_HPP
#define MBP_QUADRATURE_HPP

#include <functional>

#include "mbp/weights.hpp"

namespace mbp {

/// Adaptive Gauss-Kronrod (G7, K15) integration of a matrix-valued function
/// over [a, b]. A panel is accepted when the max-norm of the Kronrod/Gauss
/// gap falls under max(abs_floor, rel_tol * |running estimate|) scaled by the
/// panel's share of the interval. Throws QuadratureNonConvergence when the
/// bisection depth limit is hit.
Matrix integrate_matrix_adaptive(const std::function<Matrix(double)>& f,
                                 double a, double b, double rel_tol,
                                 double abs_floor);

}  // namespace mbp

#endif  // MBP_QUADRATURE_HPP
