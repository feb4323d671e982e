#ifndef MBP_ORTHOPOLY_HPP
#define MBP_ORTHOPOLY_HPP

#include <vector>

#include "mbp/diffops.hpp"
#include "mbp/polyops.hpp"
#include "mbp/weights.hpp"

namespace mbp {

enum class Precision { F64, Extended };

const char* precision_name(Precision p);

/// Monic orthogonal polynomials P_0..P_{n_max} with their squared norms
/// H_n = <P_n, P_n> and three-term recurrence data
///   x P_n = P_{n+1} + B_n P_n + C_n P_{n-1}.
struct MonicSequence {
  int size = 0;
  int n_max = 0;
  std::vector<MatrixPolynomial> P;  // index n
  std::vector<Matrix> H;            // index n
  std::vector<Matrix> B;            // index n, defined for n < n_max
  std::vector<Matrix> C;            // index n, defined for 1 <= n < n_max;
                                    // C[0] is a zero placeholder
  /// Max coefficient gap between the Gram-solve and recurrence constructions.
  double dual_path_discrepancy = 0.0;
};

/// <P, Q> = sum_{i,j} P_i M_{i+j} Q_j^T from a moment table.
Matrix inner_product(const MatrixPolynomial& p, const MatrixPolynomial& q,
                     const MomentTable& m);

/// Builds the monic sequence two independent ways (block-Hankel Gram solve
/// and the three-term recurrence) and records their max disagreement. The
/// Gram path is the returned one.
MonicSequence monic_sequence(const MomentTable& m, int n_max,
                             Precision precision = Precision::Extended);

/// Max over n of |P_n . D - Lambda_n P_n| / |P_n| (coefficient max-norms).
double check_eigenfunction(const MonicSequence& seq, const PolyDiffOp& d);

/// Max over i,j <= degree_cap of
/// |<x^i I . D, x^j I> - <x^i I, x^j I . D>| / (|M_{i+j}| + 1).
double check_symmetry(const PolyDiffOp& d, const MomentTable& m,
                      int degree_cap);

}  // namespace mbp

#endif  // MBP_ORTHOPOLY_HPP
