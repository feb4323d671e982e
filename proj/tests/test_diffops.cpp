#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mbp/diffops.hpp"
#include "test_util.hpp"

using namespace mbp;
using mbp_test::throws_code;

namespace {

MatrixPolynomial random_matpoly(std::mt19937_64& rng, int n, int deg) {
  std::uniform_int_distribution<int> small(-3, 3);
  std::vector<Matrix> coeffs;
  for (int k = 0; k <= deg; ++k) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = small(rng);
    coeffs.push_back(m);
  }
  return MatrixPolynomial(n, std::move(coeffs));
}

PolyDiffOp random_op(std::mt19937_64& rng, int n, int order) {
  std::vector<MatrixPolynomial> coeffs;
  for (int j = 0; j <= order; ++j)
    coeffs.push_back(random_matpoly(rng, n, j));
  return PolyDiffOp(n, std::move(coeffs));
}

}  // namespace

TEST_CASE("classical operators match the table") {
  // Hermite: d^2 - 2 d (x - b)
  PolyDiffOp h = build_classical_operator(ScalarWeightSpec::hermite(0.5));
  CHECK(h.order() == 2);
  CHECK(h.coeff(2).coeff(0)(0, 0) == 1.0);
  CHECK(h.coeff(1).coeff(0)(0, 0) == 1.0);   // 2b
  CHECK(h.coeff(1).coeff(1)(0, 0) == -2.0);
  CHECK(h.coeff(0).is_zero());

  // Laguerre: d^2 x + d (alpha + 1 - x)
  PolyDiffOp l = build_classical_operator(ScalarWeightSpec::laguerre(0.3));
  CHECK(l.coeff(2).coeff(1)(0, 0) == 1.0);
  CHECK(l.coeff(1).coeff(0)(0, 0) == doctest::Approx(1.3));
  CHECK(l.coeff(1).coeff(1)(0, 0) == -1.0);

  // Jacobi: d^2 (1 - x^2) + d (beta - alpha - x(alpha + beta + 2))
  PolyDiffOp j =
      build_classical_operator(ScalarWeightSpec::jacobi(1.0, 2.0));
  CHECK(j.coeff(2).coeff(2)(0, 0) == -1.0);
  CHECK(j.coeff(1).coeff(0)(0, 0) == 1.0);
  CHECK(j.coeff(1).coeff(1)(0, 0) == -5.0);
}

TEST_CASE("tilde operator with N = 1 reduces to the classical one") {
  MatrixWeightSpec s;
  s.family = Family::Laguerre;
  s.size = 1;
  s.rows = {ScalarWeightSpec::laguerre(0.7)};
  s.a = {};
  PolyDiffOp tilde = build_tilde_operator(validate_spec(s));
  PolyDiffOp classical =
      build_classical_operator(ScalarWeightSpec::laguerre(0.7));
  CHECK((tilde - classical).max_abs_coeff() == 0.0);
}

TEST_CASE("bochner operator reproduces the 2x2 closed forms") {
  PolyDiffOp d =
      build_bochner_operator(validate_spec(mbp_test::hermite_2x2()));
  // d [[ -2x+2b, -2abx+2a ],[ 0, -2x ]] with a = b = 1
  Matrix f1c(2, 2), f1x(2, 2), f0(2, 2);
  f1c << 2, 2, 0, 0;
  f1x << -2, -2, 0, -2;
  f0 << 0, 0, 0, 2;
  CHECK((d.coeff(1).coeff(0) - f1c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.coeff(1).coeff(1) - f1x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.coeff(0).coeff(0) - f0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.coeff(2).coeff(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);

  PolyDiffOp dl =
      build_bochner_operator(validate_spec(mbp_test::laguerre_2x2()));
  // off-diagonal x-coefficient a(2 + beta - alpha)
  CHECK(dl.coeff(1).coeff(1)(0, 1) == 1.0 * (2.0 + 1.7 - 0.3));
  CHECK(dl.coeff(0).coeff(0)(0, 1) == 1.0 * (1.7 + 1.0));
  CHECK(dl.coeff(0).coeff(0)(1, 1) == 1.0);

  PolyDiffOp dj =
      build_bochner_operator(validate_spec(mbp_test::jacobi_2x2()));
  CHECK(dj.coeff(1).coeff(0)(0, 0) == 2.0 - 1.5);
  CHECK(dj.coeff(1).coeff(1)(0, 0) == -(1.5 + 2.0 + 2.0));
  CHECK(dj.coeff(1).coeff(1)(0, 1) == 1.0 * (1.25 - 2.0 + 1.5 - 0.25));
  CHECK(dj.coeff(0).coeff(0)(0, 1) == 1.0 * (1.25 - 0.25));
  CHECK(dj.coeff(0).coeff(0)(1, 1) == 1.5 + 2.0);
}

TEST_CASE("bochner operator rejects a broken jacobi sum") {
  MatrixWeightSpec bad = mbp_test::jacobi_2x2();
  bad.rows[1] = ScalarWeightSpec::jacobi(0.25, 1.0);
  CHECK(throws_code(ErrorCode::JacobiSumViolation, [&] {
    build_bochner_operator(ValidatedSpec::assume_valid(bad));
  }));
}

TEST_CASE("right action basics") {
  int n = 2;
  PolyDiffOp dd(n, {MatrixPolynomial::zero(n), MatrixPolynomial::zero(n),
                    MatrixPolynomial::identity(n)});
  CHECK(apply_right(MatrixPolynomial::scalar_monomial(n, 1), dd).is_zero());

  std::mt19937_64 rng(0x5EED);
  PolyDiffOp d = random_op(rng, n, 2);
  CHECK(matpoly_distance(apply_right(MatrixPolynomial::identity(n), d),
                         d.coeff(0)) == 0.0);

  // (C P) . D = C (P . D)
  for (int trial = 0; trial < 10; ++trial) {
    MatrixPolynomial p = random_matpoly(rng, n, 3);
    Matrix c = random_matpoly(rng, n, 0).coeff(0);
    CHECK(matpoly_distance(apply_right(c * p, d), c * apply_right(p, d)) ==
          0.0);
  }
}

TEST_CASE("composition matches iterated application exactly") {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    PolyDiffOp d1 = random_op(rng, n, 2);
    PolyDiffOp d2 = random_op(rng, n, 2);
    MatrixPolynomial p = random_matpoly(rng, n, 4);
    MatrixPolynomial lhs = apply_right(apply_right(p, d1), d2);
    MatrixPolynomial rhs = apply_right(p, compose(d1, d2));
    CHECK(matpoly_distance(lhs, rhs) == 0.0);
  }
}

TEST_CASE("composition units") {
  int n = 3;
  PolyDiffOp del(n, {MatrixPolynomial::zero(n), MatrixPolynomial::identity(n)});
  PolyDiffOp del2 = compose(del, del);
  CHECK(del2.order() == 2);
  CHECK(del2.coeff(1).is_zero());
  CHECK(matpoly_distance(del2.coeff(2), MatrixPolynomial::identity(n)) == 0.0);

  std::mt19937_64 rng(7);
  Matrix c1 = random_matpoly(rng, n, 0).coeff(0);
  Matrix c2 = random_matpoly(rng, n, 0).coeff(0);
  PolyDiffOp prod = compose(PolyDiffOp::multiplication(MatrixPolynomial::constant(c1)),
                            PolyDiffOp::multiplication(MatrixPolynomial::constant(c2)));
  CHECK(prod.order() == 0);
  CHECK((prod.coeff(0).coeff(0) - c1 * c2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conjugation by the unipotent factor") {
  // zero-order diag(1,0) conjugated by I + a E12 x picks up -a x E12
  double a = 2.0;
  Matrix am = Matrix::Zero(2, 2);
  am(0, 1) = a;
  MatrixPolynomial t(2, {Matrix::Identity(2, 2), am});
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  PolyDiffOp conj = conjugate_by_unipotent(
      PolyDiffOp::multiplication(MatrixPolynomial::constant(g)), t);
  CHECK(conj.order() == 0);
  CHECK(conj.coeff(0).coeff(0) == g);
  CHECK(conj.coeff(0).coeff(1)(0, 1) == -a);
  CHECK(conj.coeff(0).coeff(1)(0, 0) == 0.0);

  // round trip and coherence with the right action
  std::mt19937_64 rng(0x5EED);
  PolyDiffOp d = random_op(rng, 2, 2);
  PolyDiffOp back =
      conjugate_by_unipotent(conjugate_by_unipotent(d, t), unipotent_inverse(t));
  CHECK((back - d).max_abs_coeff() == 0.0);

  MatrixPolynomial p = random_matpoly(rng, 2, 3);
  MatrixPolynomial via_op = apply_right(p, conjugate_by_unipotent(d, t));
  MatrixPolynomial direct =
      matpoly_mul(apply_right(matpoly_mul(p, t), d), unipotent_inverse(t));
  CHECK(matpoly_distance(via_op, direct) == 0.0);
}

TEST_CASE("conjugation is an algebra map") {
  std::mt19937_64 rng(0x5EED);
  Matrix am = Matrix::Zero(3, 3);
  am(0, 1) = 1.0;
  am(2, 1) = -0.5;
  MatrixPolynomial t(3, {Matrix::Identity(3, 3), am});
  for (int trial = 0; trial < 10; ++trial) {
    PolyDiffOp d1 = random_op(rng, 3, 2);
    PolyDiffOp d2 = random_op(rng, 3, 2);
    PolyDiffOp lhs = conjugate_by_unipotent(compose(d1, d2), t);
    PolyDiffOp rhs = compose(conjugate_by_unipotent(d1, t),
                             conjugate_by_unipotent(d2, t));
    CHECK((lhs - rhs).max_abs_coeff() == 0.0);
  }
}

TEST_CASE("conjugating the tilde operator by T gives the bochner operator") {
  for (const auto& raw : {mbp_test::hermite_2x2(), mbp_test::laguerre_2x2(),
                          mbp_test::jacobi_2x2()}) {
    ValidatedSpec spec = validate_spec(raw);
    PolyDiffOp inner =
        build_tilde_operator(spec) +
        PolyDiffOp::multiplication(
            MatrixPolynomial::constant(k_tilde_matrix(spec)));
    PolyDiffOp via_conj = conjugate_by_unipotent(inner, unipotent_factor(spec));
    PolyDiffOp d = build_bochner_operator(spec);
    CHECK((via_conj - d).max_abs_coeff() <= 1e-13);
  }
}

TEST_CASE("eigenvalue sequence closed form") {
  PolyDiffOp d =
      build_bochner_operator(validate_spec(mbp_test::hermite_2x2()));
  EigenvalueSequence lam = eigenvalue_sequence(d, 8);
  // Lambda_0 = constant term of F_0
  CHECK((lam.values[0] - d.coeff(0).coeff(0)).cwiseAbs().maxCoeff() == 0.0);
  for (int n = 0; n <= 8; ++n) {
    Matrix expect(2, 2);  // [[-2n, -2abn],[0, -2n+2]] with a = b = 1
    expect << -2.0 * n, -2.0 * n, 0.0, -2.0 * n + 2.0;
    CHECK((lam.values[n] - expect).cwiseAbs().maxCoeff() == 0.0);
  }

  // representation property under powers
  EigenvalueSequence lam2 = eigenvalue_sequence(compose(d, d), 8);
  for (int n = 0; n <= 8; ++n) {
    CHECK((lam2.values[n] - lam.values[n] * lam.values[n])
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }

  PolyDiffOp bad(1, {MatrixPolynomial::scalar_monomial(1, 1)});
  CHECK(throws_code(ErrorCode::DegreeViolation,
                    [&] { eigenvalue_sequence(bad, 3); }));
}

TEST_CASE("conjugated bochner operator has the diagonal structure") {
  for (const auto& raw : {mbp_test::hermite_2x2(), mbp_test::laguerre_2x2(),
                          mbp_test::jacobi_2x2()}) {
    ValidatedSpec spec = validate_spec(raw);
    PolyDiffOp d = build_bochner_operator(spec);
    MatrixPolynomial t = unipotent_factor(spec);
    PolyDiffOp diag_op = conjugate_by_unipotent(d, unipotent_inverse(t));
    CHECK(diag_op.all_diagonal(1e-12));
    CHECK(diag_op.degrees_within_order());

    // G_j = F_j + x [A, F_j] + (j+1) A F_{j+1}
    Matrix a_mat = nilpotent_matrix(raw.a, raw.size);
    MatrixPolynomial x_poly = MatrixPolynomial::scalar_monomial(raw.size, 1);
    for (int j = 0; j <= d.order(); ++j) {
      MatrixPolynomial f = diag_op.coeff(j);
      MatrixPolynomial f_next = diag_op.coeff(j + 1);
      MatrixPolynomial expect = f +
                                matpoly_mul(x_poly, a_mat * f - f * a_mat) +
                                (a_mat * f_next) * static_cast<double>(j + 1);
      CHECK(matpoly_distance(d.coeff(j), expect) <= 1e-12);
    }
  }
}

TEST_CASE("formal adjoint fixes zero-order real diagonal matrices") {
  ValidatedSpec spec = validate_spec(mbp_test::laguerre_2x2());
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 3.0;
  c(1, 1) = -2.0;
  RatDiffOp adj = formal_adjoint_diagonal(
      PolyDiffOp::multiplication(MatrixPolynomial::constant(c)), spec);
  CHECK(adj.order() == 0);
  CHECK(adj.coeffs[0].at(0, 0).eval(1.0) == 3.0);
  CHECK(adj.coeffs[0].at(1, 1).eval(1.0) == -2.0);
  CHECK(adj.coeffs[0].at(0, 1).is_zero());
}

TEST_CASE("the classical hermite operator is self-adjoint") {
  MatrixWeightSpec s;
  s.family = Family::Hermite;
  s.size = 1;
  s.rows = {ScalarWeightSpec::hermite(1.0)};
  s.a = {};
  ValidatedSpec spec = validate_spec(s);
  PolyDiffOp delta = build_classical_operator(s.rows[0]);
  RatDiffOp adj = formal_adjoint_diagonal(delta, spec);
  CHECK(ratdiffop_residual(adj, delta) <= 1e-13);
}

TEST_CASE("tilde + correction is self-adjoint and adjoint is an involution") {
  for (const auto& raw : {mbp_test::hermite_2x2(), mbp_test::laguerre_2x2(),
                          mbp_test::jacobi_2x2()}) {
    ValidatedSpec spec = validate_spec(raw);
    PolyDiffOp inner =
        build_tilde_operator(spec) +
        PolyDiffOp::multiplication(
            MatrixPolynomial::constant(k_tilde_matrix(spec)));
    RatDiffOp adj = formal_adjoint_diagonal(inner, spec);
    CHECK(ratdiffop_residual(adj, inner) <= 1e-12);
    RatDiffOp twice = formal_adjoint_diagonal(adj, spec);
    CHECK(ratdiffop_residual(twice, inner) <= 1e-12);
  }

  ValidatedSpec spec = validate_spec(mbp_test::hermite_2x2());
  CHECK(throws_code(ErrorCode::NonDiagonalCoefficient, [&] {
    formal_adjoint_diagonal(build_bochner_operator(spec), spec);
  }));
}

TEST_CASE("leading coefficient analysis") {
  ValidatedSpec hspec = validate_spec(mbp_test::hermite_2x2());
  LeadingCoefficientReport rep = leading_coefficient_analysis(
      build_bochner_operator(hspec), Family::Hermite);
  CHECK(rep.half_order == 1);
  CHECK(rep.scale == doctest::Approx(1.0));
  CHECK(rep.is_rho_power);

  ValidatedSpec lspec = validate_spec(mbp_test::laguerre_2x2());
  PolyDiffOp dl = build_bochner_operator(lspec);
  LeadingCoefficientReport rep2 =
      leading_coefficient_analysis(compose(dl, dl), Family::Laguerre);
  CHECK(rep2.half_order == 2);
  CHECK(rep2.scale == doctest::Approx(1.0));
  CHECK(rep2.is_rho_power);
  // top coefficient is x^2 I
  CHECK(matpoly_distance(compose(dl, dl).coeff(4),
                         MatrixPolynomial::scalar_monomial(2, 2)) <= 1e-12);

  Matrix unequal(2, 2);
  unequal << 1, 0, 0, 2;
  PolyDiffOp counter(2, {MatrixPolynomial::zero(2), MatrixPolynomial::zero(2),
                         MatrixPolynomial::constant(unequal)});
  CHECK_FALSE(
      leading_coefficient_analysis(counter, Family::Hermite).is_rho_power);

  PolyDiffOp odd(2, {MatrixPolynomial::zero(2), MatrixPolynomial::identity(2)});
  CHECK(throws_code(ErrorCode::OddOrder, [&] {
    leading_coefficient_analysis(odd, Family::Hermite);
  }));
}
