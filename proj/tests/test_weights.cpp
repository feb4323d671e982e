#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mbp/weights.hpp"
#include "test_util.hpp"

using namespace mbp;
using mbp_test::throws_code;

namespace {
const double kSqrtPi = std::sqrt(M_PI);
}

TEST_CASE("hermite scalar moments") {
  ScalarWeightSpec w0 = ScalarWeightSpec::hermite(0.0);
  CHECK(scalar_moment(w0, 0) == doctest::Approx(kSqrtPi).epsilon(1e-14));
  CHECK(scalar_moment(w0, 1) == doctest::Approx(0.0));
  CHECK(scalar_moment(w0, 2) == doctest::Approx(0.5 * kSqrtPi).epsilon(1e-14));

  // m_0 = sqrt(pi) e^{b^2}
  ScalarWeightSpec w1 = ScalarWeightSpec::hermite(1.0);
  CHECK(scalar_moment(w1, 0) ==
        doctest::Approx(kSqrtPi * std::exp(1.0)).epsilon(1e-14));
  CHECK(scalar_moment(w1, 0) == doctest::Approx(4.8180291).epsilon(1e-7));
}

TEST_CASE("laguerre scalar moments are gamma ratios") {
  ScalarWeightSpec w = ScalarWeightSpec::laguerre(0.3);
  for (int k = 0; k <= 6; ++k)
    CHECK(scalar_moment(w, k) ==
          doctest::Approx(std::tgamma(0.3 + k + 1.0)).epsilon(1e-13));
}

TEST_CASE("jacobi scalar moments") {
  ScalarWeightSpec flat = ScalarWeightSpec::jacobi(0.0, 0.0);
  CHECK(scalar_moment(flat, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(scalar_moment(flat, 1) == doctest::Approx(0.0));
  CHECK(scalar_moment(flat, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // m_0 = 2^{a+b+1} B(a+1, b+1)
  ScalarWeightSpec w = ScalarWeightSpec::jacobi(1.5, 0.25);
  double beta = std::tgamma(2.5) * std::tgamma(1.25) / std::tgamma(3.75);
  CHECK(scalar_moment(w, 0) ==
        doctest::Approx(std::pow(2.0, 2.75) * beta).epsilon(1e-13));
}

TEST_CASE("high-order jacobi moments stay accurate") {
  // alternating-sign closed forms lose digits; the recurrence must not
  ScalarWeightSpec w = ScalarWeightSpec::jacobi(0.3, 1.7);
  auto ext = scalar_moments_ext(w, 20);
  // reference from a 50-digit quadrature of x^18 (1-x)^0.3 (1+x)^1.7
  CHECK(static_cast<double>(ext[18]) ==
        doctest::Approx(0.060037182168008644).epsilon(1e-13));
}

TEST_CASE("nilpotent matrix layout and A^2 = 0") {
  for (int n = 2; n <= 5; ++n) {
    std::vector<double> a;
    for (int i = 0; i < n - 1; ++i) a.push_back(1.0 + 0.25 * i);
    Matrix m = nilpotent_matrix(a, n);
    CHECK((m * m).cwiseAbs().maxCoeff() == 0.0);
    // entries sit at (2j-1, 2j) and (2j+1, 2j), 1-based
    CHECK(m(0, 1) == a[0]);
    if (n >= 3) CHECK(m(2, 1) == a[1]);
    if (n >= 4) CHECK(m(2, 3) == a[2]);
  }
  CHECK(throws_code(ErrorCode::LengthMismatch,
                    [] { nilpotent_matrix({1.0}, 3); }));
}

TEST_CASE("spec validation catches each failure mode") {
  auto issues_have = [](const MatrixWeightSpec& s, ErrorCode c) {
    return check_spec(s).has(c);
  };

  MatrixWeightSpec equal_b = mbp_test::hermite_2x2();
  equal_b.rows[1] = ScalarWeightSpec::hermite(1.0);
  CHECK(issues_have(equal_b, ErrorCode::RationalRatioViolation));

  MatrixWeightSpec gap = mbp_test::laguerre_2x2();
  gap.rows = {ScalarWeightSpec::laguerre(0.5),
              ScalarWeightSpec::laguerre(2.5)};
  CHECK(issues_have(gap, ErrorCode::RationalRatioViolation));

  MatrixWeightSpec zero_a = mbp_test::hermite_2x2();
  zero_a.a = {0.0};
  CHECK(issues_have(zero_a, ErrorCode::ZeroNilpotentEntry));

  MatrixWeightSpec bad_sum = mbp_test::jacobi_2x2();
  bad_sum.rows[1] = ScalarWeightSpec::jacobi(0.25, 1.0);
  CHECK(issues_have(bad_sum, ErrorCode::JacobiSumViolation));

  MatrixWeightSpec bad_param = mbp_test::laguerre_2x2();
  bad_param.rows[0] = ScalarWeightSpec::laguerre(-1.5);
  CHECK(issues_have(bad_param, ErrorCode::ParamOutOfRange));

  MatrixWeightSpec short_a = mbp_test::hermite_2x2();
  short_a.a = {};
  CHECK(issues_have(short_a, ErrorCode::LengthMismatch));

  CHECK(check_spec(mbp_test::hermite_2x2()).valid());
  CHECK(check_spec(mbp_test::laguerre_2x2()).valid());
  CHECK(check_spec(mbp_test::jacobi_2x2()).valid());

  CHECK(throws_code(ErrorCode::ZeroNilpotentEntry,
                    [&] { validate_spec(zero_a); }));
}

TEST_CASE("matrix moments: symmetric, with the A-correction terms") {
  ValidatedSpec spec = validate_spec(mbp_test::hermite_2x2());
  MomentTable t = matrix_moments(spec, 6);
  for (int k = 0; k <= 6; ++k) {
    CHECK((t.entries[k] - t.entries[k].transpose()).cwiseAbs().maxCoeff() ==
          0.0);
  }
  // M_0(0,0) = m0(b=1) + m2(b=0) since A = E12
  double expected = kSqrtPi * std::exp(1.0) + 0.5 * kSqrtPi;
  CHECK(t.entries[0](0, 0) == doctest::Approx(expected).epsilon(1e-14));
  // M_0(0,1) = m1(b=0) = 0
  CHECK(t.entries[0](0, 1) == doctest::Approx(0.0));
  // M_1(0,1) = m2(b=0)
  CHECK(t.entries[1](0, 1) == doctest::Approx(0.5 * kSqrtPi).epsilon(1e-14));
}

TEST_CASE("weight evaluation is T diag T^T inside the support") {
  ValidatedSpec spec = validate_spec(mbp_test::jacobi_2x2());
  double x = 0.3;
  Matrix w = evaluate_weight(spec, x);
  double w1 = ScalarWeightSpec::jacobi(1.5, 2.0).evaluate(x);
  double w2 = ScalarWeightSpec::jacobi(0.25, 1.25).evaluate(x);
  CHECK(w(1, 1) == doctest::Approx(w2).epsilon(1e-14));
  CHECK(w(0, 1) == doctest::Approx(x * w2).epsilon(1e-14));
  CHECK(w(0, 0) == doctest::Approx(w1 + x * x * w2).epsilon(1e-14));
  CHECK(throws_code(ErrorCode::OutOfSupport,
                    [&] { evaluate_weight(spec, 1.5); }));
}

TEST_CASE("moment table carries matching extended entries") {
  ValidatedSpec spec = validate_spec(mbp_test::laguerre_2x2());
  MomentTable t = matrix_moments(spec, 10);
  for (int k = 0; k <= 10; ++k) {
    Matrix gap = t.entries[k] - t.entries_ext[k].cast<double>();
    CHECK(gap.cwiseAbs().maxCoeff() == 0.0);
  }
}
