#include "mbp/weights.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mbp {

const char* family_name(Family f) {
  switch (f) {
    case Family::Hermite: return "hermite";
    case Family::Laguerre: return "laguerre";
    case Family::Jacobi: return "jacobi";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "hermite") return Family::Hermite;
  if (name == "laguerre") return Family::Laguerre;
  if (name == "jacobi") return Family::Jacobi;
  throw Error(ErrorCode::ConfigError, "unknown family \"" + name + "\"");
}

ScalarWeightSpec ScalarWeightSpec::hermite(double b) {
  ScalarWeightSpec w;
  w.family = Family::Hermite;
  w.b = b;
  return w;
}

ScalarWeightSpec ScalarWeightSpec::laguerre(double alpha) {
  ScalarWeightSpec w;
  w.family = Family::Laguerre;
  w.alpha = alpha;
  return w;
}

ScalarWeightSpec ScalarWeightSpec::jacobi(double alpha, double beta) {
  ScalarWeightSpec w;
  w.family = Family::Jacobi;
  w.alpha = alpha;
  w.beta = beta;
  return w;
}

std::pair<double, double> ScalarWeightSpec::support() const {
  switch (family) {
    case Family::Hermite:
      return {-std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    case Family::Laguerre: return {0.0, std::numeric_limits<double>::infinity()};
    case Family::Jacobi: return {-1.0, 1.0};
  }
  return {0.0, 0.0};
}

double ScalarWeightSpec::evaluate(double x) const {
  switch (family) {
    case Family::Hermite: return std::exp(-x * x + 2.0 * b * x);
    case Family::Laguerre: return std::exp(-x) * std::pow(x, alpha);
    case Family::Jacobi:
      return std::pow(1.0 - x, alpha) * std::pow(1.0 + x, beta);
  }
  return 0.0;
}

bool ScalarWeightSpec::params_in_range() const {
  switch (family) {
    case Family::Hermite: return std::isfinite(b);
    case Family::Laguerre: return std::isfinite(alpha) && alpha > -1.0;
    case Family::Jacobi:
      return std::isfinite(alpha) && std::isfinite(beta) && alpha > -1.0 &&
             beta > -1.0;
  }
  return false;
}

bool ValidationResult::has(ErrorCode c) const {
  for (const auto& i : issues)
    if (i.code == c) return true;
  return false;
}

namespace {

double dist_to_integer(double x) {
  return std::abs(x - std::round(x));
}

}  // namespace

ValidationResult check_spec(const MatrixWeightSpec& spec) {
  ValidationResult r;
  const int n = spec.size;
  const double tol = spec.working_tolerance;
  if (n < 1) {
    r.issues.push_back({ErrorCode::LengthMismatch, "size must be positive"});
    return r;
  }
  if (static_cast<int>(spec.rows.size()) != n) {
    r.issues.push_back(
        {ErrorCode::LengthMismatch, "rows list does not have N entries"});
    return r;
  }
  if (static_cast<int>(spec.a.size()) != n - 1) {
    r.issues.push_back(
        {ErrorCode::LengthMismatch, "a list does not have N-1 entries"});
    return r;
  }
  if (!(tol > 0.0)) {
    r.issues.push_back(
        {ErrorCode::ParamOutOfRange, "working_tolerance must be positive"});
    return r;
  }
  for (int i = 0; i < n; ++i) {
    if (spec.rows[i].family != spec.family) {
      r.issues.push_back({ErrorCode::ParamOutOfRange,
                          "row " + std::to_string(i + 1) +
                              " is not of the spec's family"});
    }
    if (!spec.rows[i].params_in_range()) {
      r.issues.push_back({ErrorCode::ParamOutOfRange,
                          "row " + std::to_string(i + 1) +
                              " parameters violate integrability"});
    }
  }
  for (int j = 0; j < n - 1; ++j) {
    if (spec.a[j] == 0.0) {
      r.issues.push_back({ErrorCode::ZeroNilpotentEntry,
                          "a_" + std::to_string(j + 1) + " = 0"});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& wi = spec.rows[i];
      const auto& wj = spec.rows[j];
      std::ostringstream pair;
      pair << "(rows " << i + 1 << "," << j + 1 << ")";
      switch (spec.family) {
        case Family::Hermite:
          if (std::abs(wi.b - wj.b) <= tol) {
            r.issues.push_back({ErrorCode::RationalRatioViolation,
                                "equal Hermite shifts " + pair.str()});
          }
          break;
        case Family::Laguerre:
          if (dist_to_integer(wi.alpha - wj.alpha) <= tol) {
            r.issues.push_back({ErrorCode::RationalRatioViolation,
                                "integer Laguerre alpha gap " + pair.str()});
          }
          break;
        case Family::Jacobi:
          if (dist_to_integer(wi.alpha - wj.alpha) <= tol &&
              dist_to_integer(wi.beta - wj.beta) <= tol) {
            r.issues.push_back({ErrorCode::RationalRatioViolation,
                                "integer Jacobi parameter gaps " + pair.str()});
          }
          break;
      }
    }
  }
  if (spec.family == Family::Jacobi) {
    // alpha_1 + beta_1 = alpha_j + beta_j + 1 + (-1)^j, 1-based j.
    const double s1 = spec.rows[0].alpha + spec.rows[0].beta;
    for (int j = 2; j <= n; ++j) {
      const auto& wj = spec.rows[j - 1];
      const double rhs = wj.alpha + wj.beta + 1.0 + ((j % 2 == 0) ? 1.0 : -1.0);
      if (std::abs(s1 - rhs) > tol) {
        r.issues.push_back({ErrorCode::JacobiSumViolation,
                            "sum condition fails at row " + std::to_string(j)});
      }
    }
  }
  return r;
}

ValidatedSpec validate_spec(const MatrixWeightSpec& spec) {
  ValidationResult r = check_spec(spec);
  if (!r.valid()) {
    std::ostringstream msg;
    for (size_t i = 0; i < r.issues.size(); ++i) {
      if (i) msg << "; ";
      msg << error_code_name(r.issues[i].code) << " (" << r.issues[i].detail
          << ")";
    }
    throw Error(r.issues.front().code, msg.str());
  }
  return ValidatedSpec(spec);
}

namespace {

template <class Mat>
Mat nilpotent_impl(const std::vector<double>& a, int n) {
  if (static_cast<int>(a.size()) != n - 1) {
    throw Error(ErrorCode::LengthMismatch,
                "nilpotent_matrix: expected N-1 entries");
  }
  Mat m = Mat::Zero(n, n);
  // a_{2j-1} E_{2j-1,2j} for j = 1..[N/2]; a_{2j} E_{2j+1,2j} for j = 1..[(N-1)/2]
  for (int j = 1; 2 * j <= n; ++j) m(2 * j - 2, 2 * j - 1) = a[2 * j - 2];
  for (int j = 1; 2 * j + 1 <= n; ++j) m(2 * j, 2 * j - 1) = a[2 * j - 1];
  return m;
}

}  // namespace

Matrix nilpotent_matrix(const std::vector<double>& a, int n) {
  return nilpotent_impl<Matrix>(a, n);
}

MatrixL nilpotent_matrix_ext(const std::vector<double>& a, int n) {
  return nilpotent_impl<MatrixL>(a, n);
}

namespace {

// Closed-form scalar moment recurrences, in extended precision:
//   Hermite:  m_0 = sqrt(pi) e^{b^2},  m_{k+1} = b m_k + (k/2) m_{k-1}
//   Laguerre: m_0 = Gamma(alpha+1),   m_k = (alpha+k) m_{k-1}
//   Jacobi:   m_0 = 2^{a+b+1} B(a+1,b+1),
//             m_{k+1} = ((b-a) m_k + k m_{k-1}) / (a+b+k+2)
// The Jacobi recurrence follows from integrating
// d/dx [x^k (1-x)^{a+1}(1+x)^{b+1}] over (-1,1); unlike the binomial Beta
// sum it has no cancellation and is stable to K = 40 and beyond.
std::vector<long double> moments_impl(const ScalarWeightSpec& w, int K) {
  if (K < 0) throw Error(ErrorCode::ParamOutOfRange, "moment order k < 0");
  if (!w.params_in_range()) {
    throw Error(ErrorCode::ParamOutOfRange,
                "scalar weight parameters violate integrability");
  }
  std::vector<long double> m(K + 1);
  switch (w.family) {
    case Family::Hermite: {
      const long double b = w.b;
      m[0] = std::sqrt(std::numbers::pi_v<long double>) * std::exp(b * b);
      if (K >= 1) m[1] = b * m[0];
      for (int k = 1; k < K; ++k)
        m[k + 1] = b * m[k] + (static_cast<long double>(k) / 2.0L) * m[k - 1];
      break;
    }
    case Family::Laguerre: {
      const long double al = w.alpha;
      m[0] = std::tgamma(al + 1.0L);
      for (int k = 1; k <= K; ++k) m[k] = (al + k) * m[k - 1];
      break;
    }
    case Family::Jacobi: {
      const long double al = w.alpha;
      const long double be = w.beta;
      m[0] = std::exp((al + be + 1.0L) * std::numbers::ln2_v<long double> +
                      std::lgamma(al + 1.0L) + std::lgamma(be + 1.0L) -
                      std::lgamma(al + be + 2.0L));
      if (K >= 1) m[1] = (be - al) / (al + be + 2.0L) * m[0];
      for (int k = 1; k < K; ++k)
        m[k + 1] = ((be - al) * m[k] + k * m[k - 1]) / (al + be + k + 2.0L);
      break;
    }
  }
  return m;
}

}  // namespace

std::vector<long double> scalar_moments_ext(const ScalarWeightSpec& w, int K) {
  return moments_impl(w, K);
}

double scalar_moment(const ScalarWeightSpec& w, int k) {
  return static_cast<double>(moments_impl(w, k)[k]);
}

MomentTable matrix_moments(const ValidatedSpec& vspec, int K) {
  const MatrixWeightSpec& spec = vspec.spec();
  const int n = spec.size;
  std::vector<std::vector<long double>> sm(n);
  for (int i = 0; i < n; ++i) sm[i] = scalar_moments_ext(spec.rows[i], K + 2);

  const MatrixL A = nilpotent_matrix_ext(spec.a, n);
  MomentTable table;
  table.size = n;
  table.entries.reserve(K + 1);
  table.entries_ext.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    MatrixL d0 = MatrixL::Zero(n, n), d1 = MatrixL::Zero(n, n),
            d2 = MatrixL::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      d0(i, i) = sm[i][k];
      d1(i, i) = sm[i][k + 1];
      d2(i, i) = sm[i][k + 2];
    }
    // integral of x^k (I+Ax) diag(w_i) (I+A^T x)
    MatrixL mk = d0 + A * d1 + d1 * A.transpose() + A * d2 * A.transpose();
    mk = ((mk + mk.transpose()) / 2.0L).eval();  // symmetric by construction
    if (!mk.allFinite()) {
      throw Error(ErrorCode::MomentOverflow,
                  "moment M_" + std::to_string(k) + " overflows binary64");
    }
    table.entries_ext.push_back(mk);
    table.entries.push_back(mk.cast<double>());
  }
  return table;
}

Matrix evaluate_weight(const ValidatedSpec& vspec, double x) {
  const MatrixWeightSpec& spec = vspec.spec();
  const auto [lo, hi] = spec.rows.front().support();
  if (!(x > lo && x < hi)) {
    throw Error(ErrorCode::OutOfSupport,
                "x outside the open support interval");
  }
  const int n = spec.size;
  Matrix t = Matrix::Identity(n, n) + nilpotent_matrix(spec.a, n) * x;
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = spec.rows[i].evaluate(x);
  return t * d * t.transpose();
}

}  // namespace mbp
