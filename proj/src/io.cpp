#include "mbp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mbp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fmt_matrix(const Matrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ",";
    out += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += fmt(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

std::string fmt_matpoly(const MatrixPolynomial& p) {
  std::string out = "[";
  for (int k = 0; k <= std::max(p.degree(), 0); ++k) {
    if (k) out += ",";
    out += fmt_matrix(p.coeff(k));
  }
  return out + "]";
}

std::string fmt_op(const PolyDiffOp& d) {
  std::string out = "[";
  for (int j = 0; j <= std::max(d.order(), 0); ++j) {
    if (j) out += ",";
    out += fmt_matpoly(d.coeff(j));
  }
  return out + "]";
}

std::string fmt_spec(const MatrixWeightSpec& spec) {
  std::string out = "{\"family\":" + quote(family_name(spec.family)) +
                    ",\"n\":" + std::to_string(spec.size) + ",\"rows\":[";
  for (size_t i = 0; i < spec.rows.size(); ++i) {
    if (i) out += ",";
    const auto& r = spec.rows[i];
    switch (spec.family) {
      case Family::Hermite:
        out += "{\"b\":" + fmt(r.b) + "}";
        break;
      case Family::Laguerre:
        out += "{\"alpha\":" + fmt(r.alpha) + "}";
        break;
      case Family::Jacobi:
        out += "{\"alpha\":" + fmt(r.alpha) + ",\"beta\":" + fmt(r.beta) + "}";
        break;
    }
  }
  out += "],\"a\":[";
  for (size_t i = 0; i < spec.a.size(); ++i) {
    if (i) out += ",";
    out += fmt(spec.a[i]);
  }
  out += "],\"tolerance\":" + fmt(spec.working_tolerance) + "}";
  return out;
}

double get_number(const json& j, const char* key) {
  if (!j.at(key).is_number())
    throw Error(ErrorCode::ConfigError, std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

void reject_unknown(const json& obj, const std::vector<std::string>& known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || it.key() == k;
    if (!ok)
      throw Error(ErrorCode::ConfigError,
                  "unknown key \"" + it.key() + "\" in " + where);
  }
}

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad JSON: ") + e.what());
  }
  try {
    if (!j.is_object())
      throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    reject_unknown(j, {"family", "n", "rows", "a", "precision", "tolerance"},
                   "config");
    ConfigFile cfg;
    cfg.spec.family = family_from_name(j.at("family").get<std::string>());
    cfg.spec.size = j.at("n").get<int>();
    for (const auto& row : j.at("rows")) {
      switch (cfg.spec.family) {
        case Family::Hermite:
          reject_unknown(row, {"b"}, "row");
          cfg.spec.rows.push_back(
              ScalarWeightSpec::hermite(get_number(row, "b")));
          break;
        case Family::Laguerre:
          reject_unknown(row, {"alpha"}, "row");
          cfg.spec.rows.push_back(
              ScalarWeightSpec::laguerre(get_number(row, "alpha")));
          break;
        case Family::Jacobi:
          reject_unknown(row, {"alpha", "beta"}, "row");
          cfg.spec.rows.push_back(ScalarWeightSpec::jacobi(
              get_number(row, "alpha"), get_number(row, "beta")));
          break;
      }
    }
    cfg.spec.a = j.at("a").get<std::vector<double>>();
    if (j.contains("tolerance")) {
      cfg.spec.working_tolerance = get_number(j, "tolerance");
      cfg.tolerance_given = true;
    }
    if (j.contains("precision")) {
      std::string p = j.at("precision").get<std::string>();
      if (p == "f64")
        cfg.precision = Precision::F64;
      else if (p == "extended")
        cfg.precision = Precision::Extended;
      else
        throw Error(ErrorCode::ConfigError, "precision must be f64|extended");
    }
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config: ") + e.what());
  }
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ConfigFile cfg = parse_config_text(buf.str());
  if (const char* env = std::getenv("MBP_PRECISION")) {
    std::string p(env);
    if (p == "f64")
      cfg.precision = Precision::F64;
    else if (p == "extended")
      cfg.precision = Precision::Extended;
    else if (!p.empty())
      throw Error(ErrorCode::ConfigError, "MBP_PRECISION must be f64|extended");
  }
  return cfg;
}

std::string write_moments_document(const MatrixWeightSpec& spec,
                                   const MomentTable& table) {
  std::string out = "{\"schema\":\"mbp/1\",\"kind\":\"moments\",\"spec\":" +
                    fmt_spec(spec) +
                    ",\"max_order\":" + std::to_string(table.max_order()) +
                    ",\"moments\":[";
  for (size_t k = 0; k < table.entries.size(); ++k) {
    if (k) out += ",";
    out += fmt_matrix(table.entries[k]);
  }
  return out + "]}\n";
}

std::string write_operator_document(const MatrixWeightSpec& spec,
                                    const PolyDiffOp& d,
                                    const PolyDiffOp& d_tilde,
                                    const Matrix& k_tilde, const Matrix& a,
                                    const MatrixPolynomial& t) {
  std::string out = "{\"schema\":\"mbp/1\",\"kind\":\"operator\",\"spec\":" +
                    fmt_spec(spec) + ",\"D\":" + fmt_op(d) +
                    ",\"D_tilde\":" + fmt_op(d_tilde) +
                    ",\"K_tilde\":" + fmt_matrix(k_tilde) +
                    ",\"A\":" + fmt_matrix(a) + ",\"T\":" + fmt_matpoly(t) +
                    "}\n";
  return out;
}

std::string write_orthopoly_document(const MatrixWeightSpec& spec,
                                     const MonicSequence& seq) {
  std::string out = "{\"schema\":\"mbp/1\",\"kind\":\"orthopoly\",\"spec\":" +
                    fmt_spec(spec) +
                    ",\"n_max\":" + std::to_string(seq.n_max) + ",\"P\":[";
  for (int n = 0; n <= seq.n_max; ++n) {
    if (n) out += ",";
    out += fmt_matpoly(seq.P[n]);
  }
  out += "],\"H\":[";
  for (int n = 0; n <= seq.n_max; ++n) {
    if (n) out += ",";
    out += fmt_matrix(seq.H[n]);
  }
  out += "],\"B\":[";
  for (int n = 0; n < seq.n_max; ++n) {
    if (n) out += ",";
    out += fmt_matrix(seq.B[n]);
  }
  out += "],\"C\":[";
  for (int n = 1; n < seq.n_max; ++n) {
    if (n > 1) out += ",";
    out += fmt_matrix(seq.C[n]);
  }
  out += "],\"dual_path_discrepancy\":" + fmt(seq.dual_path_discrepancy) +
         "}\n";
  return out;
}

std::string write_report_document(const VerificationReport& report) {
  std::string out = "{\"schema\":\"mbp/1\",\"kind\":\"report\",\"spec\":" +
                    fmt_spec(report.spec) + ",\"options\":{\"fast\":" +
                    (report.options.fast ? "true" : "false") +
                    ",\"tolerance_factor\":" +
                    fmt(report.options.tolerance_factor) +
                    ",\"seed\":" + std::to_string(report.options.seed) +
                    ",\"n_max\":" + std::to_string(report.options.n_max) +
                    ",\"precision\":" +
                    quote(precision_name(report.options.precision)) +
                    "},\"validation\":[";
  for (size_t i = 0; i < report.validation.size(); ++i) {
    if (i) out += ",";
    out += "{\"code\":" + quote(error_code_name(report.validation[i].code)) +
           ",\"detail\":" + quote(report.validation[i].detail) + "}";
  }
  out += "],\"checks\":[";
  for (size_t i = 0; i < report.checks.size(); ++i) {
    if (i) out += ",";
    const auto& c = report.checks[i];
    out += "{\"name\":" + quote(c.name) + ",\"status\":" + quote(c.status) +
           ",\"residual\":" + fmt(c.residual) +
           ",\"tolerance\":" + fmt(c.tolerance) +
           ",\"runtime_ms\":" + fmt(c.runtime_ms) +
           ",\"detail\":" + quote(c.detail) + "}";
  }
  out += "],\"overall\":" + quote(report.overall_pass ? "pass" : "fail") +
         "}\n";
  return out;
}

MomentTable parse_moments_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "mbp/1" ||
        j.at("kind").get<std::string>() != "moments")
      throw Error(ErrorCode::ConfigError, "not an mbp/1 moments document");
    MomentTable table;
    for (const auto& mat : j.at("moments")) {
      int rows = static_cast<int>(mat.size());
      Matrix m(rows, rows);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < rows; ++c) m(r, c) = mat.at(r).at(c).get<double>();
      table.entries.push_back(m);
      table.entries_ext.push_back(m.cast<long double>());
    }
    table.size = table.entries.empty()
                     ? 0
                     : static_cast<int>(table.entries[0].rows());
    return table;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError,
                std::string("bad moments document: ") + e.what());
  }
}

}  // namespace mbp
