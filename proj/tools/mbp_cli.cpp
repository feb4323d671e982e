#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mbp/diffops.hpp"
#include "mbp/io.hpp"
#include "mbp/orthopoly.hpp"
#include "mbp/verify.hpp"

namespace {

constexpr int kExitSuiteFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(mbp::ErrorCode code) {
  switch (code) {
    case mbp::ErrorCode::ConfigError:
    case mbp::ErrorCode::ParamOutOfRange:
    case mbp::ErrorCode::ZeroNilpotentEntry:
    case mbp::ErrorCode::RationalRatioViolation:
    case mbp::ErrorCode::JacobiSumViolation:
    case mbp::ErrorCode::LengthMismatch:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

void emit(const std::string& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc;
    return;
  }
  std::ofstream out(out_path);
  if (!out)
    throw mbp::Error(mbp::ErrorCode::ConfigError,
                     "cannot write " + out_path);
  out << doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix weight toolkit: moments, operators, orthogonal "
               "polynomials, and the verification suite"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all";
  int k_order = 12, n_max = 8;
  double tol_factor = 1.0;
  std::uint64_t seed = 0x5EED;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "config file")->required();
    cmd->add_option("-o,--output", out_path, "output file (default stdout)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a weight spec");
  validate->add_option("-c,--config", config_path, "config file")->required();

  CLI::App* moments = app.add_subcommand("moments", "emit matrix moments");
  add_common(moments);
  moments->add_option("-k,--max-order", k_order, "highest moment order");

  CLI::App* op = app.add_subcommand("operator", "emit the operator family");
  add_common(op);

  CLI::App* ortho =
      app.add_subcommand("orthopoly", "emit the monic orthogonal sequence");
  add_common(ortho);
  ortho->add_option("-n,--n-max", n_max, "highest polynomial degree");

  CLI::App* verify = app.add_subcommand("verify", "run the check suite");
  add_common(verify);
  verify->add_option("--suite", suite, "all|fast")
      ->check(CLI::IsMember({"all", "fast"}));
  verify->add_option("--tol", tol_factor, "tolerance multiplier");
  verify->add_option("--seed", seed, "seed for sampled checks");
  verify->add_option("-n,--n-max", n_max, "highest polynomial degree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    mbp::ConfigFile cfg = mbp::load_config(config_path);

    if (validate->parsed()) {
      mbp::ValidationResult vr = mbp::check_spec(cfg.spec);
      if (vr.valid()) {
        std::cout << "valid\n";
        return 0;
      }
      for (const auto& issue : vr.issues)
        std::cerr << mbp::error_code_name(issue.code) << ": " << issue.detail
                  << "\n";
      std::cout << "invalid\n";
      return kExitConfig;
    }

    if (verify->parsed()) {
      mbp::SuiteOptions opt;
      opt.fast = suite == "fast";
      opt.tolerance_factor = tol_factor;
      opt.seed = seed;
      opt.n_max = n_max;
      opt.precision = cfg.precision;
      mbp::VerificationReport report = mbp::run_suite(cfg.spec, opt);
      emit(mbp::write_report_document(report), out_path);
      return report.overall_pass ? 0 : kExitSuiteFail;
    }

    // The remaining commands require a fully valid spec.
    mbp::ValidatedSpec vspec = mbp::validate_spec(cfg.spec);

    if (moments->parsed()) {
      mbp::MomentTable table = mbp::matrix_moments(vspec, k_order);
      emit(mbp::write_moments_document(cfg.spec, table), out_path);
      return 0;
    }

    if (op->parsed()) {
      emit(mbp::write_operator_document(
               cfg.spec, mbp::build_bochner_operator(vspec),
               mbp::build_tilde_operator(vspec), mbp::k_tilde_matrix(vspec),
               mbp::nilpotent_matrix(cfg.spec.a, cfg.spec.size),
               mbp::unipotent_factor(vspec)),
           out_path);
      return 0;
    }

    if (ortho->parsed()) {
      mbp::MomentTable table = mbp::matrix_moments(vspec, 2 * n_max + 2);
      mbp::MonicSequence seq =
          mbp::monic_sequence(table, n_max, cfg.precision);
      emit(mbp::write_orthopoly_document(cfg.spec, seq), out_path);
      return 0;
    }
  } catch (const mbp::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
