// Exercises the command-line tool end to end: exit codes across the fixture
// corpus, document round-trips, and config error handling.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mbp/io.hpp"
#include "mbp/weights.hpp"

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
  if (ok) return;
  ++g_failures;
  std::cerr << "FAIL: " << what << "\n";
}

int run(const std::string& cmd) {
  int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: test_cli <cli-path> <fixtures-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string fixtures = argv[2];
  const std::string tmp = "test_cli_tmp.json";

  const std::vector<std::string> good = {
      "hermite_2x2", "laguerre_2x2", "jacobi_2x2",   "hermite_n3",
      "hermite_n4",   "laguerre_n3",   "laguerre_n4",   "laguerre_dyadic"};
  const std::vector<std::string> bad = {"bad_jacobi_sum", "bad_hermite_equal",
                                        "bad_laguerre_gap", "bad_zero_a"};

  for (const auto& name : good) {
    std::string cfg = fixtures + "/" + name + ".cfg";
    expect(run(cli + " validate -c " + cfg) == 0, name + " validate");
    expect(run(cli + " moments -c " + cfg + " -k 6") == 0, name + " moments");
    expect(run(cli + " operator -c " + cfg) == 0, name + " operator");
    expect(run(cli + " orthopoly -c " + cfg + " -n 4") == 0,
           name + " orthopoly");
    expect(run(cli + " verify -c " + cfg + " --suite fast") == 0,
           name + " verify");
  }

  for (const auto& name : bad) {
    std::string cfg = fixtures + "/" + name + ".cfg";
    expect(run(cli + " validate -c " + cfg) == 2, name + " validate exit 2");
    expect(run(cli + " verify -c " + cfg) == 1, name + " verify exit 1");
  }
  // non-sum failures also block the single-artifact commands
  expect(run(cli + " operator -c " + fixtures + "/bad_zero_a.cfg") == 2,
         "bad_zero_a operator exit 2");
  // a sum violation passes validation-lite paths but fails here too
  expect(run(cli + " operator -c " + fixtures + "/bad_jacobi_sum.cfg") == 2,
         "bad_jacobi_sum operator exit 2");

  // moments document round-trip against the library, bit for bit
  {
    std::string cfg = fixtures + "/laguerre_2x2.cfg";
    expect(run(cli + " moments -c " + cfg + " -k 8 -o " + tmp) == 0,
           "moments to file");
    mbp::MomentTable parsed = mbp::parse_moments_document(slurp(tmp));
    mbp::ConfigFile loaded = mbp::load_config(cfg);
    mbp::MomentTable direct =
        mbp::matrix_moments(mbp::validate_spec(loaded.spec), 8);
    expect(parsed.max_order() == 8, "parsed moment order");
    bool exact = parsed.max_order() == direct.max_order();
    for (int k = 0; exact && k <= 8; ++k)
      exact = (parsed.entries[k] - direct.entries[k]).cwiseAbs().maxCoeff() ==
              0.0;
    expect(exact, "moments round-trip bitwise");
  }

  // malformed configs
  {
    std::ofstream(tmp) << "{\"family\": \"hermite\", \"n\": 2, \"rows\": "
                          "[{\"b\": 1.0}, {\"b\": 0.0}], \"a\": [1.0], "
                          "\"bogus\": 1}";
    expect(run(cli + " validate -c " + tmp) == 2, "unknown key exit 2");
    std::ofstream(tmp) << "not json";
    expect(run(cli + " validate -c " + tmp) == 2, "malformed json exit 2");
  }
  expect(run(cli + " validate -c does_not_exist.cfg") == 2,
         "missing file exit 2");
  expect(run(cli + " nonsense") == 2, "unknown subcommand exit 2");
  expect(run(cli + " --help") == 0, "help exit 0");

  std::remove(tmp.c_str());
  if (g_failures == 0) {
    std::cout << "test_cli: all checks passed\n";
    return 0;
  }
  std::cerr << "test_cli: " << g_failures << " failure(s)\n";
  return 1;
}
