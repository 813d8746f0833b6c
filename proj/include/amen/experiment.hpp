#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "amen/groups.hpp"

namespace amen {

/// Configuration error distinct from internal assertion failures; maps to
/// exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Serializable description of one batch experiment. The seed fully
/// determines every random choice in the run.
struct ExperimentConfig {
  std::string command;  // verify-diagonal | irreducible | certify-a | converge | construct

  // host parameters
  std::string host_kind = "lp";  // lp | lorentz | dissection
  double p = 2.0;
  int dim = 0;
  std::vector<double> weights;  // optional explicit weights / atom measures

  // group parameters
  std::string group_kind = "cyclic-monomial";  // monomial | cyclic-monomial | transitive |
                                               // closure | tensor | auto
  int n = 0;
  std::string group_spec;  // path of a group-spec JSON file

  // construct parameters
  std::string model;  // direct-sum | cutdown | ideal
  int m = 0, k = 0, a = 0, b = 0;

  // converge parameters
  std::string operator_kind = "harmonic-diag";  // harmonic-diag | compact-decay | truncation:<m>

  std::vector<int> schedule;
  std::uint64_t seed = 20240101;
  double tolerance = 1e-9;
  std::string output;          // path; empty means stdout
  std::string format = "json"; // json | csv | both

  bool operator==(const ExperimentConfig&) const = default;
};

/// Canonical serialization: fixed key order, floats at 17 significant digits.
std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& text);

/// Group-spec file format: {"n": int, "generators": [{"perm": [1-based],
/// "signs": [+-1]}]}; the group is the closure of the generators.
MatrixGroup load_group_spec_file(const std::string& path);
MatrixGroup group_spec_from_json(const std::string& text);

/// Group selection for schedule experiments. "auto" picks the cyclic-monomial
/// group when its order fits the cap and otherwise a tensor factorization of
/// two cyclic-monomial groups.
MatrixGroup choose_group(const std::string& kind, int n, const std::string& spec_path);

struct RunResult {
  int exit_code = 0;
  std::string json;
  std::string csv;  // empty unless the command produces schedule curves
};

/// Executes the experiment and renders its artifacts. Does not touch the
/// filesystem; see run_and_write.
RunResult run(const ExperimentConfig& config);

/// run() plus artifact writing per config.output/config.format.
/// Exit codes: 0 pass, 1 verdict failure, 2 invalid config, 3 internal error.
int run_and_write(const ExperimentConfig& config);

}  // namespace amen
