#pragma once

// Experiment runner and result verifier behind the command-line tool.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robustboost/hypothesis.hpp"
#include "robustboost/io.hpp"
#include "robustboost/perturbation.hpp"

namespace robustboost::harness {

enum class Mode { PlainErm, Inner, Outer };

Mode mode_from_string(const std::string& s);
std::string to_string(Mode m);

/// Exit codes shared by the CLI and the verifier.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitGuard = 2,
  kExitViolation = 3,
};

struct RunOptions {
  Mode mode = Mode::Inner;
  double epsilon = 0.3;
  /// Inner mode: boosting rounds. Outer mode: group rounds.
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> inner_rounds;
  std::optional<double> eta;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  bool trace = false;
};

struct RunOutput {
  io::Json result;
  std::string trace_csv;  // empty unless requested
};

/// Oracle for a dataset and optional class: the table oracle for an
/// all-table class, a class scan for any other class, threshold ERM when no
/// class is given (the dataset must then be 1-D).
std::unique_ptr<ErmOracle> make_oracle(
    const GroupedDataset& d, const std::vector<Hypothesis>* hypotheses);

RunOutput run_experiment(const GroupedDataset& d,
                         const std::vector<Hypothesis>* hypotheses,
                         const RunOptions& options);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  int exit_code = kExitOk;

  bool passed() const { return exit_code == kExitOk; }
  io::Json to_json() const;
};

/// Recomputes every recorded quantity from the stored ensemble, brute-forces
/// OPT and OPT_max over the class, then checks the regret and
/// multi-robustness bounds. Raises GuardExceeded when the class is too large
/// to scan.
VerifyReport verify_result(const GroupedDataset& d,
                           const std::vector<Hypothesis>& hypotheses,
                           const io::Json& result);

}  // namespace robustboost::harness
