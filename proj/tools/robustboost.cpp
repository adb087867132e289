// robustboost: generate instances, run the boosters, verify results.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robustboost/datagen.hpp"
#include "robustboost/harness.hpp"
#include "robustboost/io.hpp"
#include "robustboost/kernels.hpp"
#include "robustboost/metrics.hpp"

namespace rb = robustboost;
namespace h = robustboost::harness;
using rb::io::Json;

namespace {

struct GenArgs {
  std::string out;
  std::string class_out;
  std::uint64_t seed = 0;
  std::size_t n = 4, k = 4;
  std::size_t m = 10, g = 2, class_size = 50;
  bool with_x = false, no_x = false;
  std::size_t side = 5, patch = 2, mask = 3, count = 16;
};

struct RunArgs {
  std::string dataset, class_file, mode = "inner", out, trace;
  double epsilon = 0.3;
  std::optional<std::size_t> rounds, inner_rounds;
  std::optional<double> eta, delta;
  std::optional<std::uint64_t> seed;
};

struct VerifyArgs {
  std::string dataset, class_file, result, out;
};

void write_instance(const rb::datagen::Instance& inst, const GenArgs& a) {
  Json j = rb::io::dataset_to_json(inst.dataset);
  j["meta"] = rb::io::metadata_to_json(inst.meta);
  rb::io::write_json_file(a.out, j);
  if (!a.class_out.empty()) {
    rb::io::write_json_file(a.class_out, rb::io::class_to_json(inst.hypotheses));
  }
}

rb::GroupedDataset load_dataset(const std::string& path, Json* meta = nullptr) {
  const Json j = rb::io::read_json_file(path);
  rb::GroupedDataset d = rb::io::dataset_from_json(j);
  if (const auto v = rb::validate(d)) {
    throw rb::Error("invalid dataset " + path + ": " + v->message);
  }
  if (meta != nullptr && j.contains("meta")) *meta = j["meta"];
  return d;
}

int cmd_run(const RunArgs& a) {
  Json meta;
  const rb::GroupedDataset d = load_dataset(a.dataset, &meta);
  std::optional<std::vector<rb::Hypothesis>> cls;
  if (!a.class_file.empty()) {
    cls = rb::io::class_from_json(rb::io::read_json_file(a.class_file));
  }
  h::RunOptions opt;
  opt.mode = h::mode_from_string(a.mode);
  opt.epsilon = a.epsilon;
  opt.rounds = a.rounds;
  opt.inner_rounds = a.inner_rounds;
  opt.eta = a.eta;
  opt.delta = a.delta;
  opt.trace = !a.trace.empty();
  if (a.seed) {
    opt.seed = *a.seed;
  } else if (meta.contains("seed")) {
    opt.seed = meta["seed"].get<std::uint64_t>();
  }
  const h::RunOutput out = h::run_experiment(d, cls ? &*cls : nullptr, opt);
  if (a.out.empty()) {
    std::cout << out.result.dump(1) << '\n';
  } else {
    rb::io::write_json_file(a.out, out.result);
  }
  if (opt.trace) {
    std::ofstream t(a.trace);
    if (!t) throw rb::Error("cannot write " + a.trace);
    t << out.trace_csv;
  }
  return h::kExitOk;
}

int cmd_verify(const VerifyArgs& a) {
  const rb::GroupedDataset d = load_dataset(a.dataset);
  const auto cls = rb::io::class_from_json(rb::io::read_json_file(a.class_file));
  const Json result = rb::io::read_json_file(a.result);
  const h::VerifyReport report = h::verify_result(d, cls, result);
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail
              << '\n';
  }
  if (!a.out.empty()) rb::io::write_json_file(a.out, report.to_json());
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  rb::kernels::apply_thread_cap_from_env();

  CLI::App app{"Adversarially robust boosting over perturbation sets"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a dataset instance");
  gen->require_subcommand(1);
  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", ga.out, "Dataset JSON path")->required();
    s->add_option("--class-out", ga.class_out, "Hypothesis class JSON path");
  };
  auto* ex1 = gen->add_subcommand("example1", "Example 1 gap construction");
  add_common(ex1);
  ex1->add_option("--n", ga.n)->check(CLI::PositiveNumber);
  ex1->add_option("--k", ga.k)->check(CLI::Range(2, 1 << 20));
  ex1->add_flag("--with-x", ga.with_x, "Include x in its own perturbation set");

  auto* rnd = gen->add_subcommand("random", "Seeded random grid instance");
  add_common(rnd);
  rnd->add_option("--m", ga.m)->check(CLI::PositiveNumber);
  rnd->add_option("--k", ga.k)->check(CLI::PositiveNumber);
  rnd->add_option("--g", ga.g)->check(CLI::PositiveNumber);
  rnd->add_option("--class-size", ga.class_size)->check(CLI::PositiveNumber);
  rnd->add_option("--seed", ga.seed);
  rnd->add_flag("--no-x", ga.no_x, "Leave x out of its perturbation set");

  auto* two = gen->add_subcommand("two-group", "Two-group adversarial instance");
  add_common(two);
  two->add_option("--seed", ga.seed);

  auto* grid = gen->add_subcommand("masked-grid", "Binary grids under patch masking");
  add_common(grid);
  grid->add_option("--side", ga.side)->check(CLI::PositiveNumber);
  grid->add_option("--patch", ga.patch)->check(CLI::PositiveNumber);
  grid->add_option("--mask", ga.mask)->check(CLI::PositiveNumber);
  grid->add_option("--count", ga.count)->check(CLI::PositiveNumber);
  grid->add_option("--seed", ga.seed);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a booster or the plain ERM baseline");
  run->add_option("--dataset", ra.dataset)->required();
  run->add_option("--class", ra.class_file, "Hypothesis class (default: 1-D thresholds)");
  run->add_option("--mode", ra.mode)
      ->check(CLI::IsMember({"inner", "outer", "plain-erm"}));
  run->add_option("--epsilon", ra.epsilon)->check(CLI::PositiveNumber);
  run->add_option("--rounds", ra.rounds)->check(CLI::PositiveNumber);
  run->add_option("--inner-rounds", ra.inner_rounds)->check(CLI::PositiveNumber);
  run->add_option("--eta", ra.eta);
  run->add_option("--delta", ra.delta);
  run->add_option("--seed", ra.seed);
  run->add_option("--trace", ra.trace, "Per-round CSV trace path");
  run->add_option("--out", ra.out, "Result JSON path (default: stdout)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a result against the bounds");
  verify->add_option("--dataset", va.dataset)->required();
  verify->add_option("--class", va.class_file)->required();
  verify->add_option("--result", va.result)->required();
  verify->add_option("--report", va.out, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? h::kExitOk : h::kExitUsage;
  }

  try {
    if (*gen) {
      if (*ex1) write_instance(rb::datagen::gen_example1(ga.n, ga.k, ga.with_x), ga);
      if (*rnd) {
        write_instance(
            rb::datagen::gen_random(ga.m, ga.k, ga.g, ga.class_size, ga.seed, !ga.no_x),
            ga);
      }
      if (*two) write_instance(rb::datagen::gen_two_group_adversarial(ga.seed), ga);
      if (*grid) {
        write_instance(
            rb::datagen::gen_masked_grid(ga.side, ga.patch, ga.mask, ga.seed, ga.count),
            ga);
      }
      return h::kExitOk;
    }
    if (*run) return cmd_run(ra);
    if (*verify) return cmd_verify(va);
  } catch (const rb::GuardExceeded& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return h::kExitGuard;
  } catch (const rb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return h::kExitUsage;
  }
  return h::kExitUsage;
}
