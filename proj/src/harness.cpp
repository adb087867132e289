#include "robustboost/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robustboost/groups.hpp"
#include "robustboost/inner_boost.hpp"
#include "robustboost/metrics.hpp"
#include "robustboost/outer_boost.hpp"

namespace robustboost::harness {

using io::Json;

Mode mode_from_string(const std::string& s) {
  if (s == "plain-erm") return Mode::PlainErm;
  if (s == "inner") return Mode::Inner;
  if (s == "outer") return Mode::Outer;
  throw Error("unknown mode \"" + s + "\" (expected inner, outer or plain-erm)");
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::PlainErm: return "plain-erm";
    case Mode::Inner: return "inner";
    case Mode::Outer: return "outer";
  }
  return "?";
}

std::unique_ptr<ErmOracle> make_oracle(
    const GroupedDataset& d, const std::vector<Hypothesis>* hypotheses) {
  if (hypotheses == nullptr) {
    for (const auto& e : d.examples) {
      for (const auto& z : e.u) {
        if (z.dim() != 1) {
          throw Error("a hypothesis class is required for datasets that are "
                      "not 1-D");
        }
      }
    }
    return std::make_unique<ThresholdOracle>();
  }
  const bool all_tables =
      std::all_of(hypotheses->begin(), hypotheses->end(), [](const auto& h) {
        return std::holds_alternative<TableHypothesis>(h);
      });
  if (all_tables) {
    std::vector<TableHypothesis> tables;
    for (const auto& h : *hypotheses) tables.push_back(std::get<TableHypothesis>(h));
    return std::make_unique<TableOracle>(std::move(tables));
  }
  return std::make_unique<FiniteClassOracle>(*hypotheses);
}

namespace {

std::string oracle_name(const std::vector<Hypothesis>* hypotheses,
                        const ErmOracle& oracle) {
  if (hypotheses == nullptr) return "threshold";
  if (dynamic_cast<const TableOracle*>(&oracle) != nullptr) return "table";
  return "class-scan";
}

bool same_member(const Hypothesis& a, const Hypothesis& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ta = std::get_if<TableHypothesis>(&a)) {
    return ta->shares_table_with(std::get<TableHypothesis>(b));
  }
  return a == b;
}

Json encode(const Hypothesis& h, const std::vector<Hypothesis>* hypotheses) {
  if (hypotheses != nullptr) {
    for (std::size_t i = 0; i < hypotheses->size(); ++i) {
      if (same_member(h, (*hypotheses)[i])) return i;
    }
    for (std::size_t i = 0; i < hypotheses->size(); ++i) {
      if (h == (*hypotheses)[i]) return i;
    }
  }
  return io::hypothesis_to_json(h);
}

Json encode(const Ensemble& e, const std::vector<Hypothesis>* hypotheses) {
  Json arr = Json::array();
  for (const auto& h : e.hypotheses) arr.push_back(encode(h, hypotheses));
  return arr;
}

Hypothesis decode(const Json& j, const std::vector<Hypothesis>& hypotheses) {
  if (j.is_number_integer()) {
    const auto i = j.get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= hypotheses.size()) {
      throw Error("ensemble refers to class member " + std::to_string(i) +
                  " which does not exist");
    }
    return hypotheses[static_cast<std::size_t>(i)];
  }
  return io::hypothesis_from_json(j);
}

Ensemble decode_ensemble(const Json& j,
                         const std::vector<Hypothesis>& hypotheses) {
  if (!j.is_array() || j.empty()) throw Error("ensemble must be a nonempty array");
  Ensemble e;
  for (const auto& h : j) e.hypotheses.push_back(decode(h, hypotheses));
  return e;
}

Json dataset_echo(const GroupedDataset& d) {
  Json j;
  j["m"] = d.size();
  j["k"] = d.k;
  j["g"] = d.g;
  j["disjoint"] = is_disjoint(d);
  return j;
}

std::vector<WeightedPoint> uniform_variant_batch(const GroupedDataset& d) {
  std::vector<WeightedPoint> batch;
  for (const auto& e : d.examples) {
    for (const auto& z : e.u) batch.push_back({z, e.y, 1.0});
  }
  return batch;
}

}  // namespace

RunOutput run_experiment(const GroupedDataset& d,
                         const std::vector<Hypothesis>* hypotheses,
                         const RunOptions& options) {
  require_valid(d);
  const auto oracle = make_oracle(d, hypotheses);
  if (!(options.epsilon > 0.0)) throw Error("epsilon must be positive");

  RunOutput out;
  Json& r = out.result;
  r["mode"] = to_string(options.mode);
  r["seed"] = options.seed;
  Json config;
  config["epsilon"] = options.epsilon;
  config["oracle"] = oracle_name(hypotheses, *oracle);
  r["dataset"] = dataset_echo(d);

  switch (options.mode) {
    case Mode::PlainErm: {
      if (options.rounds || options.inner_rounds || options.eta ||
          options.delta) {
        throw Error("plain-erm takes no rounds, eta or delta");
      }
      const auto batch = uniform_variant_batch(d);
      const Hypothesis h = oracle->fit(batch);
      r["config"] = config;
      r["summary"] = io::summary_to_json(robust_loss(h, d));
      r["erm_loss"] = weighted_loss(h, batch);
      r["ensemble"] = Json::array({encode(h, hypotheses)});
      break;
    }
    case Mode::Inner: {
      if (options.inner_rounds || options.delta) {
        throw Error("inner mode takes --rounds and --eta only");
      }
      InnerConfig cfg;
      cfg.rounds = options.rounds.value_or(default_inner_rounds(d.k, options.epsilon));
      cfg.eta = options.eta.value_or(d.k >= 2 ? default_eta(d.k, cfg.rounds) : 0.5);
      config["rounds"] = cfg.rounds;
      config["eta"] = cfg.eta;
      r["config"] = config;

      InnerTracer tracer(d);
      InnerObserver obs;
      if (options.trace) obs = tracer.observer();
      const Ensemble e = fms_boost(d, cfg, *oracle, obs);
      r["summary"] = io::summary_to_json(robust_loss(e, d));
      r["mixed_robust_loss"] = mixed_robust_loss(e, d);
      r["ensemble"] = encode(e, hypotheses);
      if (options.trace) {
        std::ostringstream os;
        tracer.write_csv(os);
        out.trace_csv = os.str();
      }
      break;
    }
    case Mode::Outer: {
      OuterConfig cfg = OuterConfig::from_epsilon(options.epsilon, d.g, d.k);
      if (options.rounds) {
        cfg.rounds = *options.rounds;
        cfg.delta = d.g > 1 ? std::min(0.5, std::sqrt(std::log(static_cast<double>(d.g)) /
                                                      static_cast<double>(cfg.rounds)))
                            : 0.5;
      }
      if (options.inner_rounds) {
        cfg.inner_rounds = *options.inner_rounds;
        cfg.inner_eta = d.k >= 2 ? default_eta(d.k, cfg.inner_rounds) : 0.5;
      }
      if (options.eta) cfg.inner_eta = *options.eta;
      if (options.delta) cfg.delta = *options.delta;
      config["rounds"] = cfg.rounds;
      config["inner_rounds"] = cfg.inner_rounds;
      config["eta"] = cfg.inner_eta;
      config["delta"] = cfg.delta;
      r["config"] = config;

      const bool disjoint = is_disjoint(d);
      OuterResult res = disjoint ? group_boost(d, cfg, *oracle)
                                 : group_boost_overlapping(d, cfg, *oracle);
      if (!disjoint) {
        r["notice"] =
            "overlapping groups: sample weights use the summed per-group "
            "weight of each example";
      }
      r["summary"] = io::summary_to_json(robust_loss(res.ensemble, d));
      r["per_group_avg_loss"] = res.report.per_group_avg_loss;
      r["per_group_maj_loss"] = res.report.per_group_maj_loss;
      Json hedge;
      Json weights = Json::array();
      for (const auto& w : res.weight_history) weights.push_back(w.p);
      hedge["weights"] = std::move(weights);
      hedge["rewards"] = res.reward_history;
      r["hedge"] = std::move(hedge);
      Json members = Json::array();
      for (const auto& e : res.ensemble.members) {
        members.push_back(encode(e, hypotheses));
      }
      r["ensemble"] = std::move(members);
      if (options.trace) {
        std::ostringstream os;
        write_outer_trace_csv(os, res);
        out.trace_csv = os.str();
      }
      break;
    }
  }
  return out;
}

Json VerifyReport::to_json() const {
  Json j;
  j["passed"] = passed();
  j["exit_code"] = exit_code;
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["detail"] = c.detail;
    arr.push_back(std::move(cj));
  }
  j["checks"] = std::move(arr);
  return j;
}

namespace {

constexpr double kRecordTolerance = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool close(double a, double b) { return std::abs(a - b) <= kRecordTolerance; }

bool vector_matches(const Json& recorded, const std::vector<double>& actual) {
  if (!recorded.is_array() || recorded.size() != actual.size()) return false;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!recorded[i].is_number() || !close(recorded[i].get<double>(), actual[i])) {
      return false;
    }
  }
  return true;
}

bool summary_matches(const Json& recorded, const RobustLossSummary& s) {
  if (!recorded.is_object() || !recorded.contains("overall") ||
      !recorded.contains("per_group") || !recorded.contains("mistakes")) {
    return false;
  }
  if (!recorded["overall"].is_number() ||
      !close(recorded["overall"].get<double>(), s.overall)) {
    return false;
  }
  if (!vector_matches(recorded["per_group"], s.per_group)) return false;
  const auto& m = recorded["mistakes"];
  if (!m.is_array() || m.size() != s.per_example_mistake.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_boolean() || m[i].get<bool>() != s.per_example_mistake[i]) {
      return false;
    }
  }
  return true;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw Error(std::string("result is missing numeric field \"") + key + "\"");
  }
  return j[key].get<double>();
}

}  // namespace

VerifyReport verify_result(const GroupedDataset& d,
                           const std::vector<Hypothesis>& hypotheses,
                           const Json& result) {
  require_valid(d);
  if (!result.is_object() || !result.contains("mode") ||
      !result.contains("config") || !result.contains("ensemble") ||
      !result.contains("summary")) {
    throw Error("result file lacks mode, config, summary or ensemble");
  }
  const Mode mode = mode_from_string(result["mode"].get<std::string>());
  const Json& config = result["config"];

  VerifyReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const OptResult opt = brute_force_opt(d, hypotheses);
  const bool disjoint = is_disjoint(d);
  const GroupedDataset reduced = disjoint ? GroupedDataset{} : to_disjoint(d).dataset;
  const OptResult opt_max =
      brute_force_opt_max(disjoint ? d : reduced, hypotheses);
  add("opt", true, "OPT = " + fmt(opt.value) + " (member " +
                       std::to_string(opt.index) + "), OPT_max = " +
                       fmt(opt_max.value));

  const double lnk = std::log(static_cast<double>(std::max<std::size_t>(d.k, 1)));

  switch (mode) {
    case Mode::PlainErm: {
      const Ensemble e = decode_ensemble(result["ensemble"], hypotheses);
      if (e.size() != 1) throw Error("plain-erm result must hold one hypothesis");
      const auto s = robust_loss(e.hypotheses.front(), d);
      add("recorded_summary", summary_matches(result["summary"], s),
          "recomputed overall robust loss " + fmt(s.overall));
      break;
    }
    case Mode::Inner: {
      const Ensemble e = decode_ensemble(result["ensemble"], hypotheses);
      const auto s = robust_loss(e, d);
      const double mixed = mixed_robust_loss(e, d);
      const double t = static_cast<double>(e.size());
      add("recorded_summary", summary_matches(result["summary"], s),
          "recomputed majority robust loss " + fmt(s.overall));
      add("recorded_mixed_loss", close(number(result, "mixed_robust_loss"), mixed),
          "recomputed mixed robust loss " + fmt(mixed));
      const bool rounds_ok = config.contains("rounds") &&
                             config["rounds"].is_number_integer() &&
                             config["rounds"].get<std::size_t>() == e.size();
      add("recorded_rounds", rounds_ok,
          "ensemble holds " + std::to_string(e.size()) + " hypotheses");

      const double eta = number(config, "eta");
      // mixed <= OPT + eta + ln k / (eta T); equals 2 sqrt(ln k / T) at the
      // default eta.
      const double slack = std::min(1.0, eta + lnk / (eta * t));
      add("regret_bound", mixed <= opt.value + slack + 1e-12,
          "mixed " + fmt(mixed) + " <= OPT " + fmt(opt.value) + " + " +
              fmt(slack));
      add("majority_factor_two", s.overall <= 2.0 * mixed + 1e-12,
          "majority " + fmt(s.overall) + " <= 2 * mixed " + fmt(mixed));
      const double eps = number(config, "epsilon");
      if (e.size() >= default_inner_rounds(d.k, eps)) {
        add("majority_guarantee", s.overall <= 2.0 * opt.value + eps + 1e-12,
            "majority " + fmt(s.overall) + " <= 2 * OPT + eps = " +
                fmt(2.0 * opt.value + eps));
      }
      break;
    }
    case Mode::Outer: {
      const Json& members = result["ensemble"];
      if (!members.is_array() || members.empty()) {
        throw Error("outer ensemble must be a nonempty array");
      }
      NestedEnsemble nested;
      for (const auto& m : members) {
        nested.members.push_back(decode_ensemble(m, hypotheses));
      }
      const auto s = robust_loss(nested, d);
      add("recorded_summary", summary_matches(result["summary"], s),
          "recomputed majority robust loss " + fmt(s.overall));

      const double delta = number(config, "delta");
      const double eps = number(config, "epsilon");
      std::vector<double> avg(d.g, 0.0);
      std::vector<GroupWeights> weights;
      std::vector<std::vector<double>> rewards;
      GroupWeights w = GroupWeights::uniform(d.g);
      for (const auto& member : nested.members) {
        const auto losses = robust_loss(member, d).per_group;
        std::vector<double> m(d.g);
        for (std::size_t j = 0; j < d.g; ++j) {
          avg[j] += losses[j] / static_cast<double>(nested.size());
          m[j] = std::clamp(1.0 - losses[j], 0.0, 1.0);
        }
        weights.push_back(w);
        rewards.push_back(m);
        w = hedge_update(w, m, delta);
      }
      add("recorded_group_losses",
          result.contains("per_group_avg_loss") &&
              vector_matches(result["per_group_avg_loss"], avg) &&
              result.contains("per_group_maj_loss") &&
              vector_matches(result["per_group_maj_loss"], s.per_group),
          "per-group averages and majority losses recomputed");

      bool trajectory_ok = result.contains("hedge") &&
                           result["hedge"].contains("weights") &&
                           result["hedge"].contains("rewards") &&
                           result["hedge"]["weights"].size() == weights.size() &&
                           result["hedge"]["rewards"].size() == rewards.size();
      for (std::size_t t = 0; trajectory_ok && t < weights.size(); ++t) {
        trajectory_ok = vector_matches(result["hedge"]["weights"][t], weights[t].p) &&
                        vector_matches(result["hedge"]["rewards"][t], rewards[t]);
      }
      add("recorded_hedge_trajectory", trajectory_ok,
          "group weights replayed from uniform with delta " + fmt(delta));
      const auto regret = hedge_regret(weights, rewards, delta);
      add("hedge_regret", regret.holds(),
          "sum m.P = " + fmt(regret.algorithm_cost) + " <= " + fmt(regret.bound));

      double worst_avg = 0.0;
      double worst_maj = 0.0;
      for (std::size_t j = 0; j < d.g; ++j) {
        worst_avg = std::max(worst_avg, avg[j]);
        worst_maj = std::max(worst_maj, s.per_group[j]);
      }
      add("average_multi_robustness", worst_avg <= opt_max.value + eps + 1e-12,
          "max_j average loss " + fmt(worst_avg) + " <= OPT_max + eps = " +
              fmt(opt_max.value + eps));
      add("majority_multi_robustness",
          worst_maj <= 2.0 * (opt_max.value + eps) + 1e-12,
          "max_j majority loss " + fmt(worst_maj) + " <= 2 (OPT_max + eps) = " +
              fmt(2.0 * (opt_max.value + eps)));
      break;
    }
  }

  for (const auto& c : report.checks) {
    if (!c.passed) report.exit_code = kExitViolation;
  }
  return report;
}

}  // namespace robustboost::harness
