#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "reference.hpp"
#include "robustboost/datagen.hpp"
#include "robustboost/harness.hpp"
#include "robustboost/inner_boost.hpp"
#include "robustboost/metrics.hpp"

namespace rb = robustboost;
namespace hs = robustboost::harness;
using rb::io::Json;

namespace {

hs::RunOptions opts(hs::Mode mode, double eps = 0.3) {
  hs::RunOptions o;
  o.mode = mode;
  o.epsilon = eps;
  return o;
}

const hs::Check* find_check(const hs::VerifyReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST(Harness, PlainErmOnExampleOne) {
  const auto inst = rb::datagen::gen_example1(4, 4);
  const auto out = hs::run_experiment(inst.dataset, nullptr, opts(hs::Mode::PlainErm));
  EXPECT_EQ(out.result["summary"]["overall"].get<double>(), 0.375);
  EXPECT_EQ(out.result["config"]["oracle"], "threshold");
  const auto with_class =
      hs::run_experiment(inst.dataset, &inst.hypotheses, opts(hs::Mode::PlainErm));
  EXPECT_EQ(with_class.result["summary"]["overall"].get<double>(), 0.375);
  EXPECT_TRUE(with_class.result["ensemble"][0].is_number_integer());
  EXPECT_TRUE(hs::verify_result(inst.dataset, inst.hypotheses, with_class.result).passed());
}

TEST(Harness, InnerMeetsGuaranteeAndVerifies) {
  const auto inst = rb::datagen::gen_example1(4, 4);
  const auto out =
      hs::run_experiment(inst.dataset, &inst.hypotheses, opts(hs::Mode::Inner, 0.5));
  EXPECT_LE(out.result["summary"]["overall"].get<double>(), 2.0 * 0.125 + 0.5);
  EXPECT_EQ(out.result["config"]["rounds"].get<std::size_t>(),
            rb::default_inner_rounds(4, 0.5));
  const auto rep = hs::verify_result(inst.dataset, inst.hypotheses, out.result);
  EXPECT_TRUE(rep.passed());
  ASSERT_NE(find_check(rep, "majority_guarantee"), nullptr);
  ASSERT_NE(find_check(rep, "regret_bound"), nullptr);
}

TEST(Harness, OuterWithOneGroupEqualsInner) {
  const auto inst = rb::datagen::gen_random(10, 3, 1, 12, 5);
  auto o = opts(hs::Mode::Outer);
  o.inner_rounds = 40;
  const auto outer = hs::run_experiment(inst.dataset, &inst.hypotheses, o);
  auto i = opts(hs::Mode::Inner);
  i.rounds = 40;
  const auto inner = hs::run_experiment(inst.dataset, &inst.hypotheses, i);
  ASSERT_EQ(outer.result["ensemble"].size(), 1u);
  EXPECT_EQ(outer.result["ensemble"][0], inner.result["ensemble"]);
  EXPECT_EQ(outer.result["summary"], inner.result["summary"]);
}

TEST(Harness, OuterVerifiesAndTamperingIsCaught) {
  const auto inst = rb::datagen::gen_two_group_adversarial(3);
  const auto out = hs::run_experiment(inst.dataset, &inst.hypotheses, opts(hs::Mode::Outer));
  ASSERT_TRUE(hs::verify_result(inst.dataset, inst.hypotheses, out.result).passed());

  auto lowered = out.result;
  lowered["per_group_avg_loss"][1] = lowered["per_group_avg_loss"][1].get<double>() - 0.01;
  auto rep = hs::verify_result(inst.dataset, inst.hypotheses, lowered);
  EXPECT_EQ(rep.exit_code, hs::kExitViolation);
  EXPECT_FALSE(find_check(rep, "recorded_group_losses")->passed);

  auto reweighted = out.result;
  reweighted["hedge"]["weights"][1][0] = 0.9;
  rep = hs::verify_result(inst.dataset, inst.hypotheses, reweighted);
  EXPECT_FALSE(find_check(rep, "recorded_hedge_trajectory")->passed);
}

TEST(Harness, InnerTamperingIsCaught) {
  const auto inst = rb::datagen::gen_example1(4, 4);
  const auto out = hs::run_experiment(inst.dataset, &inst.hypotheses, opts(hs::Mode::Inner));
  auto t1 = out.result;
  t1["summary"]["overall"] = 0.0;
  EXPECT_FALSE(find_check(hs::verify_result(inst.dataset, inst.hypotheses, t1),
                          "recorded_summary")->passed);
  auto t2 = out.result;
  t2["config"]["rounds"] = t2["config"]["rounds"].get<std::size_t>() + 1;
  EXPECT_FALSE(find_check(hs::verify_result(inst.dataset, inst.hypotheses, t2),
                          "recorded_rounds")->passed);
  auto t3 = out.result;
  t3["ensemble"][0] = 99999;
  EXPECT_THROW(hs::verify_result(inst.dataset, inst.hypotheses, t3), rb::Error);
  auto t4 = out.result;
  t4.erase("ensemble");
  EXPECT_THROW(hs::verify_result(inst.dataset, inst.hypotheses, t4), rb::Error);
}

TEST(Harness, BadEnsembleFailsABound) {
  // every vote goes to the worst member; records are made consistent
  const auto inst = rb::datagen::gen_example1(4, 4);
  std::size_t worst = 0;
  double worst_loss = -1.0;
  for (std::size_t h = 0; h < inst.hypotheses.size(); ++h) {
    const double l = ref::robust_loss(inst.hypotheses[h], inst.dataset);
    if (l > worst_loss) worst_loss = l, worst = h;
  }
  const std::size_t t = rb::default_inner_rounds(4, 0.3);
  rb::Ensemble e;
  Json members = Json::array();
  for (std::size_t i = 0; i < t; ++i) {
    e.hypotheses.push_back(inst.hypotheses[worst]);
    members.push_back(worst);
  }
  auto out = hs::run_experiment(inst.dataset, &inst.hypotheses, opts(hs::Mode::Inner));
  Json forged = out.result;
  forged["ensemble"] = members;
  forged["summary"] = rb::io::summary_to_json(rb::robust_loss(e, inst.dataset));
  forged["mixed_robust_loss"] = rb::mixed_robust_loss(e, inst.dataset);
  const auto rep = hs::verify_result(inst.dataset, inst.hypotheses, forged);
  EXPECT_EQ(rep.exit_code, hs::kExitViolation);
  EXPECT_TRUE(find_check(rep, "recorded_summary")->passed);
  EXPECT_FALSE(find_check(rep, "regret_bound")->passed);
}

TEST(Harness, VerifierIsSoundOnForgedInnerResults) {
  // a consistent forged result may only pass when the bounds really hold
  std::mt19937_64 rng(77);
  std::size_t passed = 0, failed = 0;
  for (std::uint64_t s = 0; s < 150; ++s) {
    const auto inst = ref::random_table_instance(900 + s, 8, 3, 1, 6);
    const double eps = 0.5;
    const std::size_t t = rb::default_inner_rounds(3, eps);
    rb::Ensemble e;
    Json members = Json::array();
    const std::size_t pool = 1 + rng() % 3;
    for (std::size_t i = 0; i < t; ++i) {
      const std::size_t h = rng() % pool;
      e.hypotheses.push_back(inst.cls[h]);
      members.push_back(h);
    }
    Json r;
    r["mode"] = "inner";
    r["config"] = {{"epsilon", eps}, {"rounds", t}, {"eta", rb::default_eta(3, t)}};
    r["summary"] = rb::io::summary_to_json(rb::robust_loss(e, inst.d));
    r["mixed_robust_loss"] = rb::mixed_robust_loss(e, inst.d);
    r["ensemble"] = members;
    const auto rep = hs::verify_result(inst.d, inst.cls, r);
    const double opt = ref::opt(inst.d, inst.cls);
    const double slack = 2.0 * std::sqrt(std::log(3.0) / t);
    if (rep.passed()) {
      ++passed;
      ASSERT_LE(ref::mixed(e, inst.d), opt + slack + 1e-9) << s;
      ASSERT_LE(ref::robust_loss(e, inst.d), 2.0 * opt + eps + 1e-9) << s;
    } else {
      ++failed;
      ASSERT_TRUE(ref::mixed(e, inst.d) > opt + slack - 1e-9 ||
                  ref::robust_loss(e, inst.d) > 2.0 * opt + eps - 1e-9)
          << s;
    }
  }
  EXPECT_GT(passed, 0u);
  EXPECT_GT(failed, 0u);
}

TEST(Harness, GuardRefusesHugeClasses) {
  const auto inst = rb::datagen::gen_random(50, 3, 1, 70000, 1);
  // 50 examples * k=3 * 70000 members > 10^7
  Json r;
  r["mode"] = "plain-erm";
  r["config"] = {{"epsilon", 0.3}};
  r["summary"] = Json::object();
  r["ensemble"] = Json::array({0});
  EXPECT_THROW(hs::verify_result(inst.dataset, inst.hypotheses, r), rb::GuardExceeded);
}

TEST(Harness, Reproducible) {
  const auto inst = rb::datagen::gen_random(12, 3, 2, 15, 8);
  auto o = opts(hs::Mode::Outer);
  o.trace = true;
  const auto a = hs::run_experiment(inst.dataset, &inst.hypotheses, o);
  const auto b = hs::run_experiment(inst.dataset, &inst.hypotheses, o);
  EXPECT_EQ(a.result.dump(), b.result.dump());
  EXPECT_EQ(a.trace_csv, b.trace_csv);
  EXPECT_FALSE(a.trace_csv.empty());
}

TEST(Harness, IncompatibleOptions) {
  const auto inst = rb::datagen::gen_example1(3, 3);
  auto p = opts(hs::Mode::PlainErm);
  p.rounds = 3;
  EXPECT_THROW(hs::run_experiment(inst.dataset, nullptr, p), rb::Error);
  auto i = opts(hs::Mode::Inner);
  i.delta = 0.1;
  EXPECT_THROW(hs::run_experiment(inst.dataset, nullptr, i), rb::Error);
  auto z = opts(hs::Mode::Inner, 0.0);
  EXPECT_THROW(hs::run_experiment(inst.dataset, nullptr, z), rb::Error);
  EXPECT_THROW(hs::mode_from_string("middle"), rb::Error);
  // threshold ERM needs 1-D data
  const auto grid = rb::datagen::gen_random(6, 2, 1, 3, 0);
  EXPECT_THROW(hs::run_experiment(grid.dataset, nullptr, opts(hs::Mode::Inner)), rb::Error);
}

TEST(Harness, OverlappingGroupsCarryNotice) {
  const auto inst = ref::random_table_instance(31, 8, 2, 2, 6, 5);
  ASSERT_FALSE(rb::is_disjoint(inst.d));
  auto o = opts(hs::Mode::Outer, 0.5);
  o.rounds = 6;
  o.inner_rounds = 30;
  const auto out = hs::run_experiment(inst.d, &inst.cls, o);
  EXPECT_TRUE(out.result.contains("notice"));
  EXPECT_FALSE(out.result["dataset"]["disjoint"].get<bool>());
  const auto rep = hs::verify_result(inst.d, inst.cls, out.result);
  EXPECT_NE(find_check(rep, "recorded_hedge_trajectory"), nullptr);
  EXPECT_TRUE(find_check(rep, "recorded_summary")->passed);
  EXPECT_TRUE(find_check(rep, "hedge_regret")->passed);
}
