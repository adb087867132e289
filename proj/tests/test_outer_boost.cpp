#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "reference.hpp"
#include "robustboost/datagen.hpp"
#include "robustboost/harness.hpp"
#include "robustboost/outer_boost.hpp"

namespace rb = robustboost;
using rb::Label;
using rb::Point;

namespace {

rb::OuterResult run(const rb::GroupedDataset& d, const std::vector<rb::Hypothesis>& cls,
                    const rb::OuterConfig& cfg, const rb::OuterObserver& obs = {}) {
  const auto oracle = rb::harness::make_oracle(d, &cls);
  return rb::group_boost(d, cfg, *oracle, obs);
}

}  // namespace

TEST(HedgeUpdate, Examples) {
  const auto u = rb::GroupWeights::uniform(2);
  const auto next = rb::hedge_update(u, std::vector<double>{1.0, 0.0}, 0.5);
  EXPECT_DOUBLE_EQ(next.p[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(next.p[1], 2.0 / 3.0);

  const rb::GroupWeights w{{0.2, 0.5, 0.3}};
  const auto same = rb::hedge_update(w, std::vector<double>{0.4, 0.4, 0.4}, 0.3);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(same.p[j], w.p[j]);
}

TEST(HedgeUpdate, Errors) {
  const auto u = rb::GroupWeights::uniform(2);
  EXPECT_THROW(rb::hedge_update(u, std::vector<double>{1.1, 0.0}, 0.5), rb::Error);
  EXPECT_THROW(rb::hedge_update(u, std::vector<double>{-0.1, 0.0}, 0.5), rb::Error);
  EXPECT_THROW(rb::hedge_update(u, std::vector<double>{0.5, 0.5}, 1.0), rb::Error);
  EXPECT_THROW(rb::hedge_update(u, std::vector<double>{0.5, 0.5}, 0.0), rb::Error);
  EXPECT_THROW(rb::hedge_update(u, std::vector<double>{0.5}, 0.5), rb::Error);
  EXPECT_THROW(rb::GroupWeights::uniform(0), rb::Error);
}

TEST(HedgeUpdate, RandomTrialsStayNormalizedAndPositive) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    rb::GroupWeights w{{u(rng) + 1e-3, u(rng) + 1e-3, u(rng) + 1e-3}};
    const double s = w.sum();
    for (auto& v : w.p) v /= s;
    const std::vector<double> m{u(rng), u(rng), u(rng)};
    const double delta = 0.01 + 0.98 * u(rng);
    const auto next = rb::hedge_update(w, m, delta);
    ASSERT_NEAR(next.sum(), 1.0, 1e-9);
    for (double v : next.p) ASSERT_GT(v, 0.0);
    // shifting every reward by one constant keeps the ranking of P'_j / P_j
    const double lo = *std::min_element(m.begin(), m.end());
    std::vector<double> shifted = m;
    for (auto& v : shifted) v -= lo;
    const auto next2 = rb::hedge_update(w, shifted, delta);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        ASSERT_EQ(next.p[a] / w.p[a] < next.p[b] / w.p[b],
                  next2.p[a] / w.p[a] < next2.p[b] / w.p[b]);
      }
    }
  }
}

TEST(HedgeUpdate, EqualRewardsForAllGroupsAreANoOp) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 200; ++trial) {
    rb::GroupWeights w{{0.1, 0.2, 0.3, 0.4}};
    const double c = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto next = rb::hedge_update(w, std::vector<double>(4, c), 0.4);
    for (std::size_t j = 0; j < 4; ++j) ASSERT_NEAR(next.p[j], w.p[j], 1e-15);
  }
}

TEST(HedgeRegret, ConstantAlternatingAndSingleGroup) {
  const double delta = std::sqrt(std::log(2.0) / 200.0);
  std::vector<rb::GroupWeights> ws;
  std::vector<std::vector<double>> ms;
  auto w = rb::GroupWeights::uniform(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> m{0.3, 0.3};
    ws.push_back(w);
    ms.push_back(m);
    w = rb::hedge_update(w, m, delta);
  }
  const auto r = rb::hedge_regret(ws, ms, delta);
  EXPECT_NEAR(r.algorithm_cost, 60.0, 1e-9);
  EXPECT_NEAR(r.bound - (1 + delta) * 60.0, std::log(2.0) / delta, 1e-9);
  EXPECT_TRUE(r.holds());

  ws.clear();
  ms.clear();
  w = rb::GroupWeights::uniform(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> m{t % 2 ? 1.0 : 0.0, t % 2 ? 0.0 : 1.0};
    ws.push_back(w);
    ms.push_back(m);
    w = rb::hedge_update(w, m, delta);
  }
  EXPECT_TRUE(rb::hedge_regret_check(ws, ms, delta));

  ws.assign(50, rb::GroupWeights::uniform(1));
  ms.assign(50, std::vector<double>{0.7});
  EXPECT_TRUE(rb::hedge_regret_check(ws, ms, 0.5));

  // a doctored trajectory that ignores the rewards entirely can fail
  ws.clear();
  ms.clear();
  for (int t = 0; t < 200; ++t) {
    ws.push_back(rb::GroupWeights{{1.0, 0.0}});
    ms.push_back({1.0, 0.0});
  }
  EXPECT_FALSE(rb::hedge_regret_check(ws, ms, delta));
}

TEST(OuterConfig, Defaults) {
  const auto cfg = rb::OuterConfig::from_epsilon(0.3, 2, 3);
  EXPECT_EQ(cfg.rounds, 70u);         // ceil(9 ln 2 / 0.09)
  EXPECT_EQ(cfg.inner_rounds, 440u);  // ceil(36 ln 3 / 0.09)
  EXPECT_NEAR(cfg.delta, std::sqrt(std::log(2.0) / 70.0), 1e-15);
  EXPECT_NEAR(cfg.inner_eta, std::sqrt(std::log(3.0) / 440.0), 1e-15);
  const auto single = rb::OuterConfig::from_epsilon(0.3, 1, 3);
  EXPECT_EQ(single.rounds, 1u);
  rb::OuterConfig bad = cfg;
  bad.delta = 1.0;
  EXPECT_THROW(bad.validate(), rb::Error);
}

TEST(GroupBoost, SingleGroupEqualsInnerRun) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = ref::random_table_instance(1100 + s, 8, 3, 1, 40);
    auto cfg = rb::OuterConfig::from_epsilon(0.4, 1, inst.d.k);
    ASSERT_EQ(cfg.rounds, 1u);
    const auto res = run(inst.d, inst.cls, cfg);
    const auto oracle = rb::harness::make_oracle(inst.d, &inst.cls);
    const auto inner = rb::fms_boost(
        inst.d, rb::InnerConfig{cfg.inner_eta, cfg.inner_rounds, {}}, *oracle);
    ASSERT_EQ(res.ensemble.size(), 1u);
    EXPECT_EQ(res.ensemble.members[0].hypotheses, inner.hypotheses);
    EXPECT_EQ(res.weight_history[0].p, std::vector<double>{1.0});
  }
}

TEST(GroupBoost, RealizableTwoGroups) {
  auto inst = ref::random_table_instance(1200, 10, 3, 2, 30);
  const auto& hidden = std::get<rb::TableHypothesis>(inst.cls[11]);
  for (auto& e : inst.d.examples) {
    e.y = hidden.predict(e.u[0]);
    std::erase_if(e.u, [&](const Point& z) { return hidden.predict(z) != e.y; });
  }
  inst.d.k = 0;
  for (const auto& e : inst.d.examples) inst.d.k = std::max(inst.d.k, e.u.size());
  const auto cfg = rb::OuterConfig::from_epsilon(0.3, 2, std::max<std::size_t>(2, inst.d.k));
  const auto res = run(inst.d, inst.cls, cfg);
  for (double l : res.report.per_group_avg_loss) EXPECT_EQ(l, 0.0);
  for (double l : res.report.per_group_maj_loss) EXPECT_EQ(l, 0.0);
}

TEST(GroupBoost, TwoGroupAdversarialInstance) {
  const auto inst = rb::datagen::gen_two_group_adversarial(7);
  std::size_t opt_index = 0, max_index = 0;
  ref::opt(inst.dataset, inst.hypotheses, &opt_index);
  const double opt_max = ref::opt_max(inst.dataset, inst.hypotheses, &max_index);
  EXPECT_NE(opt_index, max_index);
  const auto cfg = rb::OuterConfig::from_epsilon(0.3, 2, inst.dataset.k);
  const auto res = run(inst.dataset, inst.hypotheses, cfg);
  for (double l : res.report.per_group_avg_loss) EXPECT_LE(l, opt_max + 0.3 + 1e-12);
  for (double l : res.report.per_group_maj_loss) EXPECT_LE(l, 2 * (opt_max + 0.3) + 1e-12);
  EXPECT_TRUE(rb::hedge_regret_check(res.weight_history, res.reward_history, cfg.delta));
}

TEST(GroupBoost, ReportMatchesRecomputationAndWeightsStayPositive) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto inst = ref::random_table_instance(1300 + s, 10, 3, 3, 40);
    rb::OuterConfig cfg{12, 0.3, 30, 0.25};
    const auto res = run(inst.d, inst.cls, cfg, [&](const rb::OuterRound& r) {
      ASSERT_NEAR(r.weights.sum(), 1.0, 1e-9);
      for (double v : r.weights.p) ASSERT_GT(v, 0.0);
      ASSERT_NEAR(std::accumulate(r.sample_weights.begin(), r.sample_weights.end(), 0.0),
                  1.0, 1e-9);
      for (std::size_t j = 0; j < inst.d.g; ++j) {
        ASSERT_EQ(r.group_losses[j], ref::group_loss(r.hypothesis, inst.d, j));
      }
    });
    for (std::size_t j = 0; j < inst.d.g; ++j) {
      double avg = 0.0;
      for (const auto& h : res.ensemble.members) avg += ref::group_loss(h, inst.d, j);
      EXPECT_NEAR(res.report.per_group_avg_loss[j], avg / cfg.rounds, 1e-12);
      EXPECT_EQ(res.report.per_group_maj_loss[j], ref::group_loss(res.ensemble, inst.d, j));
      EXPECT_EQ(rb::group_robust_loss(res.ensemble, inst.d, j),
                res.report.per_group_maj_loss[j]);
    }
    // replay the Hedge trajectory
    auto w = rb::GroupWeights::uniform(inst.d.g);
    for (std::size_t t = 0; t < cfg.rounds; ++t) {
      for (std::size_t j = 0; j < inst.d.g; ++j) {
        ASSERT_NEAR(res.weight_history[t].p[j], w.p[j], 1e-15);
        ASSERT_NEAR(res.reward_history[t][j], 1.0 - res.loss_history[t][j], 1e-15);
      }
      w = rb::hedge_update(w, res.reward_history[t], cfg.delta);
    }
  }
}

TEST(GroupBoost, RejectsOverlappingData) {
  const auto inst = ref::random_table_instance(1400, 8, 2, 2, 10, 5);
  ASSERT_FALSE(rb::is_disjoint(inst.d));
  const auto oracle = rb::harness::make_oracle(inst.d, &inst.cls);
  EXPECT_THROW(rb::group_boost(inst.d, rb::OuterConfig{}, *oracle), rb::Error);
  EXPECT_NO_THROW(rb::group_boost_overlapping(inst.d, rb::OuterConfig{2, 0.5, 3, 0.5}, *oracle));
}

TEST(GroupRobustLoss, Examples) {
  rb::GroupedDataset d;
  d.k = 2;
  for (int i = 0; i < 4; ++i) {
    const double x = 2.0 + i;
    d.examples.push_back({Point{x}, Label::Positive, {Point{x}, Point{x + 0.5}}, {0}});
  }
  const rb::Hypothesis robust = rb::ThresholdHypothesis(0.0, rb::Orientation::AbovePositive);
  EXPECT_EQ(rb::group_robust_loss(robust, d, 0), 0.0);
  d.examples[2].u[1] = Point{-1.0};
  EXPECT_EQ(rb::group_robust_loss(robust, d, 0), 0.25);
  EXPECT_THROW(rb::group_robust_loss(robust, d, 1), rb::Error);

  const auto ex1 = rb::datagen::gen_example1(4, 4);
  const rb::Hypothesis erm = rb::ThresholdHypothesis(0.375, rb::Orientation::AbovePositive);
  EXPECT_EQ(rb::group_robust_loss(erm, ex1.dataset, 0), 3.0 / 8.0);
}

TEST(GroupBoost, TraceCsvLayout) {
  const auto inst = ref::random_table_instance(1500, 6, 2, 2, 10);
  const auto res = run(inst.d, inst.cls, rb::OuterConfig{4, 0.3, 5, 0.3});
  std::ostringstream os;
  rb::write_outer_trace_csv(os, res);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "round,P_0,P_1,loss_0,loss_1,avg_loss_0,avg_loss_1");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(rows, 4u);
}

TEST(GroupBoost, PerRoundWeightedLossWithinInnerBound) {
  std::size_t rounds = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = rb::datagen::gen_random(8 + s % 5, 2 + s % 2, 2 + s % 3, 60, 3000 + s);
    const double opt_max = ref::opt_max(inst.dataset, inst.hypotheses);
    const auto cfg = rb::OuterConfig::from_epsilon(0.3, inst.dataset.g, inst.dataset.k);
    const double slack =
        2.0 * std::sqrt(std::log(double(inst.dataset.k)) / double(cfg.inner_rounds));
    run(inst.dataset, inst.hypotheses, cfg, [&](const rb::OuterRound& r) {
      double weighted = 0.0;
      for (std::size_t j = 0; j < inst.dataset.g; ++j) {
        weighted += r.weights.p[j] * r.group_losses[j];
      }
      ++rounds;
      ASSERT_LE(weighted, opt_max + slack + 1e-12) << "seed " << s << " round " << r.round;
    });
  }
  EXPECT_GT(rounds, 0u);
}
