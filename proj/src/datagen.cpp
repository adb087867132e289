#include "robustboost/datagen.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace robustboost::datagen {

namespace {

Label coin_label(std::mt19937_64& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? Label::Positive
                                               : Label::Negative;
}

void set_k(GroupedDataset& d) {
  d.k = 0;
  for (const auto& e : d.examples) d.k = std::max(d.k, e.u.size());
}

}  // namespace

Instance gen_example1(std::size_t n, std::size_t k, bool include_x) {
  if (n < 2) throw Error("gen_example1: n must be at least 2");
  if (k < 2) throw Error("gen_example1: k must be at least 2");

  Instance inst;
  auto& d = inst.dataset;
  d.g = 1;
  auto add = [&](double x, Label y, PerturbationSet u) {
    if (include_x) u.insert(u.begin(), Point{x});
    d.examples.push_back({Point{x}, y, std::move(u), {0}});
  };
  // Positives z_1..z_n at +1.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    PerturbationSet u{Point{0.0}};
    u.insert(u.end(), k - 1, Point{0.75});
    add(1.0, Label::Positive, std::move(u));
  }
  add(1.0, Label::Positive, PerturbationSet(k, Point{0.75}));
  // Negatives z_{n+1}..z_{2n} at -1.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    add(-1.0, Label::Negative, PerturbationSet(k, Point{-0.75}));
  }
  add(-1.0, Label::Negative, PerturbationSet(k, Point{0.0}));
  set_k(d);

  for (double tau : {-2.0, -0.875, -0.375, 0.375, 0.875, 2.0}) {
    inst.hypotheses.emplace_back(
        ThresholdHypothesis(tau, Orientation::AbovePositive));
    inst.hypotheses.emplace_back(
        ThresholdHypothesis(tau, Orientation::BelowPositive));
  }
  inst.meta = {"example1",
               {{"n", static_cast<double>(n)},
                {"k", static_cast<double>(k)},
                {"include_x", include_x ? 1.0 : 0.0}},
               0};
  return inst;
}

Instance gen_random(std::size_t m, std::size_t k, std::size_t g,
                    std::size_t class_size, std::uint64_t seed,
                    bool include_x) {
  if (m == 0 || k == 0 || g == 0 || class_size == 0) {
    throw Error("gen_random: parameters must be positive");
  }
  if (g > m) throw Error("gen_random: more groups than examples");

  constexpr std::size_t kSide = 4;
  constexpr std::size_t kCells = kSide * kSide;
  std::mt19937_64 rng(seed);

  std::vector<Point> universe;
  for (std::size_t r = 0; r < kSide; ++r) {
    for (std::size_t c = 0; c < kSide; ++c) {
      universe.emplace_back(
          std::vector<double>{static_cast<double>(r), static_cast<double>(c)});
    }
  }
  auto chebyshev = [&](std::size_t a, std::size_t b) {
    const auto dr = static_cast<long>(a / kSide) - static_cast<long>(b / kSide);
    const auto dc = static_cast<long>(a % kSide) - static_cast<long>(b % kSide);
    return std::max(std::labs(dr), std::labs(dc));
  };

  std::vector<Label> hidden(kCells);
  for (auto& v : hidden) v = coin_label(rng);
  const bool planted = std::bernoulli_distribution(0.5)(rng);

  Instance inst;
  auto& d = inst.dataset;
  d.g = g;
  std::uniform_int_distribution<std::size_t> cell(0, kCells - 1);
  std::bernoulli_distribution noise(0.15);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t x = cell(rng);
    Label y = hidden[x];
    if (!planted && noise(rng)) y = flip(y);

    std::vector<std::size_t> candidates;
    for (std::size_t z = 0; z < kCells; ++z) {
      if (z == x) continue;
      if (planted && hidden[z] != y) continue;
      candidates.push_back(z);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) {
                       return chebyshev(a, x) < chebyshev(b, x);
                     });
    const std::size_t need = include_x ? k - 1 : k;
    candidates.resize(std::min(candidates.size(), 2 * need));
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(std::min(candidates.size(), need));

    PerturbationSet u;
    if (include_x || candidates.empty()) u.push_back(universe[x]);
    for (std::size_t z : candidates) u.push_back(universe[z]);
    d.examples.push_back({universe[x], y, std::move(u), {i % g}});
  }
  set_k(d);

  std::uniform_real_distribution<double> flip_rate(0.05, 0.5);
  for (std::size_t h = 0; h < class_size; ++h) {
    const double q = flip_rate(rng);
    std::bernoulli_distribution flipper(q);
    std::vector<Label> outputs = hidden;
    for (auto& v : outputs) {
      if (flipper(rng)) v = flip(v);
    }
    inst.hypotheses.emplace_back(TableHypothesis(universe, std::move(outputs)));
  }
  if (planted) {
    const std::size_t slot =
        std::uniform_int_distribution<std::size_t>(0, class_size - 1)(rng);
    inst.hypotheses[slot] = TableHypothesis(universe, hidden);
  }

  inst.meta = {"random",
               {{"m", static_cast<double>(m)},
                {"k", static_cast<double>(k)},
                {"g", static_cast<double>(g)},
                {"class_size", static_cast<double>(class_size)},
                {"include_x", include_x ? 1.0 : 0.0},
                {"planted", planted ? 1.0 : 0.0}},
               seed};
  return inst;
}

Instance gen_two_group_adversarial(std::uint64_t seed) {
  constexpr std::size_t kLarge = 40;
  constexpr std::size_t kSmall = 10;
  constexpr std::size_t kVariants = 3;
  constexpr std::size_t kNoisy = 40;
  std::mt19937_64 rng(seed);

  Instance inst;
  auto& d = inst.dataset;
  d.g = 2;
  std::vector<Point> universe;
  std::vector<Label> truth;
  for (std::size_t i = 0; i < kLarge + kSmall; ++i) {
    const double x = 4.0 * static_cast<double>(i);
    PerturbationSet u;
    for (std::size_t v = 0; v < kVariants; ++v) {
      u.push_back(Point{x + static_cast<double>(v)});
    }
    const Label y = coin_label(rng);
    universe.insert(universe.end(), u.begin(), u.end());
    truth.insert(truth.end(), kVariants, y);
    d.examples.push_back({Point{x}, y, std::move(u), {i < kLarge ? 0u : 1u}});
  }
  set_k(d);

  auto pick = [&](std::size_t lo, std::size_t hi, std::size_t count) {
    std::vector<std::size_t> idx(hi - lo);
    std::iota(idx.begin(), idx.end(), lo);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
  };

  // Best overall: perfect on the large group, 3/10 on the small one.
  std::vector<Label> overall_best = truth;
  const auto small_hit = pick(kLarge, kLarge + kSmall, 3);
  for (std::size_t i : small_hit) {
    overall_best[i * kVariants + 1] = flip(truth[i * kVariants + 1]);
  }
  // Best worst-group: 4/40 and 1/10.
  std::vector<Label> balanced = truth;
  const auto large_hit = pick(0, kLarge, 4);
  const auto small_one = pick(kLarge, kLarge + kSmall, 1);
  for (std::size_t i : large_hit) {
    balanced[i * kVariants + 2] = flip(truth[i * kVariants + 2]);
  }
  balanced[small_one[0] * kVariants + 2] =
      flip(truth[small_one[0] * kVariants + 2]);

  inst.hypotheses.emplace_back(TableHypothesis(universe, overall_best));
  inst.hypotheses.emplace_back(TableHypothesis(universe, balanced));
  // Degraded copies: only currently-correct cells are flipped, so no copy
  // improves on its parent in any group.
  std::uniform_int_distribution<std::size_t> flips(1, 5);
  std::uniform_int_distribution<std::size_t> any_cell(0, universe.size() - 1);
  for (std::size_t c = 0; c < kNoisy; ++c) {
    std::vector<Label> outputs = c % 2 == 0 ? overall_best : balanced;
    const std::size_t count = flips(rng);
    for (std::size_t f = 0; f < count;) {
      const std::size_t cell = any_cell(rng);
      if (outputs[cell] == truth[cell]) {
        outputs[cell] = flip(outputs[cell]);
        ++f;
      }
    }
    inst.hypotheses.emplace_back(TableHypothesis(universe, std::move(outputs)));
  }

  inst.meta = {"two-group-adversarial",
               {{"large_group", static_cast<double>(kLarge)},
                {"small_group", static_cast<double>(kSmall)},
                {"k", static_cast<double>(kVariants)},
                {"degraded_members", static_cast<double>(kNoisy)},
                {"overall_best_small_group_loss", 0.3},
                {"balanced_large_group_loss", 0.1},
                {"balanced_small_group_loss", 0.1}},
               seed};
  return inst;
}

bool masks_cover_patches(std::size_t side, std::size_t patch, std::size_t mask) {
  if (patch == 0 || patch > side) return false;
  if (mask > side) return false;
  const std::size_t patch_places = side - patch + 1;
  const std::size_t mask_places = side - mask + 1;
  auto inside = [&](std::size_t p, std::size_t m) {
    return m <= p && p + patch <= m + mask;
  };
  for (std::size_t pr = 0; pr < patch_places; ++pr) {
    for (std::size_t pc = 0; pc < patch_places; ++pc) {
      bool covered = false;
      for (std::size_t mr = 0; mr < mask_places && !covered; ++mr) {
        for (std::size_t mc = 0; mc < mask_places && !covered; ++mc) {
          covered = inside(pr, mr) && inside(pc, mc);
        }
      }
      if (!covered) return false;
    }
  }
  return true;
}

Instance gen_masked_grid(std::size_t side, std::size_t patch, std::size_t mask,
                         std::uint64_t seed, std::size_t count) {
  if (patch == 0) throw Error("gen_masked_grid: patch must be positive");
  if (mask < patch) throw Error("gen_masked_grid: mask must be >= patch");
  if (side < mask) throw Error("gen_masked_grid: side must be >= mask");
  if (count == 0) throw Error("gen_masked_grid: count must be positive");

  const std::size_t cells = side * side;
  const std::size_t places = side - mask + 1;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(0.5);

  Instance inst;
  auto& d = inst.dataset;
  d.g = 1;
  std::map<Point, std::size_t> seen;
  std::vector<Point> universe;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> grid(cells);
    std::size_t ones = 0;
    for (auto& v : grid) {
      v = bit(rng) ? 1.0 : 0.0;
      if (v > 0.0) ++ones;
    }
    const Label y = 2 * ones > cells ? Label::Positive : Label::Negative;
    PerturbationSet u;
    for (std::size_t r = 0; r < places; ++r) {
      for (std::size_t c = 0; c < places; ++c) {
        std::vector<double> masked = grid;
        for (std::size_t dr = 0; dr < mask; ++dr) {
          for (std::size_t dc = 0; dc < mask; ++dc) {
            masked[(r + dr) * side + (c + dc)] = 0.0;
          }
        }
        Point z(std::move(masked));
        if (seen.emplace(z, universe.size()).second) universe.push_back(z);
        u.push_back(std::move(z));
      }
    }
    d.examples.push_back({Point(std::move(grid)), y, std::move(u), {0}});
  }
  set_k(d);

  auto cell_sum = [](const Point& z) {
    double s = 0.0;
    for (double v : z.coords()) s += v;
    return s;
  };
  for (std::size_t s = 0; s <= cells + 1; ++s) {
    std::vector<Label> outputs;
    for (const auto& z : universe) {
      outputs.push_back(cell_sum(z) >= static_cast<double>(s) ? Label::Positive
                                                              : Label::Negative);
    }
    inst.hypotheses.emplace_back(TableHypothesis(universe, std::move(outputs)));
  }
  for (std::size_t h = 0; h < 8; ++h) {
    std::vector<Label> outputs;
    for (std::size_t z = 0; z < universe.size(); ++z) {
      outputs.push_back(coin_label(rng));
    }
    inst.hypotheses.emplace_back(TableHypothesis(universe, std::move(outputs)));
  }

  inst.meta = {"masked-grid",
               {{"side", static_cast<double>(side)},
                {"patch", static_cast<double>(patch)},
                {"mask", static_cast<double>(mask)},
                {"count", static_cast<double>(count)}},
               seed};
  return inst;
}

GroupedDataset FinitePopulation::sample(std::size_t m, std::uint64_t seed) const {
  if (m == 0) throw Error("population sample: m must be positive");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> draw(probs.begin(), probs.end());
  GroupedDataset d;
  d.g = 1;
  for (std::size_t i = 0; i < m; ++i) {
    LabeledExample e = atoms[draw(rng)];
    e.groups = {0};
    d.examples.push_back(std::move(e));
  }
  set_k(d);
  return d;
}

FinitePopulation line_population() {
  constexpr int kAtoms = 24;
  FinitePopulation pop;
  double total = 0.0;
  for (int a = 0; a < kAtoms; ++a) {
    const double x = static_cast<double>(a);
    Label y = a >= kAtoms / 2 ? Label::Positive : Label::Negative;
    if (a == 3 || a == 15 || a == 20) y = flip(y);
    pop.atoms.push_back({Point{x}, y, {Point{x - 1}, Point{x}, Point{x + 1}}, {0}});
    const double w = 1.0 + static_cast<double>((a * 7) % 5);
    pop.probs.push_back(w);
    total += w;
  }
  for (double& p : pop.probs) p /= total;
  return pop;
}

}  // namespace robustboost::datagen
