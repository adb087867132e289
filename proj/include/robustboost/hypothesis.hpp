#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace robustboost {

/// Base for every error the library raises on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary label, serialized as -1 / +1.
enum class Label : std::int8_t { Negative = -1, Positive = 1 };

inline int to_int(Label y) { return static_cast<int>(y); }
Label label_from_int(long long v);
inline Label flip(Label y) {
  return y == Label::Positive ? Label::Negative : Label::Positive;
}

/// A point of the instance space. Coordinates are always finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords)
      : Point(std::vector<double>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  std::vector<double> coords_;
};

enum class Orientation : std::uint8_t { AbovePositive, BelowPositive };

/// Threshold on the line. Under AbovePositive, z >= tau is labelled +1.
struct ThresholdHypothesis {
  double tau = 0.0;
  Orientation orientation = Orientation::AbovePositive;

  ThresholdHypothesis() = default;
  ThresholdHypothesis(double t, Orientation o);

  Label predict(const Point& z) const;
  friend bool operator==(const ThresholdHypothesis&,
                         const ThresholdHypothesis&) = default;
};

/// Finite lookup table. Querying a point outside the universe throws.
/// Copies share the immutable table.
class TableHypothesis {
 public:
  TableHypothesis(std::vector<Point> universe, std::vector<Label> outputs);

  Label predict(const Point& z) const;
  /// Position of z in the universe, or npos.
  std::size_t find(const Point& z) const;

  /// True iff both handles share one table (cheap identity test).
  bool shares_table_with(const TableHypothesis& other) const {
    return data_ == other.data_;
  }

  const std::vector<Point>& universe() const { return data_->universe; }
  const std::vector<Label>& outputs() const { return data_->outputs; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const TableHypothesis& a, const TableHypothesis& b) {
    return a.data_ == b.data_ || (a.universe() == b.universe() &&
                                  a.outputs() == b.outputs());
  }

 private:
  struct Data {
    std::vector<Point> universe;
    std::vector<Label> outputs;
    std::map<Point, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

using Hypothesis = std::variant<ThresholdHypothesis, TableHypothesis>;

Label predict(const Hypothesis& h, const Point& z);

struct WeightedPoint {
  Point z;
  Label y = Label::Positive;
  double weight = 0.0;
};

/// Sum of weight * 1[h(z) != y] over the batch.
double weighted_loss(const Hypothesis& h, std::span<const WeightedPoint> batch);

/// Two losses are treated as tied when they differ by no more than this
/// fraction of the batch's total weight. Keeps argmins stable under
/// reassociation of the sums (copies vs. aggregated weights, rescaling).
inline constexpr double kTieTolerance = 1e-12;

/// Exact weighted ERM over all thresholds and both orientations.
/// Candidates are the midpoints of consecutive distinct coordinates plus one
/// value below the minimum and one above the maximum. Ties go to the smaller
/// threshold, then to AbovePositive.
ThresholdHypothesis erm_threshold(std::span<const WeightedPoint> batch);

/// Index of the class member with the smallest weighted loss; ties go to the
/// smallest index.
std::size_t erm_table(std::span<const WeightedPoint> batch,
                      std::span<const TableHypothesis> hypotheses);

/// Exact weighted ERM oracle over some hypothesis class.
class ErmOracle {
 public:
  virtual ~ErmOracle() = default;
  virtual Hypothesis fit(std::span<const WeightedPoint> batch) const = 0;
};

class ThresholdOracle final : public ErmOracle {
 public:
  Hypothesis fit(std::span<const WeightedPoint> batch) const override;
};

/// ERM over a finite list of tables. Universes are merged once at
/// construction so each call costs one lookup per batch point plus a
/// (parallel) scan over the class.
class TableOracle final : public ErmOracle {
 public:
  explicit TableOracle(std::vector<TableHypothesis> hypotheses);

  Hypothesis fit(std::span<const WeightedPoint> batch) const override;
  std::size_t fit_index(std::span<const WeightedPoint> batch) const;

  const std::vector<TableHypothesis>& hypotheses() const { return hypotheses_; }

 private:
  std::vector<TableHypothesis> hypotheses_;
  std::map<Point, std::size_t> merged_;
  // hypotheses_.size() x merged_.size(); 0 marks "outside this universe".
  std::vector<std::int8_t> outputs_;
};

/// ERM by scanning an arbitrary finite class with predict().
class FiniteClassOracle final : public ErmOracle {
 public:
  explicit FiniteClassOracle(std::vector<Hypothesis> hypotheses);

  Hypothesis fit(std::span<const WeightedPoint> batch) const override;
  std::size_t fit_index(std::span<const WeightedPoint> batch) const;

 private:
  std::vector<Hypothesis> hypotheses_;
};

}  // namespace robustboost
