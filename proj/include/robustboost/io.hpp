#pragma once

// JSON forms of datasets, hypotheses, summaries and reduction maps. Output
// uses a fixed key order so serialize -> parse -> serialize is byte-stable.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robustboost/datagen.hpp"
#include "robustboost/groups.hpp"
#include "robustboost/hypothesis.hpp"
#include "robustboost/metrics.hpp"
#include "robustboost/perturbation.hpp"

namespace robustboost::io {

using Json = nlohmann::ordered_json;

Json point_to_json(const Point& p);
Point point_from_json(const Json& j);

Json hypothesis_to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const Json& j);

/// {"hypotheses": [...]}
Json class_to_json(std::span<const Hypothesis> hs);
std::vector<Hypothesis> class_from_json(const Json& j);

/// {"k", "g", "examples": [{"x", "y", "u", "groups"}]}
Json dataset_to_json(const GroupedDataset& d);
/// Parses without validating; callers decide what to do with violations.
GroupedDataset dataset_from_json(const Json& j);

Json metadata_to_json(const datagen::Metadata& meta);

/// {"overall", "per_group", "mistakes"}
Json summary_to_json(const RobustLossSummary& s);

/// {"copies": [{"example", "group"}], "dataset": {...}}
Json reduction_to_json(const DisjointReduction& r);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace robustboost::io
