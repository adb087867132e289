#include "robustboost/io.hpp"

#include <fstream>
#include <sstream>

namespace robustboost::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(std::string("missing JSON field \"") + key + "\"");
  }
  return j.at(key);
}

std::size_t as_index(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw Error(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

Json point_to_json(const Point& p) {
  Json arr = Json::array();
  for (double c : p.coords()) arr.push_back(c);
  return arr;
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) throw Error("point must be a JSON array of numbers");
  std::vector<double> coords;
  coords.reserve(j.size());
  for (const auto& c : j) {
    if (!c.is_number()) throw Error("point coordinates must be numbers");
    coords.push_back(c.get<double>());
  }
  return Point(std::move(coords));
}

Json hypothesis_to_json(const Hypothesis& h) {
  if (const auto* t = std::get_if<ThresholdHypothesis>(&h)) {
    Json j;
    j["kind"] = "threshold";
    j["tau"] = t->tau;
    j["orientation"] =
        t->orientation == Orientation::AbovePositive ? "above" : "below";
    return j;
  }
  const auto& table = std::get<TableHypothesis>(h);
  Json j;
  j["kind"] = "table";
  Json universe = Json::array();
  for (const auto& p : table.universe()) universe.push_back(point_to_json(p));
  Json outputs = Json::array();
  for (Label y : table.outputs()) outputs.push_back(to_int(y));
  j["universe"] = std::move(universe);
  j["outputs"] = std::move(outputs);
  return j;
}

Hypothesis hypothesis_from_json(const Json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "threshold") {
    const auto o = field(j, "orientation").get<std::string>();
    if (o != "above" && o != "below") {
      throw Error("threshold orientation must be \"above\" or \"below\"");
    }
    return ThresholdHypothesis(field(j, "tau").get<double>(),
                               o == "above" ? Orientation::AbovePositive
                                            : Orientation::BelowPositive);
  }
  if (kind == "table") {
    std::vector<Point> universe;
    for (const auto& p : field(j, "universe")) {
      universe.push_back(point_from_json(p));
    }
    std::vector<Label> outputs;
    for (const auto& y : field(j, "outputs")) {
      outputs.push_back(label_from_int(y.get<long long>()));
    }
    return TableHypothesis(std::move(universe), std::move(outputs));
  }
  throw Error("unknown hypothesis kind \"" + kind + "\"");
}

Json class_to_json(std::span<const Hypothesis> hs) {
  Json arr = Json::array();
  for (const auto& h : hs) arr.push_back(hypothesis_to_json(h));
  Json j;
  j["hypotheses"] = std::move(arr);
  return j;
}

std::vector<Hypothesis> class_from_json(const Json& j) {
  std::vector<Hypothesis> out;
  for (const auto& h : field(j, "hypotheses")) {
    out.push_back(hypothesis_from_json(h));
  }
  return out;
}

Json dataset_to_json(const GroupedDataset& d) {
  Json j;
  j["k"] = d.k;
  j["g"] = d.g;
  Json examples = Json::array();
  for (const auto& e : d.examples) {
    Json ej;
    ej["x"] = point_to_json(e.x);
    ej["y"] = to_int(e.y);
    Json u = Json::array();
    for (const auto& z : e.u) u.push_back(point_to_json(z));
    ej["u"] = std::move(u);
    ej["groups"] = e.groups;
    examples.push_back(std::move(ej));
  }
  j["examples"] = std::move(examples);
  return j;
}

GroupedDataset dataset_from_json(const Json& j) {
  GroupedDataset d;
  d.k = as_index(field(j, "k"), "k");
  d.g = as_index(field(j, "g"), "g");
  for (const auto& ej : field(j, "examples")) {
    LabeledExample e;
    e.x = point_from_json(field(ej, "x"));
    const auto& y = field(ej, "y");
    if (!y.is_number_integer()) throw Error("label must be an integer");
    e.y = label_from_int(y.get<long long>());
    for (const auto& z : field(ej, "u")) e.u.push_back(point_from_json(z));
    for (const auto& gj : field(ej, "groups")) {
      e.groups.push_back(as_index(gj, "group index"));
    }
    d.examples.push_back(std::move(e));
  }
  return d;
}

Json metadata_to_json(const datagen::Metadata& meta) {
  Json j;
  j["generator"] = meta.generator;
  Json params = Json::object();
  for (const auto& [key, value] : meta.params) params[key] = value;
  j["params"] = std::move(params);
  j["seed"] = meta.seed;
  return j;
}

Json summary_to_json(const RobustLossSummary& s) {
  Json j;
  j["overall"] = s.overall;
  j["per_group"] = s.per_group;
  Json mistakes = Json::array();
  for (bool b : s.per_example_mistake) mistakes.push_back(b);
  j["mistakes"] = std::move(mistakes);
  return j;
}

Json reduction_to_json(const DisjointReduction& r) {
  Json copies = Json::array();
  for (const auto& o : r.map.origin) {
    Json c;
    c["example"] = o.example;
    c["group"] = o.group;
    copies.push_back(std::move(c));
  }
  Json j;
  j["copies"] = std::move(copies);
  j["dataset"] = dataset_to_json(r.dataset);
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace robustboost::io
