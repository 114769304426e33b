#include <algorithm>
#include <map>

#include "elicit/error.hpp"
#include "elicit/forest.hpp"

namespace elicit {

using nlohmann::json;

json to_json(const RandomForestModel& m) {
  json schema = json::array();
  for (const auto& f : m.schema)
    schema.push_back({{"name", f.name}, {"role", to_string(f.role)}, {"levels", f.levels}});

  json trees = json::array();
  for (const auto& tree : m.trees) {
    json nodes = json::array();
    for (const auto& node : tree.nodes) {
      json jn = {{"counts", {node.counts[0], node.counts[1]}}};
      if (node.split) {
        jn["feature"] = node.split->feature_index;
        jn["threshold"] = node.split->threshold;
        jn["n_left"] = node.split->n_left;
        jn["n_right"] = node.split->n_right;
        jn["quality"] = node.split->quality;
        jn["split_entropy"] = node.split_entropy;
        jn["left"] = node.left;
        jn["right"] = node.right;
      }
      nodes.push_back(std::move(jn));
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }

  return {{"format_version", kModelFormatVersion},
          {"target", m.target_name},
          {"target_labels", m.target_labels},
          {"criterion", to_string(m.criterion)},
          {"mtry", m.mtry},
          {"seed", m.seed},
          {"schema", std::move(schema)},
          {"trees", std::move(trees)}};
}

RandomForestModel model_from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion)
      throw ValidationError("unsupported model format_version " + j.at("format_version").dump());
    RandomForestModel m;
    m.target_name = j.at("target").get<std::string>();
    m.target_labels = j.at("target_labels").get<std::vector<std::string>>();
    m.criterion = parse_criterion(j.at("criterion").get<std::string>());
    m.mtry = j.at("mtry").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& f : j.at("schema")) {
      m.schema.push_back({f.at("name").get<std::string>(),
                          parse_role(f.at("role").get<std::string>()),
                          f.at("levels").get<std::vector<std::string>>()});
    }
    for (const auto& jt : j.at("trees")) {
      DecisionTree tree;
      const auto& nodes = jt.at("nodes");
      for (const auto& jn : nodes) {
        TreeNode node;
        node.counts = {jn.at("counts").at(0).get<std::size_t>(),
                       jn.at("counts").at(1).get<std::size_t>()};
        if (node.counts[0] + node.counts[1] == 0) throw ValidationError("model node with no rows");
        if (jn.contains("feature")) {
          SplitCandidate s;
          s.feature_index = jn.at("feature").get<std::size_t>();
          s.threshold = jn.at("threshold").get<double>();
          s.n_left = jn.at("n_left").get<std::size_t>();
          s.n_right = jn.at("n_right").get<std::size_t>();
          s.quality = jn.at("quality").get<double>();
          if (s.feature_index >= m.schema.size())
            throw ValidationError("model split references unknown feature");
          node.split = s;
          node.split_entropy = jn.at("split_entropy").get<double>();
          node.left = jn.at("left").get<std::int32_t>();
          node.right = jn.at("right").get<std::int32_t>();
          const auto limit = static_cast<std::int32_t>(nodes.size());
          if (node.left <= 0 || node.right <= 0 || node.left >= limit || node.right >= limit)
            throw ValidationError("model node has out-of-range children");
        }
        tree.nodes.push_back(node);
      }
      if (tree.nodes.empty()) throw ValidationError("model tree has no nodes");
      m.trees.push_back(std::move(tree));
    }
    if (m.trees.empty()) throw ValidationError("model has no trees");
    if (m.target_labels.size() != 2) throw ValidationError("model needs two target labels");
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
}

namespace {

Code lookup_level(const FeatureSchema& f, const std::string& value) {
  const auto it = std::find(f.levels.begin(), f.levels.end(), value);
  if (it == f.levels.end())
    throw ValidationError("unknown level '" + value + "' for feature '" + f.name + "'");
  return static_cast<Code>(it - f.levels.begin());
}

}  // namespace

Dataset align_to_model(const Dataset& d, const RandomForestModel& m) {
  if (d.target_name() != m.target_name)
    throw ValidationError("dataset target '" + d.target_name() + "' does not match model target '" +
                          m.target_name + "'");
  if (d.target_labels()[1] != m.target_labels[1])
    throw ValidationError("positive label '" + d.target_labels()[1] +
                          "' does not match model positive label '" + m.target_labels[1] + "'");
  std::map<std::string, std::size_t> position;
  for (std::size_t j = 0; j < d.cols(); ++j) position[d.feature(j).name] = j;

  std::vector<Code> codes(d.rows() * m.schema.size());
  for (std::size_t k = 0; k < m.schema.size(); ++k) {
    const auto& f = m.schema[k];
    const auto it = position.find(f.name);
    if (it == position.end()) throw ValidationError("missing feature '" + f.name + "'");
    const auto& source = d.feature(it->second);
    std::vector<Code> remap(source.levels.size());
    for (std::size_t l = 0; l < source.levels.size(); ++l)
      remap[l] = lookup_level(f, source.levels[l]);
    for (std::size_t i = 0; i < d.rows(); ++i)
      codes[i * m.schema.size() + k] = remap[static_cast<std::size_t>(d.code(i, it->second))];
  }
  std::vector<Label> labels(d.labels().begin(), d.labels().end());
  std::vector<std::uint8_t> provenance(d.provenance().begin(), d.provenance().end());
  return Dataset(m.schema, m.target_name, m.target_labels, std::move(codes), std::move(labels),
                 std::move(provenance));
}

std::vector<Code> encode_record(const std::vector<std::pair<std::string, std::string>>& fields,
                                const RandomForestModel& m) {
  std::map<std::string, std::string> values;
  for (const auto& [name, value] : fields) {
    if (name == m.target_name) continue;
    values[name] = value;
  }
  std::vector<Code> row;
  row.reserve(m.schema.size());
  for (const auto& f : m.schema) {
    const auto it = values.find(f.name);
    if (it == values.end()) throw ValidationError("missing feature '" + f.name + "'");
    row.push_back(lookup_level(f, it->second));
  }
  return row;
}

}  // namespace elicit
