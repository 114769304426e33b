#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "elicit/dataset.hpp"
#include "elicit/random.hpp"

namespace elicit {

enum class Criterion { Gini, Entropy };

const char* to_string(Criterion c);
Criterion parse_criterion(const std::string& text);

// (n0, n1) class counts of a node.
using ClassCounts = std::array<std::size_t, 2>;

double gini(const ClassCounts& counts);
// In bits.
double entropy(const ClassCounts& counts);
double impurity(const ClassCounts& counts, Criterion criterion);

// Weighted child impurity: (n_l/n) H(left) + (n_r/n) H(right).
double weighted_impurity(const ClassCounts& left, const ClassCounts& right, Criterion criterion);

struct SplitCandidate {
  std::size_t feature_index = 0;
  // Rows with code <= threshold go left.
  double threshold = 0.0;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  double quality = 0.0;
};

// Quality of splitting `rows` of `d` on (feature, threshold). Throws
// ValidationError when either child would be empty.
double split_quality(const Dataset& d, std::span<const std::size_t> rows, std::size_t feature,
                     double threshold, Criterion criterion);

// Exhaustive search over midpoints between consecutive distinct codes of every
// feature in `features`. Ties go to the lower feature index, then the lower
// threshold. Candidates leaving fewer than `min_leaf` rows in a child are
// skipped. Returns nullopt when nothing separates the rows.
std::optional<SplitCandidate> best_split(const Dataset& d, std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features,
                                         Criterion criterion, std::size_t min_leaf = 1);

// Flat tree storage; node 0 is the root. Leaves have no split.
struct TreeNode {
  ClassCounts counts{};
  std::optional<SplitCandidate> split;
  // Entropy-based weighted child impurity of the chosen split (bits),
  // recorded whatever criterion trained the tree.
  double split_entropy = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;

  bool is_leaf() const { return !split.has_value(); }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const Code> row) const;
  std::size_t depth() const;
};

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

struct TreeParams {
  std::size_t max_depth = kUnlimitedDepth;
  std::size_t min_samples_leaf = 1;
  // Features drawn per node; 0 means all.
  std::size_t mtry = 0;
  Criterion criterion = Criterion::Gini;
};

DecisionTree grow_tree(const Dataset& d, std::span<const std::size_t> rows,
                       const TreeParams& params, Rng& rng);

struct ForestParams {
  std::size_t n_trees = 100;
  // 0 selects floor(sqrt(p)).
  std::size_t mtry = 0;
  std::size_t max_depth = kUnlimitedDepth;
  std::size_t min_samples_leaf = 1;
  Criterion criterion = Criterion::Gini;
  std::uint64_t seed = 0;
  // Execution only; never changes the trained model.
  std::size_t threads = 1;
};

struct RandomForestModel {
  std::vector<DecisionTree> trees;
  std::size_t mtry = 1;
  Criterion criterion = Criterion::Gini;
  std::uint64_t seed = 0;
  // Encoding the model was trained against.
  std::vector<FeatureSchema> schema;
  std::string target_name;
  std::vector<std::string> target_labels;

  std::size_t n_trees() const { return trees.size(); }
};

RandomForestModel train_forest(const Dataset& d, const ForestParams& params);

double predict_proba(const RandomForestModel& m, std::span<const Code> row);
int predict(const RandomForestModel& m, std::span<const Code> row, double threshold = 0.5);
std::vector<double> predict_proba(const RandomForestModel& m, const Dataset& d);

// Mean of split_entropy over every internal node of every tree; nullopt for a
// forest made only of leaves.
std::optional<double> mean_split_entropy(const RandomForestModel& m);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const RandomForestModel& m);
RandomForestModel model_from_json(const nlohmann::json& j);

// Re-encodes `d` (parsed from a CSV independently) to the model's level codes.
// Unknown features or levels raise ValidationError naming the field.
Dataset align_to_model(const Dataset& d, const RandomForestModel& m);

// Encodes one (feature name, level string) record to the model's codes.
// Fields the model does not use (the target, features dropped before
// training) are ignored; missing features and unknown levels raise
// ValidationError naming the field.
std::vector<Code> encode_record(const std::vector<std::pair<std::string, std::string>>& fields,
                                const RandomForestModel& m);

}  // namespace elicit
