#include "elicit/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "elicit/error.hpp"

namespace elicit {

namespace {

// Candidates within this margin are treated as equal so that the ordering
// tie rule, not rounding noise, decides.
constexpr double kQualityTolerance = 1e-12;

std::size_t total(const ClassCounts& c) { return c[0] + c[1]; }

ClassCounts count_rows(const Dataset& d, std::span<const std::size_t> rows) {
  ClassCounts c{};
  for (std::size_t i : rows) ++c[d.label(i)];
  return c;
}

}  // namespace

const char* to_string(Criterion c) { return c == Criterion::Gini ? "gini" : "entropy"; }

Criterion parse_criterion(const std::string& text) {
  if (text == "gini") return Criterion::Gini;
  if (text == "entropy") return Criterion::Entropy;
  throw ValidationError("unknown split criterion '" + text + "'");
}

double gini(const ClassCounts& counts) {
  const auto n = total(counts);
  if (n == 0) throw ValidationError("gini: empty counts");
  const double p0 = static_cast<double>(counts[0]) / static_cast<double>(n);
  const double p1 = static_cast<double>(counts[1]) / static_cast<double>(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

double entropy(const ClassCounts& counts) {
  const auto n = total(counts);
  if (n == 0) throw ValidationError("entropy: empty counts");
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

double impurity(const ClassCounts& counts, Criterion criterion) {
  return criterion == Criterion::Gini ? gini(counts) : entropy(counts);
}

double weighted_impurity(const ClassCounts& left, const ClassCounts& right, Criterion criterion) {
  const double nl = static_cast<double>(total(left));
  const double nr = static_cast<double>(total(right));
  const double n = nl + nr;
  return (nl / n) * impurity(left, criterion) + (nr / n) * impurity(right, criterion);
}

double split_quality(const Dataset& d, std::span<const std::size_t> rows, std::size_t feature,
                     double threshold, Criterion criterion) {
  if (feature >= d.cols()) throw ValidationError("split_quality: feature out of range");
  ClassCounts left{}, right{};
  for (std::size_t i : rows) {
    if (d.code(i, feature) <= threshold)
      ++left[d.label(i)];
    else
      ++right[d.label(i)];
  }
  if (total(left) == 0 || total(right) == 0)
    throw ValidationError("split_quality: candidate leaves an empty child");
  return weighted_impurity(left, right, criterion);
}

std::optional<SplitCandidate> best_split(const Dataset& d, std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features,
                                         Criterion criterion, std::size_t min_leaf) {
  if (rows.size() < 2) return std::nullopt;
  std::vector<std::size_t> ordered(features.begin(), features.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  const ClassCounts parent = count_rows(d, rows);
  std::optional<SplitCandidate> best;
  std::vector<ClassCounts> histogram;
  for (std::size_t f : ordered) {
    histogram.assign(d.feature(f).levels.size(), ClassCounts{});
    for (std::size_t i : rows) ++histogram[static_cast<std::size_t>(d.code(i, f))][d.label(i)];

    ClassCounts left{};
    std::optional<std::size_t> previous;
    for (std::size_t code = 0; code < histogram.size(); ++code) {
      if (total(histogram[code]) == 0) continue;
      if (previous) {
        const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
        if (total(left) >= min_leaf && total(right) >= min_leaf) {
          const double q = weighted_impurity(left, right, criterion);
          if (!best || q < best->quality - kQualityTolerance) {
            best = SplitCandidate{f, 0.5 * static_cast<double>(*previous + code), total(left),
                                  total(right), q};
          }
        }
      }
      left[0] += histogram[code][0];
      left[1] += histogram[code][1];
      previous = code;
    }
  }
  return best;
}

const TreeNode& DecisionTree::leaf_for(std::span<const Code> row) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) {
    const auto& s = *node->split;
    node = &nodes[static_cast<std::size_t>(row[s.feature_index] <= s.threshold ? node->left
                                                                              : node->right)];
  }
  return *node;
}

std::size_t DecisionTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t k) -> std::size_t {
    const auto& n = nodes[k];
    if (n.is_leaf()) return 0;
    return 1 + std::max(walk(static_cast<std::size_t>(n.left)),
                        walk(static_cast<std::size_t>(n.right)));
  };
  return nodes.empty() ? 0 : walk(0);
}

namespace {

class TreeGrower {
 public:
  TreeGrower(const Dataset& d, const TreeParams& params, Rng& rng)
      : d_(d), params_(params), rng_(rng), all_features_(d.cols()) {
    std::iota(all_features_.begin(), all_features_.end(), 0);
    mtry_ = params.mtry == 0 ? d.cols() : std::min(params.mtry, d.cols());
  }

  DecisionTree grow(std::vector<std::size_t> rows) {
    DecisionTree tree;
    grow_node(tree, std::move(rows), 0);
    return tree;
  }

 private:
  std::vector<std::size_t> draw_features() {
    auto pool = all_features_;
    for (std::size_t k = 0; k < mtry_; ++k) {
      const auto pick = k + rng_.uniform_index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
    }
    pool.resize(mtry_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  std::int32_t grow_node(DecisionTree& tree, std::vector<std::size_t> rows, std::size_t depth) {
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const ClassCounts counts = count_rows(d_, rows);
    tree.nodes.back().counts = counts;

    const bool pure = counts[0] == 0 || counts[1] == 0;
    if (pure || depth >= params_.max_depth || rows.size() < 2 * params_.min_samples_leaf)
      return index;

    const auto features = draw_features();
    const auto split = best_split(d_, rows, features, params_.criterion, params_.min_samples_leaf);
    if (!split) return index;

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(split->n_left);
    right_rows.reserve(split->n_right);
    for (std::size_t i : rows) {
      (d_.code(i, split->feature_index) <= split->threshold ? left_rows : right_rows).push_back(i);
    }
    const ClassCounts lc = count_rows(d_, left_rows);
    const ClassCounts rc = count_rows(d_, right_rows);
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[static_cast<std::size_t>(index)].split = split;
    tree.nodes[static_cast<std::size_t>(index)].split_entropy =
        weighted_impurity(lc, rc, Criterion::Entropy);
    const auto left = grow_node(tree, std::move(left_rows), depth + 1);
    const auto right = grow_node(tree, std::move(right_rows), depth + 1);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    tree.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
  }

  const Dataset& d_;
  const TreeParams& params_;
  Rng& rng_;
  std::vector<std::size_t> all_features_;
  std::size_t mtry_ = 1;
};

}  // namespace

DecisionTree grow_tree(const Dataset& d, std::span<const std::size_t> rows,
                       const TreeParams& params, Rng& rng) {
  if (rows.empty()) throw ValidationError("grow_tree: no rows");
  if (params.min_samples_leaf < 1) throw ValidationError("grow_tree: min_samples_leaf must be >= 1");
  TreeGrower grower(d, params, rng);
  return grower.grow(std::vector<std::size_t>(rows.begin(), rows.end()));
}

RandomForestModel train_forest(const Dataset& d, const ForestParams& params) {
  if (params.n_trees < 1) throw ValidationError("train_forest: n_trees must be >= 1");
  if (d.count_label(0) == 0 || d.count_label(1) == 0)
    throw ValidationError("single-class dataset: both classes required for training");

  const std::size_t p = d.cols();
  std::size_t mtry = params.mtry;
  if (mtry == 0)
    mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
  if (mtry > p) throw ValidationError("train_forest: mtry exceeds feature count");

  RandomForestModel model;
  model.mtry = mtry;
  model.criterion = params.criterion;
  model.seed = params.seed;
  model.schema = d.schema();
  model.target_name = d.target_name();
  model.target_labels = d.target_labels();
  model.trees.resize(params.n_trees);

  const TreeParams tree_params{params.max_depth, params.min_samples_leaf, mtry, params.criterion};
  const std::size_t n = d.rows();
  auto train_one = [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t));
    std::vector<std::size_t> sample(n);
    for (auto& i : sample) i = rng.uniform_index(n);
    model.trees[t] = grow_tree(d, sample, tree_params, rng);
  };

  const std::size_t workers = std::clamp<std::size_t>(params.threads, 1, params.n_trees);
  if (workers == 1) {
    for (std::size_t t = 0; t < params.n_trees; ++t) train_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < params.n_trees; t = next++) train_one(t);
      });
    }
  }
  return model;
}

double predict_proba(const RandomForestModel& m, std::span<const Code> row) {
  double sum = 0.0;
  for (const auto& tree : m.trees) {
    const auto& leaf = tree.leaf_for(row);
    sum += static_cast<double>(leaf.counts[1]) / static_cast<double>(total(leaf.counts));
  }
  return sum / static_cast<double>(m.trees.size());
}

int predict(const RandomForestModel& m, std::span<const Code> row, double threshold) {
  return predict_proba(m, row) >= threshold ? 1 : 0;
}

std::vector<double> predict_proba(const RandomForestModel& m, const Dataset& d) {
  std::vector<double> out(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) out[i] = predict_proba(m, d.row(i));
  return out;
}

std::optional<double> mean_split_entropy(const RandomForestModel& m) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& tree : m.trees)
    for (const auto& node : tree.nodes)
      if (!node.is_leaf()) {
        sum += node.split_entropy;
        ++count;
      }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace elicit
