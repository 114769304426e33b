#include "elicit/recommender.hpp"

#include <algorithm>
#include <cmath>

#include "elicit/error.hpp"
#include "elicit/random.hpp"

namespace elicit {

using nlohmann::json;

void validate(const PipelineConfig& cfg) {
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
    throw ValidationError("test_fraction must lie strictly between 0 and 1");
  if (cfg.smote.k_neighbors < 1) throw ValidationError("smote.k_neighbors must be >= 1");
  if (!(cfg.smote.target_ratio > 0.0 && cfg.smote.target_ratio <= 1.0))
    throw ValidationError("smote.target_ratio must lie in (0, 1]");
  if (cfg.forest.n_trees < 1) throw ValidationError("forest.n_trees must be >= 1");
  if (cfg.forest.min_samples_leaf < 1) throw ValidationError("forest.min_samples_leaf must be >= 1");
  if (cfg.filter.methods.empty()) throw ValidationError("filter.methods must not be empty");
  if (cfg.filter.top_k < 1) throw ValidationError("filter.top_k must be >= 1");
  if (cfg.recommendation_threshold && !(*cfg.recommendation_threshold >= 0.0))
    throw ValidationError("recommendation_threshold must be >= 0");
}

namespace {

ArmReport evaluate_arm(ArmOutcome outcome) {
  std::vector<Label> predicted(outcome.test_scores.size());
  for (std::size_t i = 0; i < predicted.size(); ++i)
    predicted[i] = outcome.test_scores[i] >= 0.5 ? 1 : 0;

  ArmMetrics m;
  m.confusion = confusion(outcome.test.labels(), predicted);
  m.accuracy = accuracy(m.confusion);
  m.precision = precision(m.confusion);
  m.recall = recall(m.confusion);
  m.auc = outcome.roc.auc;
  m.auch = outcome.roc.auch;
  m.mean_split_entropy = mean_split_entropy(outcome.model);
  m.train_rows = outcome.train.rows();
  m.train_positive = outcome.train.count_label(1);
  m.train_synthetic = outcome.train.count_synthetic();
  m.test_rows = outcome.test.rows();
  m.test_positive = outcome.test.count_label(1);
  m.test_synthetic = outcome.test.count_synthetic();
  return {m, std::move(outcome.roc)};
}

}  // namespace

TechniqueReport run_technique(const Dataset& d, const PipelineConfig& cfg) {
  validate(cfg);
  const Dataset data = drop_constant_features(d);

  ArmSpec spec;
  spec.mode = cfg.mode;
  spec.test_fraction = cfg.test_fraction;
  spec.stratified_split = cfg.stratified_split;
  spec.split_seed = derive_seed(cfg.seed, 1);
  spec.forest = cfg.forest;
  spec.forest.seed = derive_seed(cfg.seed, 2);
  spec.smote = cfg.smote;
  spec.smote.seed = derive_seed(cfg.seed, 3);

  TechniqueReport report;
  report.technique = cfg.target_name.empty() ? data.target_name() : cfg.target_name;
  report.summary = summarize(data);

  spec.balance = false;
  report.imbalanced = evaluate_arm(run_arm(data, spec));
  spec.balance = cfg.smote_enabled;
  report.balanced = evaluate_arm(run_arm(data, spec));

  report.accuracy_improvement = relative_improvement(report.imbalanced.metrics.accuracy,
                                                     report.balanced.metrics.accuracy);
  report.auc_improvement =
      relative_improvement(report.imbalanced.metrics.auc, report.balanced.metrics.auc);
  report.hull_verdict = dominates(report.balanced.roc.hull, report.imbalanced.roc.hull);
  return report;
}

void attach_t_tests(EvaluationReport& report) {
  auto paired = [&](auto member) -> std::optional<TTestResult> {
    std::vector<double> balanced, imbalanced;
    for (const auto& t : report.techniques) {
      const auto b = t.balanced.metrics.*member;
      const auto i = t.imbalanced.metrics.*member;
      if (!b || !i) return std::nullopt;
      balanced.push_back(*b);
      imbalanced.push_back(*i);
    }
    if (balanced.size() < 2) return std::nullopt;
    return paired_t_test(balanced, imbalanced);
  };
  report.precision_test = paired(&ArmMetrics::precision);
  report.recall_test = paired(&ArmMetrics::recall);
}

EvaluationReport run_pipeline(const Dataset& d, const PipelineConfig& cfg) {
  EvaluationReport report;
  report.mode = cfg.mode;
  report.techniques.push_back(run_technique(d, cfg));
  attach_t_tests(report);
  return report;
}

EvaluationReport run_pipeline(const std::vector<Dataset>& datasets,
                              const std::vector<PipelineConfig>& configs) {
  if (datasets.empty() || datasets.size() != configs.size())
    throw ValidationError("run_pipeline: need one config per dataset");
  EvaluationReport report;
  report.mode = configs.front().mode;
  for (std::size_t k = 0; k < datasets.size(); ++k) {
    if (configs[k].mode != report.mode)
      throw ValidationError("run_pipeline: all datasets must use the same mode");
    report.techniques.push_back(run_technique(datasets[k], configs[k]));
  }
  attach_t_tests(report);
  return report;
}

BalancingComparison compare_balancing(const TechniqueReport& report) {
  BalancingComparison c;
  c.verdict = report.hull_verdict;
  c.auc_delta = report.balanced.metrics.auc - report.imbalanced.metrics.auc;
  c.accuracy_delta = report.balanced.metrics.accuracy - report.imbalanced.metrics.accuracy;
  if (report.balanced.metrics.mean_split_entropy && report.imbalanced.metrics.mean_split_entropy)
    c.entropy_delta =
        *report.balanced.metrics.mean_split_entropy - *report.imbalanced.metrics.mean_split_entropy;
  return c;
}

BalancingComparison compare_balancing(const Dataset& d, const PipelineConfig& cfg) {
  return compare_balancing(run_technique(d, cfg));
}

RecommendationSet form_recommendations(const FeatureScoreTable& scores,
                                       const Prediction& prediction, double threshold) {
  if (!(threshold >= 0.0)) throw ValidationError("recommendation threshold must be >= 0");
  RecommendationSet set;
  set.predicted = prediction;
  set.threshold = threshold;
  for (const auto& e : scores.entries) {
    if (!(e.score > threshold)) continue;
    (e.role == FeatureRole::Technique ? set.collaborative : set.content_based).push_back(e);
  }
  sort_scores(set.collaborative);
  sort_scores(set.content_based);
  return set;
}

namespace {

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json arm_json(const ArmReport& arm) {
  const auto& m = arm.metrics;
  return {{"accuracy", m.accuracy},
          {"precision", optional_number(m.precision)},
          {"recall", optional_number(m.recall)},
          {"auc", m.auc},
          {"auch", m.auch},
          {"mean_split_entropy", optional_number(m.mean_split_entropy)},
          {"confusion",
           {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn},
            {"fn", m.confusion.fn}}},
          {"train", {{"rows", m.train_rows}, {"positive", m.train_positive},
                     {"synthetic", m.train_synthetic}}},
          {"test", {{"rows", m.test_rows}, {"positive", m.test_positive},
                    {"synthetic", m.test_synthetic}}},
          {"roc_points", arm.roc.points.size()},
          {"hull_points", arm.roc.hull.size()}};
}

json t_test_json(const std::optional<TTestResult>& t) {
  if (!t) return nullptr;
  return {{"statistic", finite_or_string(t->statistic)}, {"df", t->df}, {"p_value", t->p_value}};
}

const char* verdict_name(Dominance d) {
  switch (d) {
    case Dominance::A:
      return "balanced";
    case Dominance::B:
      return "imbalanced";
    default:
      return "neither";
  }
}

json score_list(const std::vector<FeatureScore>& list) {
  json out = json::array();
  for (const auto& e : list)
    out.push_back({{"feature", e.feature}, {"role", to_string(e.role)},
                   {"score", finite_or_string(e.score)}});
  return out;
}

}  // namespace

json to_json(const EvaluationReport& report) {
  json techniques = json::array();
  for (const auto& t : report.techniques) {
    techniques.push_back(
        {{"technique", t.technique},
         {"dataset",
          {{"n_majority", t.summary.n_majority},
           {"n_minority", t.summary.n_minority},
           {"imbalance_ratio", t.summary.imbalance_ratio},
           {"task", DatasetSummary::task}}},
         {"imbalanced", arm_json(t.imbalanced)},
         {"balanced", arm_json(t.balanced)},
         {"improvement_percent",
          {{"kind", "relative"},
           {"accuracy", optional_number(t.accuracy_improvement)},
           {"auc", optional_number(t.auc_improvement)}}},
         {"hull_dominance", verdict_name(t.hull_verdict)}});
  }
  return {{"mode", to_string(report.mode)},
          {"techniques", std::move(techniques)},
          {"t_tests",
           {{"precision", t_test_json(report.precision_test)},
            {"recall", t_test_json(report.recall_test)}}}};
}

json to_json(const RecommendationSet& set) {
  return {{"predicted",
           {{"technique", set.predicted.technique}, {"probability", set.predicted.probability}}},
          {"threshold", set.threshold},
          {"collaborative", score_list(set.collaborative)},
          {"content_based", score_list(set.content_based)}};
}

}  // namespace elicit
