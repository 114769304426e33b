#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elicit/dataset.hpp"
#include "elicit/evaluation.hpp"
#include "elicit/experiment.hpp"
#include "elicit/feature_scoring.hpp"
#include "elicit/forest.hpp"
#include "elicit/sampler.hpp"

namespace elicit {

struct FilterOptions {
  std::vector<FilterMethod> methods{FilterMethod::MutualInfo, FilterMethod::Chi2,
                                    FilterMethod::AnovaF};
  std::size_t top_k = 10;
};

struct PipelineConfig {
  std::string target_name;
  PipelineMode mode = PipelineMode::Sound;
  double test_fraction = 0.2;
  bool stratified_split = false;
  // When false the "balanced" arm skips SMOTE and repeats the baseline.
  bool smote_enabled = true;
  SmoteConfig smote;
  ForestParams forest;
  FilterOptions filter;
  std::optional<double> recommendation_threshold;
  std::uint64_t seed = 42;
};

void validate(const PipelineConfig& cfg);

struct ArmMetrics {
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  Confusion confusion;
  double auc = 0.0;
  double auch = 0.0;
  std::optional<double> mean_split_entropy;
  std::size_t train_rows = 0;
  std::size_t train_positive = 0;
  std::size_t train_synthetic = 0;
  std::size_t test_rows = 0;
  std::size_t test_positive = 0;
  std::size_t test_synthetic = 0;
};

struct ArmReport {
  ArmMetrics metrics;
  RocAnalysis roc;
};

struct TechniqueReport {
  std::string technique;
  DatasetSummary summary;
  ArmReport imbalanced;
  ArmReport balanced;
  // Relative change, in percent; nullopt when the baseline is 0.
  std::optional<double> accuracy_improvement;
  std::optional<double> auc_improvement;
  // A = balanced hull dominates, B = imbalanced hull dominates.
  Dominance hull_verdict = Dominance::Neither;
};

struct EvaluationReport {
  PipelineMode mode = PipelineMode::Sound;
  std::vector<TechniqueReport> techniques;
  // Balanced vs imbalanced across techniques; present with >= 2 techniques
  // whose metric is defined in both arms.
  std::optional<TTestResult> precision_test;
  std::optional<TTestResult> recall_test;
};

// drop constant features, then for each arm split/balance/train/score. The
// imbalanced arm never balances; both arms share split and forest seeds.
TechniqueReport run_technique(const Dataset& d, const PipelineConfig& cfg);

EvaluationReport run_pipeline(const Dataset& d, const PipelineConfig& cfg);
// One technique per dataset, with the paired t-tests across them.
EvaluationReport run_pipeline(const std::vector<Dataset>& datasets,
                              const std::vector<PipelineConfig>& configs);

// Adds the precision/recall paired t-tests to a report built from rows.
void attach_t_tests(EvaluationReport& report);

struct BalancingComparison {
  Dominance verdict = Dominance::Neither;
  double auc_delta = 0.0;
  double accuracy_delta = 0.0;
  std::optional<double> entropy_delta;
};

BalancingComparison compare_balancing(const TechniqueReport& report);
BalancingComparison compare_balancing(const Dataset& d, const PipelineConfig& cfg);

struct Prediction {
  std::string technique;
  double probability = 0.0;
};

struct RecommendationSet {
  Prediction predicted;
  double threshold = 0.0;
  // Technique-role features scoring strictly above the threshold.
  std::vector<FeatureScore> collaborative;
  // Context-role features scoring strictly above the threshold.
  std::vector<FeatureScore> content_based;
};

RecommendationSet form_recommendations(const FeatureScoreTable& scores,
                                       const Prediction& prediction, double threshold);

nlohmann::json to_json(const EvaluationReport& report);
nlohmann::json to_json(const RecommendationSet& set);

}  // namespace elicit
