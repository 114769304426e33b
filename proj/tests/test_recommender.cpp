#include <gtest/gtest.h>

#include <random>

#include "elicit/error.hpp"
#include "elicit/recommender.hpp"
#include "fixtures.hpp"

using namespace elicit;

namespace {

std::vector<std::string> names(const std::vector<FeatureScore>& list) {
  std::vector<std::string> out;
  for (const auto& e : list) out.push_back(e.feature);
  return out;
}

PipelineConfig small_config(PipelineMode mode, std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.mode = mode;
  cfg.forest.n_trees = 20;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(FormRecommendations, InterviewsThresholdExample) {
  const auto set = form_recommendations(fixture::interviews_scores(), {"Interviews", 0.9}, 0.2);
  EXPECT_EQ(names(set.content_based),
            (std::vector<std::string>{"Project Size", "Experience", "WoW", "Project Category",
                                      "Company Type"}));
  EXPECT_EQ(names(set.collaborative), (std::vector<std::string>{"Prototyping"}));
  EXPECT_DOUBLE_EQ(set.content_based[0].score, 0.3);
  EXPECT_DOUBLE_EQ(set.collaborative[0].score, 0.25);
}

TEST(FormRecommendations, ThresholdIsStrict) {
  const auto set = form_recommendations(fixture::interviews_scores(), {"Interviews", 0.9}, 0.25);
  EXPECT_TRUE(set.collaborative.empty());
  EXPECT_EQ(names(set.content_based), (std::vector<std::string>{"Project Size", "Experience", "WoW"}));
  const auto none = form_recommendations(fixture::interviews_scores(), {"Interviews", 0.9}, 1.0);
  EXPECT_TRUE(none.collaborative.empty());
  EXPECT_TRUE(none.content_based.empty());
  EXPECT_THROW(form_recommendations(fixture::interviews_scores(), {}, -0.1), ValidationError);
}

TEST(FormRecommendations, MonotoneAndDisjoint) {
  const auto scores = fixture::interviews_scores();
  std::size_t previous = SIZE_MAX;
  for (double t = 0.0; t <= 0.35; t += 0.01) {
    const auto set = form_recommendations(scores, {"Interviews", 0.5}, t);
    const std::size_t total = set.collaborative.size() + set.content_based.size();
    EXPECT_LE(total, previous);
    previous = total;
    for (const auto& e : set.collaborative) {
      EXPECT_EQ(e.role, FeatureRole::Technique);
      EXPECT_GT(e.score, t);
    }
    for (const auto& e : set.content_based) {
      EXPECT_EQ(e.role, FeatureRole::Context);
      EXPECT_GT(e.score, t);
    }
  }
}

TEST(FormRecommendations, JsonShape) {
  const auto set = form_recommendations(fixture::interviews_scores(), {"Interviews", 0.75}, 0.2);
  const auto j = to_json(set);
  EXPECT_EQ(j.at("predicted").at("technique"), "Interviews");
  EXPECT_EQ(j.at("threshold"), 0.2);
  EXPECT_EQ(j.at("content_based").size(), 5u);
  EXPECT_EQ(j.at("collaborative").at(0).at("feature"), "Prototyping");
  EXPECT_EQ(j.at("collaborative").at(0).at("role"), "technique");
}

TEST(RunTechnique, SmoteDisabledRepeatsBaseline) {
  const auto d = generate_synthetic({120, 20, 8, 3, 4, 4});
  auto cfg = small_config(PipelineMode::PaperReplication, 3);
  cfg.smote_enabled = false;
  const auto r = run_technique(d, cfg);
  EXPECT_EQ(r.imbalanced.metrics.auc, r.balanced.metrics.auc);
  EXPECT_EQ(r.imbalanced.metrics.confusion, r.balanced.metrics.confusion);
  EXPECT_EQ(r.hull_verdict, Dominance::Neither);
  EXPECT_EQ(r.balanced.metrics.train_synthetic, 0u);
}

TEST(RunTechnique, SoundModeKeepsSyntheticRowsOutOfTest) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto d = generate_synthetic({150, 25, 8, 3, 4, seed});
    const auto r = run_technique(d, small_config(PipelineMode::Sound, seed));
    EXPECT_EQ(r.balanced.metrics.test_synthetic, 0u);
    EXPECT_GT(r.balanced.metrics.train_synthetic, 0u);
    EXPECT_EQ(r.balanced.metrics.test_rows, r.imbalanced.metrics.test_rows);
    EXPECT_EQ(r.balanced.metrics.train_positive * 2, r.balanced.metrics.train_rows);
  }
}

TEST(RunTechnique, ReplicationModeBalancesBeforeSplitting) {
  const auto d = generate_synthetic({150, 25, 8, 3, 4, 2});
  const auto r = run_technique(d, small_config(PipelineMode::PaperReplication, 2));
  EXPECT_EQ(r.balanced.metrics.train_rows + r.balanced.metrics.test_rows, 300u);
  EXPECT_EQ(r.balanced.metrics.train_synthetic + r.balanced.metrics.test_synthetic, 125u);
  EXPECT_EQ(r.imbalanced.metrics.train_rows + r.imbalanced.metrics.test_rows, 175u);
}

TEST(RunTechnique, DropsConstantFeaturesAndSummarizes) {
  const auto base = generate_synthetic({60, 20, 4, 2, 3, 6});
  auto schema = base.schema();
  schema.push_back({"constant", FeatureRole::Context, {"only"}});
  std::vector<Code> codes;
  for (std::size_t i = 0; i < base.rows(); ++i) {
    auto r = base.row(i);
    codes.insert(codes.end(), r.begin(), r.end());
    codes.push_back(0);
  }
  const Dataset d(schema, base.target_name(), base.target_labels(), codes,
                  std::vector<Label>(base.labels().begin(), base.labels().end()));
  const auto r = run_technique(d, small_config(PipelineMode::Sound, 1));
  EXPECT_EQ(r.summary.n_majority, 60u);
  EXPECT_EQ(r.summary.n_minority, 20u);
  EXPECT_DOUBLE_EQ(r.summary.imbalance_ratio, 3.0);
}

TEST(RunPipeline, DeterministicReport) {
  const auto d = generate_synthetic({100, 20, 6, 2, 4, 8});
  auto cfg = small_config(PipelineMode::Sound, 5);
  const auto a = to_json(run_pipeline(d, cfg)).dump();
  cfg.forest.threads = 3;
  const auto b = to_json(run_pipeline(d, cfg)).dump();
  EXPECT_EQ(a, b);
}

TEST(RunPipeline, ReportSchema) {
  const auto d = generate_synthetic({100, 20, 6, 2, 4, 8});
  const auto j = to_json(run_pipeline(d, small_config(PipelineMode::PaperReplication, 5)));
  EXPECT_EQ(j.at("mode"), "paper");
  ASSERT_EQ(j.at("techniques").size(), 1u);
  const auto& t = j.at("techniques").at(0);
  for (const char* key : {"technique", "dataset", "imbalanced", "balanced", "improvement_percent",
                          "hull_dominance"})
    EXPECT_TRUE(t.contains(key)) << key;
  for (const char* key : {"accuracy", "precision", "recall", "auc", "auch", "mean_split_entropy",
                          "confusion"})
    EXPECT_TRUE(t.at("balanced").contains(key)) << key;
  EXPECT_EQ(t.at("improvement_percent").at("kind"), "relative");
  EXPECT_TRUE(j.at("t_tests").at("precision").is_null());
}

TEST(RunPipeline, TTestsAcrossTechniques) {
  std::vector<Dataset> data;
  std::vector<PipelineConfig> configs;
  for (std::uint64_t k = 0; k < 4; ++k) {
    data.push_back(generate_synthetic({150, 30 + 10 * k, 8, 3, 4, 10 + k}));
    configs.push_back(small_config(PipelineMode::PaperReplication, 20 + k));
  }
  const auto report = run_pipeline(data, configs);
  ASSERT_EQ(report.techniques.size(), 4u);
  if (report.precision_test) {
    EXPECT_EQ(report.precision_test->df, 3.0);
    EXPECT_GE(report.precision_test->p_value, 0.0);
    EXPECT_LE(report.precision_test->p_value, 1.0);
  }
  ASSERT_TRUE(report.recall_test);
  configs[1].mode = PipelineMode::Sound;
  EXPECT_THROW(run_pipeline(data, configs), ValidationError);
}

TEST(AttachTTests, SkipsUndefinedMetrics) {
  EvaluationReport report;
  for (int k = 0; k < 3; ++k) {
    TechniqueReport t;
    t.balanced.metrics.precision = 0.9 - 0.01 * k;
    t.imbalanced.metrics.precision = 0.8;
    t.balanced.metrics.recall = 0.5;
    t.imbalanced.metrics.recall = k == 1 ? std::nullopt : std::optional<double>(0.4);
    report.techniques.push_back(t);
  }
  attach_t_tests(report);
  ASSERT_TRUE(report.precision_test);
  EXPECT_FALSE(report.recall_test);
}

TEST(CompareBalancing, DeltasMatchReport) {
  const auto d = generate_synthetic({200, 30, 10, 4, 4, 12});
  const auto cfg = small_config(PipelineMode::PaperReplication, 12);
  const auto r = run_technique(d, cfg);
  const auto c = compare_balancing(d, cfg);
  EXPECT_EQ(c.verdict, r.hull_verdict);
  EXPECT_DOUBLE_EQ(c.auc_delta, r.balanced.metrics.auc - r.imbalanced.metrics.auc);
  ASSERT_TRUE(c.entropy_delta);
}

TEST(Validate, RejectsBadConfig) {
  PipelineConfig cfg;
  cfg.test_fraction = 1.0;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = {};
  cfg.smote.target_ratio = 0.0;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = {};
  cfg.forest.n_trees = 0;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = {};
  cfg.filter.methods.clear();
  EXPECT_THROW(validate(cfg), ValidationError);
  EXPECT_NO_THROW(validate(PipelineConfig{}));
}
