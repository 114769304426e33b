#include "elicit/experiment.hpp"

#include "elicit/error.hpp"

namespace elicit {

const char* to_string(PipelineMode m) {
  return m == PipelineMode::PaperReplication ? "paper" : "sound";
}

PipelineMode parse_mode(const std::string& text) {
  if (text == "paper") return PipelineMode::PaperReplication;
  if (text == "sound") return PipelineMode::Sound;
  throw ValidationError("unknown pipeline mode '" + text + "' (expected paper or sound)");
}

ArmOutcome run_arm(const Dataset& d, const ArmSpec& spec) {
  auto split = [&](const Dataset& data) {
    return split_train_test(data, spec.test_fraction, spec.split_seed, spec.stratified_split);
  };
  auto outcome = [&](Dataset train, Dataset test) {
    auto model = train_forest(train, spec.forest);
    auto scores = predict_proba(model, test);
    auto roc = analyze_roc(scores, test.labels());
    return ArmOutcome{std::move(train), std::move(test), std::move(model), std::move(scores),
                      std::move(roc)};
  };

  if (!spec.balance) {
    auto [train, test] = split(d);
    return outcome(std::move(train), std::move(test));
  }
  if (spec.mode == PipelineMode::PaperReplication) {
    auto [train, test] = split(smote_oversample(d, spec.smote));
    return outcome(std::move(train), std::move(test));
  }
  auto [train, test] = split(d);
  return outcome(smote_oversample(train, spec.smote), std::move(test));
}

}  // namespace elicit
