#include "elicit/feature_scoring.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "elicit/csv.hpp"
#include "elicit/error.hpp"
#include "elicit/random.hpp"

namespace elicit {

const char* to_string(FilterMethod m) {
  switch (m) {
    case FilterMethod::Chi2:
      return "chi2";
    case FilterMethod::AnovaF:
      return "anova_f";
    default:
      return "mutual_info";
  }
}

FilterMethod parse_filter_method(const std::string& text) {
  if (text == "chi2") return FilterMethod::Chi2;
  if (text == "anova_f") return FilterMethod::AnovaF;
  if (text == "mutual_info") return FilterMethod::MutualInfo;
  throw ValidationError("unknown filter method '" + text +
                        "' (expected chi2, anova_f or mutual_info)");
}

namespace {

using Table = std::map<Code, std::array<double, 2>>;

Table contingency(std::span<const Code> feature, std::span<const Label> y) {
  if (feature.size() != y.size()) throw ValidationError("feature and target differ in length");
  Table t;
  std::array<std::size_t, 2> classes{};
  for (std::size_t i = 0; i < y.size(); ++i) {
    t[feature[i]][y[i]] += 1.0;
    ++classes[y[i]];
  }
  if (classes[0] == 0 || classes[1] == 0)
    throw ValidationError("single-class target: both classes required for scoring");
  return t;
}

}  // namespace

double chi2_score(std::span<const Code> feature, std::span<const Label> y) {
  const auto table = contingency(feature, y);
  const double n = static_cast<double>(y.size());
  std::array<double, 2> col{};
  for (const auto& [code, cell] : table) {
    col[0] += cell[0];
    col[1] += cell[1];
  }
  double stat = 0.0;
  for (const auto& [code, cell] : table) {
    const double row = cell[0] + cell[1];
    for (int c = 0; c < 2; ++c) {
      const double expected = row * col[c] / n;
      const double diff = cell[c] - expected;
      stat += diff * diff / expected;
    }
  }
  return stat;
}

double anova_f_score(std::span<const Code> feature, std::span<const Label> y) {
  if (feature.size() != y.size()) throw ValidationError("feature and target differ in length");
  if (y.size() < 3) throw ValidationError("ANOVA F: need at least 3 rows");
  std::array<double, 2> sum{}, count{};
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum[y[i]] += feature[i];
    count[y[i]] += 1.0;
  }
  if (count[0] == 0 || count[1] == 0)
    throw ValidationError("single-class target: both classes required for scoring");
  const double n = static_cast<double>(y.size());
  const double grand = (sum[0] + sum[1]) / n;
  const std::array<double, 2> mean{sum[0] / count[0], sum[1] / count[1]};
  double between = 0.0;
  for (int c = 0; c < 2; ++c) between += count[c] * (mean[c] - grand) * (mean[c] - grand);
  double within = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = feature[i] - mean[y[i]];
    within += d * d;
  }
  const double ms_between = between / 1.0;
  const double ms_within = within / (n - 2.0);
  if (ms_within == 0.0)
    return ms_between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return ms_between / ms_within;
}

double mutual_info_score(std::span<const Code> feature, std::span<const Label> y) {
  const auto table = contingency(feature, y);
  const double n = static_cast<double>(y.size());
  std::array<double, 2> col{};
  for (const auto& [code, cell] : table) {
    col[0] += cell[0];
    col[1] += cell[1];
  }
  double mi = 0.0;
  for (const auto& [code, cell] : table) {
    const double row = cell[0] + cell[1];
    for (int c = 0; c < 2; ++c) {
      if (cell[c] == 0.0) continue;
      mi += (cell[c] / n) * std::log(cell[c] * n / (row * col[c]));
    }
  }
  // Rounding can leave a tiny negative value for independent features.
  return std::max(mi, 0.0);
}

double filter_score(FilterMethod method, std::span<const Code> feature, std::span<const Label> y) {
  switch (method) {
    case FilterMethod::Chi2:
      return chi2_score(feature, y);
    case FilterMethod::AnovaF:
      return anova_f_score(feature, y);
    default:
      return mutual_info_score(feature, y);
  }
}

void sort_scores(std::vector<FeatureScore>& entries) {
  std::sort(entries.begin(), entries.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.feature < b.feature;
  });
}

FeatureScoreTable score_all(const Dataset& d, FilterMethod method) {
  FeatureScoreTable table;
  table.method = method;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const auto column = d.column(j);
    table.entries.push_back({d.feature(j).name, d.feature(j).role,
                             filter_score(method, column, d.labels())});
  }
  sort_scores(table.entries);
  return table;
}

std::string to_csv(const FeatureScoreTable& table) {
  std::string out = "feature,role,score\n";
  for (const auto& e : table.entries) {
    out += csv::quote_field(e.feature);
    out += ',';
    out += to_string(e.role);
    out += ',';
    if (std::isinf(e.score)) {
      out += "inf";
    } else {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof(buf), e.score);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureScoreTable parse_score_csv(const std::string& text, FilterMethod method) {
  FeatureScoreTable table;
  table.method = method;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv::split_record(line);
    if (header) {
      if (fields != std::vector<std::string>{"feature", "role", "score"})
        throw ValidationError("score CSV must start with header feature,role,score");
      header = false;
      continue;
    }
    if (fields.size() != 3)
      throw ValidationError("score CSV line " + std::to_string(line_no) + ": expected 3 fields");
    double score = 0.0;
    if (fields[2] == "inf") {
      score = std::numeric_limits<double>::infinity();
    } else {
      const auto* begin = fields[2].data();
      const auto* end = begin + fields[2].size();
      const auto res = std::from_chars(begin, end, score);
      if (res.ec != std::errc{} || res.ptr != end || std::isnan(score) || score < 0.0)
        throw ValidationError("score CSV line " + std::to_string(line_no) + ": bad score '" +
                              fields[2] + "'");
    }
    table.entries.push_back({fields[0], parse_role(fields[1]), score});
  }
  if (header) throw ValidationError("score CSV is empty");
  sort_scores(table.entries);
  return table;
}

FilterSelection select_best_filter(const Dataset& d, const FilterSelectionConfig& cfg) {
  if (cfg.methods.empty()) throw ValidationError("filter selection: no candidate methods");
  if (cfg.top_k == 0 || cfg.top_k > d.cols())
    throw ValidationError("filter selection: top_k must lie in [1, " + std::to_string(d.cols()) +
                          "]");

  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < d.cols(); ++j) column_of[d.feature(j).name] = j;

  ArmSpec spec;
  spec.mode = cfg.mode;
  spec.balance = cfg.smote_enabled;
  spec.test_fraction = cfg.test_fraction;
  spec.stratified_split = cfg.stratified_split;
  spec.split_seed = derive_seed(cfg.seed, 1);
  spec.forest = cfg.forest;
  spec.forest.seed = derive_seed(cfg.seed, 2);
  spec.smote = cfg.smote;
  spec.smote.seed = derive_seed(cfg.seed, 3);

  FilterSelection result;
  for (const FilterMethod method : {FilterMethod::MutualInfo, FilterMethod::Chi2,
                                    FilterMethod::AnovaF}) {
    if (std::find(cfg.methods.begin(), cfg.methods.end(), method) == cfg.methods.end()) continue;
    auto table = score_all(d, method);
    std::vector<std::size_t> selected;
    for (std::size_t k = 0; k < cfg.top_k; ++k) selected.push_back(column_of.at(table.entries[k].feature));
    // Original column order, so equal selections give identical experiments.
    std::sort(selected.begin(), selected.end());
    const auto outcome = run_arm(d.select_columns(selected), spec);
    result.auch[method] = outcome.roc.auch;
    const bool better = result.tables.empty() ||
                        outcome.roc.auch > result.auch.at(result.best) + 1e-12;
    if (better) result.best = method;
    result.tables.emplace(method, std::move(table));
  }
  result.best_table = result.tables.at(result.best);
  return result;
}

}  // namespace elicit
