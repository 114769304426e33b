#include "elicit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "elicit/csv.hpp"
#include "elicit/error.hpp"
#include "elicit/random.hpp"

namespace elicit {

const char* to_string(FeatureRole role) {
  return role == FeatureRole::Context ? "context" : "technique";
}

FeatureRole parse_role(const std::string& text) {
  if (text == "context" || text == "Context") return FeatureRole::Context;
  if (text == "technique" || text == "Technique") return FeatureRole::Technique;
  throw ValidationError("unknown feature role '" + text + "'");
}

Dataset::Dataset(std::vector<FeatureSchema> schema, std::string target_name,
                 std::vector<std::string> target_labels, std::vector<Code> codes,
                 std::vector<Label> labels, std::vector<std::uint8_t> synthetic,
                 std::size_t target_position)
    : schema_(std::move(schema)),
      target_name_(std::move(target_name)),
      target_labels_(std::move(target_labels)),
      codes_(std::move(codes)),
      labels_(std::move(labels)),
      synthetic_(std::move(synthetic)),
      target_position_(std::min(target_position, schema_.size())) {
  if (schema_.empty()) throw ValidationError("dataset has no features");
  if (labels_.empty()) throw ValidationError("empty data");
  if (target_labels_.size() != 2) throw ValidationError("target needs exactly two labels");
  if (codes_.size() != labels_.size() * schema_.size())
    throw ValidationError("code matrix does not match rows x features");
  if (synthetic_.empty()) synthetic_.assign(labels_.size(), 0);
  if (synthetic_.size() != labels_.size())
    throw ValidationError("provenance vector does not match row count");

  std::set<std::string> names;
  for (const auto& f : schema_) {
    if (f.levels.empty()) throw ValidationError("feature '" + f.name + "' has no levels");
    if (std::set<std::string>(f.levels.begin(), f.levels.end()).size() != f.levels.size())
      throw ValidationError("feature '" + f.name + "' has duplicate levels");
    if (f.name == target_name_)
      throw ValidationError("target '" + target_name_ + "' must not be a feature");
    if (!names.insert(f.name).second)
      throw ValidationError("duplicate feature name '" + f.name + "'");
  }
  const std::size_t p = schema_.size();
  for (std::size_t k = 0; k < codes_.size(); ++k) {
    const Code c = codes_[k];
    if (c < 0 || static_cast<std::size_t>(c) >= schema_[k % p].levels.size())
      throw ValidationError("code out of range for feature '" + schema_[k % p].name + "'");
  }
  for (Label y : labels_)
    if (y > 1) throw ValidationError("labels must be 0 or 1");
}

std::vector<Code> Dataset::column(std::size_t j) const {
  std::vector<Code> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = code(i, j);
  return out;
}

std::size_t Dataset::count_label(Label c) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), c));
}

std::size_t Dataset::count_synthetic() const {
  return static_cast<std::size_t>(std::count(synthetic_.begin(), synthetic_.end(), 1));
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
  std::vector<Code> codes;
  codes.reserve(indices.size() * cols());
  std::vector<Label> labels;
  std::vector<std::uint8_t> synthetic;
  labels.reserve(indices.size());
  synthetic.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= rows()) throw ValidationError("row index out of range");
    auto r = row(i);
    codes.insert(codes.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
    synthetic.push_back(synthetic_[i]);
  }
  return Dataset(schema_, target_name_, target_labels_, std::move(codes), std::move(labels),
                 std::move(synthetic), target_position_);
}

Dataset Dataset::select_columns(std::span<const std::size_t> indices) const {
  std::vector<FeatureSchema> schema;
  std::size_t position = 0;
  for (std::size_t j : indices) {
    if (j >= cols()) throw ValidationError("column index out of range");
    schema.push_back(schema_[j]);
    if (j < target_position_) ++position;
  }
  std::vector<Code> codes;
  codes.reserve(rows() * indices.size());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j : indices) codes.push_back(code(i, j));
  return Dataset(std::move(schema), target_name_, target_labels_, std::move(codes), labels_,
                 synthetic_, position);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  return csv::split_record(line);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ValidationError("empty data: no header row");
  const auto header = split_fields(lines.front());

  const auto target_it = std::find(header.begin(), header.end(), options.target_name);
  if (target_it == header.end())
    throw ValidationError("missing target column '" + options.target_name + "'");
  const auto target_col = static_cast<std::size_t>(target_it - header.begin());

  std::vector<FeatureSchema> schema;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == target_col) continue;
    const auto role_it = options.roles.find(header[c]);
    schema.push_back({header[c],
                      role_it == options.roles.end() ? options.default_role : role_it->second,
                      {}});
    feature_cols.push_back(c);
  }
  if (schema.empty()) throw ValidationError("no feature columns besides the target");
  if (lines.size() < 2) throw ValidationError("empty data: header only");

  std::vector<std::unordered_map<std::string, Code>> lookup(schema.size());
  std::vector<Code> codes;
  std::vector<std::string> raw_targets;
  codes.reserve((lines.size() - 1) * schema.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != header.size())
      throw ValidationError("ragged row at line " + std::to_string(r + 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      const auto& value = fields[feature_cols[j]];
      if (value.empty())
        throw ValidationError("missing value for '" + schema[j].name + "' at line " +
                              std::to_string(r + 1));
      auto [it, inserted] = lookup[j].try_emplace(value, static_cast<Code>(schema[j].levels.size()));
      if (inserted) schema[j].levels.push_back(value);
      codes.push_back(it->second);
    }
    if (fields[target_col].empty())
      throw ValidationError("missing target value at line " + std::to_string(r + 1));
    raw_targets.push_back(fields[target_col]);
  }

  std::vector<std::string> distinct;
  for (const auto& t : raw_targets)
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);
  if (distinct.size() != 2)
    throw ValidationError("non-binary target: column '" + options.target_name + "' has " +
                          std::to_string(distinct.size()) + " distinct values");
  if (std::find(distinct.begin(), distinct.end(), options.positive_label) == distinct.end())
    throw ValidationError("positive label '" + options.positive_label +
                          "' not present in target column");
  const std::string negative = distinct[0] == options.positive_label ? distinct[1] : distinct[0];

  std::vector<Label> labels;
  labels.reserve(raw_targets.size());
  for (const auto& t : raw_targets) labels.push_back(t == options.positive_label ? 1 : 0);

  return Dataset(std::move(schema), options.target_name, {negative, options.positive_label},
                 std::move(codes), std::move(labels), {}, target_col);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

std::string to_csv(const Dataset& d, bool provenance_column) {
  std::string out;
  auto write = [&](const std::vector<std::string>& fields) {
    out += csv::join_record(fields);
    out += '\n';
  };

  std::vector<std::string> fields;
  fields.reserve(d.cols() + 2);
  for (std::size_t j = 0; j < d.cols(); ++j) fields.push_back(d.feature(j).name);
  fields.insert(fields.begin() + static_cast<std::ptrdiff_t>(d.target_position()), d.target_name());
  if (provenance_column) fields.emplace_back("_synthetic");
  write(fields);

  for (std::size_t i = 0; i < d.rows(); ++i) {
    fields.clear();
    for (std::size_t j = 0; j < d.cols(); ++j)
      fields.push_back(d.feature(j).levels[static_cast<std::size_t>(d.code(i, j))]);
    fields.insert(fields.begin() + static_cast<std::ptrdiff_t>(d.target_position()),
                  d.target_labels()[d.label(i)]);
    if (provenance_column) fields.emplace_back(d.is_synthetic(i) ? "1" : "0");
    write(fields);
  }
  return out;
}

Dataset drop_constant_features(const Dataset& d) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const Code first = d.code(0, j);
    for (std::size_t i = 1; i < d.rows(); ++i) {
      if (d.code(i, j) != first) {
        keep.push_back(j);
        break;
      }
    }
  }
  if (keep.empty()) throw ValidationError("no informative features: every feature is constant");
  if (keep.size() == d.cols()) return d;
  return d.select_columns(keep);
}

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.uniform_index(i)]);
}

}  // namespace

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double test_fraction,
                                             std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ValidationError("test fraction must lie strictly between 0 and 1");
  const auto n = d.rows();
  const auto n_test = static_cast<std::size_t>(std::lround(static_cast<double>(n) * test_fraction));
  if (n_test < 1 || n_test >= n)
    throw ValidationError("degenerate split: test fraction leaves an empty partition");

  Rng rng(seed);
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  if (!stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  } else {
    for (Label c : {Label{0}, Label{1}}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (d.label(i) == c) members.push_back(i);
      shuffle(members, rng);
      const auto k = static_cast<std::size_t>(
          std::lround(static_cast<double>(members.size()) * test_fraction));
      test.insert(test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
      train.insert(train.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
    }
    if (test.empty() || train.empty())
      throw ValidationError("degenerate stratified split: empty partition");
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {d.select_rows(train), d.select_rows(test)};
}

DatasetSummary summarize(const Dataset& d) {
  const auto n1 = d.count_label(1);
  const auto n0 = d.rows() - n1;
  if (n0 == 0 || n1 == 0) throw ValidationError("single-class dataset: both classes required");
  DatasetSummary s;
  s.majority_label = n1 >= n0 ? 1 : 0;
  s.n_majority = std::max(n0, n1);
  s.n_minority = std::min(n0, n1);
  s.imbalance_ratio = static_cast<double>(s.n_majority) / static_cast<double>(s.n_minority);
  return s;
}

namespace {

std::size_t draw_categorical(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.p == 0) throw ValidationError("synthetic spec: p must be positive");
  if (spec.n_informative > spec.p)
    throw ValidationError("synthetic spec: n_informative exceeds p");
  if (spec.levels_per_feature < 2)
    throw ValidationError("synthetic spec: levels_per_feature must be at least 2");
  if (spec.n_majority == 0 || spec.n_minority == 0 || spec.n_minority > spec.n_majority)
    throw ValidationError("synthetic spec: need 0 < n_minority <= n_majority");
  if (spec.majority_label > 1) throw ValidationError("synthetic spec: label must be 0 or 1");

  const std::size_t L = spec.levels_per_feature;
  const std::size_t n = spec.n_majority + spec.n_minority;
  Rng rng(spec.seed);

  std::vector<FeatureSchema> schema;
  for (std::size_t j = 0; j < spec.p; ++j) {
    const bool context = j < (spec.p + 1) / 2;
    FeatureSchema f;
    f.name = (context ? "context_" : "technique_") + std::to_string(j);
    f.role = context ? FeatureRole::Context : FeatureRole::Technique;
    for (std::size_t l = 0; l < L; ++l) f.levels.push_back("L" + std::to_string(l));
    schema.push_back(std::move(f));
  }

  // Class-conditional level distributions: exp(+-skew * l/(L-1)).
  std::vector<double> uniform_cdf(L), majority_cdf(L), minority_cdf(L);
  double acc_u = 0, acc_maj = 0, acc_min = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const double t = static_cast<double>(l) / static_cast<double>(L - 1);
    acc_u += 1.0;
    acc_maj += std::exp(spec.skew * t);
    acc_min += std::exp(-spec.skew * t);
    uniform_cdf[l] = acc_u;
    majority_cdf[l] = acc_maj;
    minority_cdf[l] = acc_min;
  }

  std::vector<Label> labels(n);
  const Label minority_label = spec.majority_label == 1 ? 0 : 1;
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = i < spec.n_majority ? spec.majority_label : minority_label;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  std::vector<Code> codes(n * spec.p);
  std::vector<Label> shuffled(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = labels[order[i]];
    shuffled[i] = y;
    for (std::size_t j = 0; j < spec.p; ++j) {
      const auto& cdf = j < spec.n_informative
                            ? (y == spec.majority_label ? majority_cdf : minority_cdf)
                            : uniform_cdf;
      codes[i * spec.p + j] = static_cast<Code>(draw_categorical(cdf, rng));
    }
  }
  return Dataset(std::move(schema), "target", {"0", "1"}, std::move(codes), std::move(shuffled));
}

}  // namespace elicit
