#include "app.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "elicit/csv.hpp"
#include "elicit/error.hpp"
#include "elicit/feature_scoring.hpp"
#include "elicit/forest.hpp"
#include "elicit/random.hpp"
#include "elicit/sampler.hpp"

namespace elicit::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key))
      throw ValidationError("config: unknown key '" + (where.empty() ? "" : where + ".") + key + "'");
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: '" + where + key + "' has the wrong type");
  }
}

}  // namespace

CsvOptions AppConfig::csv_options(std::size_t input_index) const {
  CsvOptions o;
  if (targets.empty()) throw ValidationError("config: 'target' is required");
  o.target_name = targets.size() == 1 ? targets.front() : targets.at(input_index);
  o.positive_label = positive_label;
  o.roles = roles;
  o.default_role = default_role;
  return o;
}

AppConfig parse_config(const json& j) {
  check_keys(j,
             {"target", "positive_label", "roles", "default_role", "mode", "test_fraction",
              "stratified_split", "smote", "forest", "filter", "recommendation_threshold", "seed"},
             "");
  AppConfig c;
  auto& p = c.pipeline;
  if (j.contains("target")) {
    const auto& t = j.at("target");
    if (t.is_string()) {
      c.targets.push_back(t.get<std::string>());
    } else if (t.is_array() && !t.empty()) {
      for (const auto& v : t) {
        if (!v.is_string()) throw ValidationError("config: 'target' entries must be strings");
        c.targets.push_back(v.get<std::string>());
      }
    } else {
      throw ValidationError("config: 'target' must be a string or a non-empty array of strings");
    }
    p.target_name = c.targets.front();
  }
  if (j.contains("positive_label")) c.positive_label = get<std::string>(j, "positive_label", "");
  if (j.contains("roles")) {
    if (!j.at("roles").is_object()) throw ValidationError("config: 'roles' must be an object");
    for (const auto& [name, role] : j.at("roles").items()) {
      if (!role.is_string()) throw ValidationError("config: role of '" + name + "' must be a string");
      c.roles[name] = parse_role(role.get<std::string>());
    }
  }
  if (j.contains("default_role")) c.default_role = parse_role(get<std::string>(j, "default_role", ""));
  if (j.contains("mode")) p.mode = parse_mode(get<std::string>(j, "mode", ""));
  if (j.contains("test_fraction")) p.test_fraction = get<double>(j, "test_fraction", "");
  if (j.contains("stratified_split")) p.stratified_split = get<bool>(j, "stratified_split", "");
  if (j.contains("seed")) p.seed = get<std::uint64_t>(j, "seed", "");
  if (j.contains("recommendation_threshold"))
    p.recommendation_threshold = get<double>(j, "recommendation_threshold", "");

  if (j.contains("smote")) {
    const auto& s = j.at("smote");
    check_keys(s, {"enabled", "k_neighbors", "target_ratio"}, "smote");
    if (s.contains("enabled")) p.smote_enabled = get<bool>(s, "enabled", "smote.");
    if (s.contains("k_neighbors")) p.smote.k_neighbors = get<std::size_t>(s, "k_neighbors", "smote.");
    if (s.contains("target_ratio")) p.smote.target_ratio = get<double>(s, "target_ratio", "smote.");
  }
  if (j.contains("forest")) {
    const auto& f = j.at("forest");
    check_keys(f, {"n_trees", "mtry", "max_depth", "min_samples_leaf", "criterion", "threads"},
               "forest");
    if (f.contains("n_trees")) p.forest.n_trees = get<std::size_t>(f, "n_trees", "forest.");
    if (f.contains("mtry")) p.forest.mtry = get<std::size_t>(f, "mtry", "forest.");
    if (f.contains("max_depth") && !f.at("max_depth").is_null())
      p.forest.max_depth = get<std::size_t>(f, "max_depth", "forest.");
    if (f.contains("min_samples_leaf"))
      p.forest.min_samples_leaf = get<std::size_t>(f, "min_samples_leaf", "forest.");
    if (f.contains("criterion"))
      p.forest.criterion = parse_criterion(get<std::string>(f, "criterion", "forest."));
    if (f.contains("threads")) p.forest.threads = get<std::size_t>(f, "threads", "forest.");
  }
  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    check_keys(f, {"methods", "top_k"}, "filter");
    if (f.contains("methods")) {
      p.filter.methods.clear();
      for (const auto& m : get<std::vector<std::string>>(f, "methods", "filter."))
        p.filter.methods.push_back(parse_filter_method(m));
    }
    if (f.contains("top_k")) p.filter.top_k = get<std::size_t>(f, "top_k", "filter.");
  }
  validate(p);
  return c;
}

AppConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

namespace {

std::string fixed(double v, int precision = 2) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string polyline(const std::vector<RocPoint>& hull, const char* cls, const char* color) {
  constexpr double kSize = 600.0;
  std::string pts;
  for (const auto& p : hull) {
    if (!pts.empty()) pts += ' ';
    pts += fixed(p.fpr * kSize) + "," + fixed((1.0 - p.tpr) * kSize);
  }
  return std::string("  <polyline class=\"") + cls + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2.5\" points=\"" + pts + "\"/>\n";
}

}  // namespace

std::string render_hulls_svg(const RocAnalysis& imbalanced, const RocAnalysis& balanced,
                             const std::string& title) {
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-80 -50 720 720\" width=\"720\" "
      "height=\"720\" font-family=\"sans-serif\" font-size=\"14\">\n";
  s += "  <title>" + xml_escape(title) + "</title>\n";
  s += "  <rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const std::string pos = fixed(k * 120.0);
    const std::string inv = fixed(600.0 - k * 120.0);
    const std::string label = fixed(k * 0.2, 1);
    s += "  <line class=\"tick\" x1=\"" + pos + "\" y1=\"600.00\" x2=\"" + pos +
         "\" y2=\"608.00\" stroke=\"black\"/>\n";
    s += "  <text x=\"" + pos + "\" y=\"626\" text-anchor=\"middle\">" + label + "</text>\n";
    s += "  <line class=\"tick\" x1=\"-8.00\" y1=\"" + inv + "\" x2=\"0.00\" y2=\"" + inv +
         "\" stroke=\"black\"/>\n";
    s += "  <text x=\"-14\" y=\"" + inv + "\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
         label + "</text>\n";
  }
  s += "  <line class=\"chance\" x1=\"0\" y1=\"600\" x2=\"600\" y2=\"0\" stroke=\"#999\" "
       "stroke-dasharray=\"6 6\"/>\n";
  s += "  <text x=\"300\" y=\"660\" text-anchor=\"middle\">False positive rate</text>\n";
  s += "  <text x=\"-60\" y=\"300\" text-anchor=\"middle\" transform=\"rotate(-90 -60 300)\">"
       "True positive rate</text>\n";
  s += "  <text x=\"300\" y=\"-20\" text-anchor=\"middle\">" + xml_escape(title) + "</text>\n";
  s += polyline(imbalanced.hull, "hull-imbalanced", "#1f77b4");
  s += polyline(balanced.hull, "hull-balanced", "#ff7f0e");
  s += "  <text x=\"380\" y=\"540\" fill=\"#1f77b4\">imbalanced, AUCH " + fixed(imbalanced.auch, 3) +
       "</text>\n";
  s += "  <text x=\"380\" y=\"565\" fill=\"#ff7f0e\">SMOTE balanced, AUCH " +
       fixed(balanced.auch, 3) + "</text>\n";
  s += "</svg>\n";
  return s;
}

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> threads;
  int verbosity = 0;
};

class Runner {
 public:
  Runner(const CommonOptions& opts, std::ostream& out, std::ostream& err)
      : opts_(opts), out_(out), err_(err) {}

  AppConfig config() const {
    if (opts_.config.empty()) throw ValidationError("--config is required for this subcommand");
    auto c = load_config(opts_.config);
    if (opts_.seed) c.pipeline.seed = *opts_.seed;
    if (opts_.mode) c.pipeline.mode = parse_mode(*opts_.mode);
    if (opts_.threads) c.pipeline.forest.threads = *opts_.threads;
    return c;
  }

  Dataset input(const AppConfig& c, std::size_t k = 0) const {
    if (opts_.inputs.size() <= k) throw ValidationError("--input is required");
    return load_csv(opts_.inputs[k], c.csv_options(k));
  }

  fs::path out_path(const std::string& name) const { return fs::path(opts_.out_dir) / name; }

  void log(const std::string& msg) const {
    if (opts_.verbosity > 0) err_ << msg << '\n';
  }

  void write(const std::string& name, std::string_view content) const {
    write_atomic(out_path(name), content);
    log("wrote " + out_path(name).string());
  }

  int generate(const SyntheticSpec& spec) const {
    const auto d = generate_synthetic(spec);
    write("synthetic.csv", to_csv(d));
    const auto s = summarize(d);
    out_ << "generated " << d.rows() << " rows x " << d.cols() << " features, imbalance ratio "
         << fixed(s.imbalance_ratio, 2) << '\n';
    return kSuccess;
  }

  int balance() const {
    const auto c = config();
    const auto d = input(c);
    auto smote = c.pipeline.smote;
    smote.seed = derive_seed(c.pipeline.seed, 3);
    const auto balanced = c.pipeline.smote_enabled ? smote_oversample(d, smote) : d;
    write("balanced.csv", to_csv(balanced, true));
    const auto s = summarize(balanced);
    out_ << "balanced: " << s.n_majority << " majority / " << s.n_minority << " minority, "
         << balanced.count_synthetic() << " synthetic rows\n";
    return kSuccess;
  }

  int train() const {
    const auto c = config();
    auto d = drop_constant_features(input(c));
    if (c.pipeline.smote_enabled) {
      auto smote = c.pipeline.smote;
      smote.seed = derive_seed(c.pipeline.seed, 3);
      d = smote_oversample(d, smote);
    }
    auto params = c.pipeline.forest;
    params.seed = derive_seed(c.pipeline.seed, 2);
    const auto model = train_forest(d, params);
    write("model.json", to_json(model).dump(2) + "\n");
    out_ << "trained " << model.n_trees() << " trees on " << d.rows() << " rows, "
         << d.cols() << " features\n";
    return kSuccess;
  }

  int evaluate(const std::string& model_path) const {
    const auto model = read_model(model_path);
    CsvOptions options;
    if (!opts_.config.empty()) {
      options = config().csv_options();
    } else {
      options.target_name = model.target_name;
      options.positive_label = model.target_labels[1];
    }
    if (opts_.inputs.empty()) throw ValidationError("--input is required");
    const auto data = align_to_model(load_csv(opts_.inputs.front(), options), model);
    const auto scores = predict_proba(model, data);
    std::vector<Label> predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= 0.5 ? 1 : 0;
    const auto conf = confusion(data.labels(), predicted);
    const auto roc = analyze_roc(scores, data.labels());
    auto opt = [](const std::optional<double>& v) -> json {
      return v ? json(*v) : json(nullptr);
    };
    const json report = {{"technique", model.target_name},
                         {"rows", data.rows()},
                         {"accuracy", accuracy(conf)},
                         {"precision", opt(precision(conf))},
                         {"recall", opt(recall(conf))},
                         {"auc", roc.auc},
                         {"auch", roc.auch},
                         {"confusion",
                          {{"tp", conf.tp}, {"fp", conf.fp}, {"tn", conf.tn}, {"fn", conf.fn}}}};
    write("evaluation.json", report.dump(2) + "\n");
    write("roc.csv", roc_to_csv(roc));
    out_ << "accuracy " << fixed(accuracy(conf), 3) << ", AUC " << fixed(roc.auc, 3) << '\n';
    return kSuccess;
  }

  int run_experiment() const {
    const auto c = config();
    if (opts_.inputs.empty()) throw ValidationError("--input is required");
    if (c.targets.size() > 1 && c.targets.size() != opts_.inputs.size())
      throw ValidationError("config lists " + std::to_string(c.targets.size()) +
                            " targets for " + std::to_string(opts_.inputs.size()) + " inputs");
    std::vector<Dataset> datasets;
    std::vector<PipelineConfig> configs;
    for (std::size_t k = 0; k < opts_.inputs.size(); ++k) {
      datasets.push_back(input(c, k));
      auto p = c.pipeline;
      p.target_name = datasets.back().target_name();
      configs.push_back(p);
    }
    const auto start = std::chrono::steady_clock::now();
    const auto report = run_pipeline(datasets, configs);
    log("pipeline finished in " +
        std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()) +
        " s");

    write("report.json", to_json(report).dump(2) + "\n");
    for (std::size_t k = 0; k < report.techniques.size(); ++k) {
      const auto& t = report.techniques[k];
      const std::string suffix = report.techniques.size() == 1 ? "" : "_" + sanitize(t.technique);
      write("roc_imbalanced" + suffix + ".csv", roc_to_csv(t.imbalanced.roc));
      write("roc_balanced" + suffix + ".csv", roc_to_csv(t.balanced.roc));
      write("roc_hulls" + suffix + ".svg",
            render_hulls_svg(t.imbalanced.roc, t.balanced.roc, "ROC convex hulls: " + t.technique));
      out_ << t.technique << ": AUC " << fixed(t.imbalanced.metrics.auc, 3) << " -> "
           << fixed(t.balanced.metrics.auc, 3) << ", accuracy "
           << fixed(t.imbalanced.metrics.accuracy, 3) << " -> "
           << fixed(t.balanced.metrics.accuracy, 3) << ", hull dominance "
           << to_string(t.hull_verdict) << '\n';
    }
    return kSuccess;
  }

  int score() const {
    const auto c = config();
    const auto d = drop_constant_features(input(c));
    const auto& methods = c.pipeline.filter.methods;
    if (methods.size() == 1) {
      write(std::string("scores_") + to_string(methods.front()) + ".csv",
            to_csv(score_all(d, methods.front())));
      return kSuccess;
    }
    FilterSelectionConfig fc;
    fc.methods = methods;
    fc.top_k = std::min(c.pipeline.filter.top_k, d.cols());
    fc.mode = c.pipeline.mode;
    fc.test_fraction = c.pipeline.test_fraction;
    fc.stratified_split = c.pipeline.stratified_split;
    fc.smote_enabled = c.pipeline.smote_enabled;
    fc.smote = c.pipeline.smote;
    fc.forest = c.pipeline.forest;
    fc.seed = c.pipeline.seed;
    const auto selection = select_best_filter(d, fc);
    for (const auto& [method, table] : selection.tables)
      write(std::string("scores_") + to_string(method) + ".csv", to_csv(table));
    std::string marker = std::string(to_string(selection.best)) + "\n";
    write("best_method.txt", marker);
    for (const auto& [method, area] : selection.auch)
      out_ << to_string(method) << ": AUCH " << fixed(area, 4) << '\n';
    out_ << "best filter: " << to_string(selection.best) << '\n';
    return kSuccess;
  }

  int recommend(const std::string& model_path, const std::string& scores_path,
                const std::string& context_path, std::optional<double> threshold) const {
    if (!threshold && !opts_.config.empty()) threshold = config().pipeline.recommendation_threshold;
    if (!threshold)
      throw ValidationError("a recommendation threshold is required (--threshold or config)");
    const auto model = read_model(model_path);
    const auto scores = parse_score_csv(read_text(scores_path), FilterMethod::MutualInfo);
    const auto record = read_context(context_path);
    const auto row = encode_record(record, model);
    const Prediction prediction{model.target_name, predict_proba(model, row)};
    const auto set = form_recommendations(scores, prediction, *threshold);
    write("recommendations.json", to_json(set).dump(2) + "\n");

    out_ << "predicted: " << prediction.technique << " (p = " << fixed(prediction.probability, 3)
         << ", " << (prediction.probability >= 0.5 ? "recommended" : "not recommended") << ")\n";
    out_ << "additional techniques (score > " << *threshold << "):\n";
    for (const auto& e : set.collaborative) out_ << "  " << e.feature << "  " << e.score << '\n';
    out_ << "driving context factors (score > " << *threshold << "):\n";
    for (const auto& e : set.content_based) out_ << "  " << e.feature << "  " << e.score << '\n';
    return kSuccess;
  }

 private:
  static std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  static RandomForestModel read_model(const std::string& path) {
    json j;
    try {
      j = json::parse(read_text(path));
    } catch (const json::exception& e) {
      throw ValidationError("model '" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
  }

  // Header row plus exactly one data row.
  static std::vector<std::pair<std::string, std::string>> read_context(const std::string& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
    if (lines.size() != 2)
      throw ValidationError("context file must hold a header and exactly one row");
    const auto header = csv::split_record(lines[0]);
    const auto values = csv::split_record(lines[1]);
    if (header.size() != values.size())
      throw ValidationError("context row has " + std::to_string(values.size()) +
                            " fields but header has " + std::to_string(header.size()));
    std::vector<std::pair<std::string, std::string>> record;
    for (std::size_t k = 0; k < header.size(); ++k) record.emplace_back(header[k], values[k]);
    return record;
  }

  static std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name) out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    return out;
  }

  const CommonOptions& opts_;
  std::ostream& out_;
  std::ostream& err_;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_input) {
  cmd->add_option("--config", o.config, "Experiment configuration (JSON)");
  auto* input = cmd->add_option("--input", o.inputs, "Input CSV (repeatable for run)");
  if (needs_input) input->required();
  cmd->add_option("--out-dir", o.out_dir, "Directory for output files");
  cmd->add_option("--seed", o.seed, "Override the master seed");
  cmd->add_option("--mode", o.mode, "Pipeline mode")->check(CLI::IsMember({"paper", "sound"}));
  cmd->add_option("--threads", o.threads, "Worker threads for forest training");
  cmd->add_flag("-v,--verbose", o.verbosity, "Log progress to stderr");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Elicitation-technique recommender: SMOTE balancing, random forests, ROC hulls", "elicit"};
  cli.require_subcommand(1);
  CommonOptions opts;

  auto* balance = cli.add_subcommand("balance", "Oversample the minority class with SMOTE");
  add_common(balance, opts, true);
  auto* train = cli.add_subcommand("train", "Train a random forest and write model.json");
  add_common(train, opts, true);
  auto* evaluate = cli.add_subcommand("evaluate", "Score a labelled CSV with a trained model");
  add_common(evaluate, opts, true);
  std::string model_path, scores_path, context_path;
  evaluate->add_option("--model", model_path, "Model JSON from `train`")->required();
  auto* run_cmd = cli.add_subcommand("run", "Imbalanced vs SMOTE-balanced experiment");
  add_common(run_cmd, opts, true);
  auto* score = cli.add_subcommand("score", "Filter-based feature scoring");
  add_common(score, opts, true);
  auto* recommend = cli.add_subcommand("recommend", "Form recommendations for one project");
  add_common(recommend, opts, false);
  std::optional<double> threshold;
  recommend->add_option("--model", model_path, "Model JSON from `train`")->required();
  recommend->add_option("--scores", scores_path, "Score CSV from `score`")->required();
  recommend->add_option("--context", context_path, "CSV with a header and one project row")
      ->required();
  recommend->add_option("--threshold", threshold, "Minimum feature score (strict)");

  auto* generate = cli.add_subcommand("generate", "Write a synthetic dataset (target column `target`)");
  SyntheticSpec spec;
  generate->add_option("--n-majority", spec.n_majority, "Majority-class rows");
  generate->add_option("--n-minority", spec.n_minority, "Minority-class rows");
  generate->add_option("--features", spec.p, "Feature count");
  generate->add_option("--informative", spec.n_informative, "Class-dependent features");
  generate->add_option("--levels", spec.levels_per_feature, "Levels per feature");
  generate->add_option("--skew", spec.skew, "Class-conditional level shift");
  generate->add_option("--seed", spec.seed, "Generator seed");
  generate->add_option("--out-dir", opts.out_dir, "Directory for synthetic.csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    cli.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    Runner runner(opts, out, err);
    if (*generate) return runner.generate(spec);
    if (*balance) return runner.balance();
    if (*train) return runner.train();
    if (*evaluate) return runner.evaluate(model_path);
    if (*run_cmd) return runner.run_experiment();
    if (*score) return runner.score();
    if (*recommend) return runner.recommend(model_path, scores_path, context_path, threshold);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kValidationError;
}

}  // namespace elicit::app
