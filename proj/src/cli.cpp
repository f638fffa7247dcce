#include "darkpat/cli.hpp"

#include "darkpat/corpus.hpp"
#include "darkpat/csv.hpp"
#include "darkpat/error.hpp"
#include "darkpat/experiments.hpp"
#include "darkpat/fixture.hpp"
#include "darkpat/hashing.hpp"
#include "darkpat/metrics.hpp"
#include "darkpat/model.hpp"
#include "darkpat/vectorizer.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace darkpat::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct CommonOptions {
  double lambda = 1.0;
  std::optional<double> learning_rate;
  std::size_t max_iters = 5000;
  double tol = 1e-7;
  double threshold = 0.5;
  int ngram_min = 1;
  int ngram_max = 2;
  std::string max_features = "all";
  std::size_t min_df = 1;
  std::string weighting = "tfidf";
  bool no_strip_html = false;
  bool no_lowercase = false;
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  std::size_t folds = 5;
  std::size_t jobs = 1;
};

std::optional<std::size_t> parse_max_features(const std::string& text) {
  if (text == "all") return std::nullopt;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0 || v == 0) {
    throw ValidationError("max_features must be a positive integer or 'all', got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

std::pair<int, int> parse_ngram_range(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const int n = std::stoi(text);
      return {n, n};
    }
    return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw ValidationError("n-gram range must look like 1-2, got '" + text + "'");
  }
}

VectorizerConfig vectorizer_config(const CommonOptions& o) {
  VectorizerConfig v;
  v.ngram_min = o.ngram_min;
  v.ngram_max = o.ngram_max;
  v.max_features = parse_max_features(o.max_features);
  v.min_df = o.min_df;
  v.weighting = parse_weighting(o.weighting);
  v.preprocessing.strip_html = !o.no_strip_html;
  v.preprocessing.lowercase = !o.no_lowercase;
  v.validate();
  return v;
}

TrainConfig train_config(const CommonOptions& o, Weighting weighting) {
  TrainConfig t;
  t.lambda = o.lambda;
  t.learning_rate = o.learning_rate.value_or(default_learning_rate(weighting));
  t.max_iters = o.max_iters;
  t.tol = o.tol;
  t.threshold = o.threshold;
  t.seed = o.seed;
  t.validate();
  return t;
}

SplitSpec split_spec(const CommonOptions& o) { return {o.train_fraction, o.seed, true}; }

void add_vectorizer_flags(CLI::App& app, CommonOptions& o) {
  app.add_option("--ngram-min", o.ngram_min, "Smallest n-gram length")->capture_default_str();
  app.add_option("--ngram-max", o.ngram_max, "Largest n-gram length")->capture_default_str();
  app.add_option("--max-features", o.max_features, "Vocabulary cap, or 'all'")->capture_default_str();
  app.add_option("--min-df", o.min_df, "Minimum document frequency")->capture_default_str();
  app.add_option("--weighting", o.weighting, "counts or tfidf")
      ->check(CLI::IsMember({"counts", "tfidf"}))
      ->capture_default_str();
  app.add_flag("--no-strip-html", o.no_strip_html, "Keep text between angle brackets");
  app.add_flag("--no-lowercase", o.no_lowercase, "Keep letter case");
}

void add_train_flags(CLI::App& app, CommonOptions& o) {
  app.add_option("--lambda", o.lambda, "L2 regularization strength")->capture_default_str();
  app.add_option("--lr", o.learning_rate, "Learning rate (default 0.1 for tfidf, 0.01 for counts)");
  app.add_option("--max-iters", o.max_iters, "Gradient descent iteration cap")->capture_default_str();
  app.add_option("--tol", o.tol, "Stop when the loss changes by less than this")->capture_default_str();
  app.add_option("--threshold", o.threshold, "Decision threshold on the probability")->capture_default_str();
}

void add_split_flags(CLI::App& app, CommonOptions& o) {
  app.add_option("--train-fraction", o.train_fraction, "Stratified train share")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for splits and folds")->capture_default_str();
}

Json vectorizer_json(const VectorizerConfig& v) {
  Json j;
  j["ngram_min"] = v.ngram_min;
  j["ngram_max"] = v.ngram_max;
  j["max_features"] = v.max_features ? Json(*v.max_features) : Json(nullptr);
  j["min_df"] = v.min_df;
  j["weighting"] = weighting_name(v.weighting);
  j["strip_html"] = v.preprocessing.strip_html;
  j["lowercase"] = v.preprocessing.lowercase;
  return j;
}

Json train_json(const TrainConfig& t) {
  Json j;
  j["lambda"] = t.lambda;
  j["learning_rate"] = t.learning_rate;
  j["max_iters"] = t.max_iters;
  j["tol"] = t.tol;
  j["threshold"] = t.threshold;
  return j;
}

Json split_json(const SplitSpec& s) {
  Json j;
  j["train_fraction"] = s.train_fraction;
  j["stratified"] = s.stratified;
  return j;
}

// Collects what a run read and wrote, then emits the manifest.
class Manifest {
 public:
  explicit Manifest(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  Json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }

  std::string render() const {
    Json j;
    j["command"] = command_;
    j["config"] = config_;
    j["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    j["inputs"] = files(inputs_);
    j["outputs"] = files(outputs_);
    j["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
    return j.dump(2) + "\n";
  }

  void write(const fs::path& path) const { write_text(path, render()); }

  static void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  }

 private:
  static Json files(const std::vector<fs::path>& paths) {
    Json arr = Json::array();
    for (const auto& p : paths) {
      Json f;
      f["path"] = p.generic_string();
      f["sha256"] = sha256_file(p);
      arr.push_back(f);
    }
    return arr;
  }

  std::string command_;
  std::chrono::steady_clock::time_point start_;
  Json config_ = Json::object();
  std::optional<std::uint64_t> seed_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create report directory '" + dir.string() + "'");
}

// Writes `fn(stream)` to dir/name and records it in the manifest.
template <typename Fn>
fs::path emit(Manifest& manifest, const fs::path& dir, const std::string& name, Fn fn) {
  std::ostringstream buffer;
  fn(buffer);
  const auto path = dir / name;
  Manifest::write_text(path, buffer.str());
  manifest.output(path);
  return path;
}

Corpus select_subset(const Corpus& corpus, const std::string& subset, const SplitSpec& spec) {
  if (subset == "all") return corpus;
  auto [train, test] = split(corpus, spec);
  return subset == "train" ? train : test;
}

EvaluationReport evaluate_model(const TrainedModel& model, const Corpus& corpus) {
  std::vector<DocumentPrediction> preds;
  preds.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    const double p = score_text(model, doc.raw_text);
    preds.push_back({doc.id, doc.label, p, decide(p, model.train.threshold)});
  }
  return evaluate_scores(std::move(preds));
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::vector<std::string>& items, Fn fn) {
  std::vector<T> out;
  for (const auto& item : items) out.push_back(fn(item));
  return out;
}

std::string kind_of(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const IntegrityError*>(&e)) return "integrity";
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergence";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  return "internal";
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dark-pattern text classifier: bag-of-words features and L2 logistic regression", "darkpat"};
  app.require_subcommand(1);
  CommonOptions o;

  std::string data_path, model_path, out_dir, manifest_path, subset = "all";
  std::vector<std::string> texts;

  auto* train_cmd = app.add_subcommand("train", "Fit the vectorizer and model on the training split");
  train_cmd->add_option("--data", data_path, "Dataset CSV (text,label)")->required();
  train_cmd->add_option("--model", model_path, "Output model JSON")->required();
  train_cmd->add_option("--manifest", manifest_path, "Manifest path (default <model>.manifest.json)");
  add_vectorizer_flags(*train_cmd, o);
  add_train_flags(*train_cmd, o);
  add_split_flags(*train_cmd, o);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a dataset and write the evaluation report");
  eval_cmd->add_option("--model", model_path, "Model JSON")->required();
  eval_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  eval_cmd->add_option("--out", out_dir, "Report directory")->required();
  eval_cmd->add_option("--subset", subset, "all, train or test portion of the split")
      ->check(CLI::IsMember({"all", "train", "test"}))
      ->capture_default_str();
  add_split_flags(*eval_cmd, o);

  auto* predict_cmd = app.add_subcommand("predict", "Score text given as arguments or one line per input");
  predict_cmd->add_option("--model", model_path, "Model JSON")->required();
  predict_cmd->add_option("--text", texts, "Text to score (repeatable); stdin lines otherwise");
  predict_cmd->add_option("--manifest", manifest_path, "Manifest path (default: stderr)");

  auto* cv_cmd = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  cv_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  cv_cmd->add_option("--out", out_dir, "Report directory")->required();
  cv_cmd->add_option("--folds", o.folds, "Number of folds")->capture_default_str();
  cv_cmd->add_option("--seed", o.seed, "Fold seed")->capture_default_str();
  add_vectorizer_flags(*cv_cmd, o);
  add_train_flags(*cv_cmd, o);

  std::vector<std::string> grid_lambdas{"0.01", "0.1", "1", "10"}, grid_ngrams{"1-2"}, grid_caps{"all"},
      grid_weightings{"tfidf"};
  std::string best_model_path;
  auto* grid_cmd = app.add_subcommand("gridsearch", "Grid search by cross-validation on the training split");
  grid_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  grid_cmd->add_option("--out", out_dir, "Report directory")->required();
  grid_cmd->add_option("--lambdas", grid_lambdas, "Lambda values")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--ngram-ranges", grid_ngrams, "Ranges like 1-1,1-2")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--max-features-options", grid_caps, "Caps, 'all' for none")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--weightings", grid_weightings, "counts and/or tfidf")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--folds", o.folds, "Number of folds")->capture_default_str();
  grid_cmd->add_option("--jobs", o.jobs, "Parallel grid cells")->capture_default_str();
  grid_cmd->add_option("--best-model", best_model_path, "Train the best cell on the training split and save it");
  add_split_flags(*grid_cmd, o);
  grid_cmd->add_option("--min-df", o.min_df, "Minimum document frequency")->capture_default_str();
  grid_cmd->add_flag("--no-strip-html", o.no_strip_html, "Keep text between angle brackets");
  grid_cmd->add_flag("--no-lowercase", o.no_lowercase, "Keep letter case");
  add_train_flags(*grid_cmd, o);

  std::size_t top_k = 20;
  bool sensitivity = false;
  std::vector<std::string> sens_lambdas{"0", "0.1", "1", "10", "100"}, sens_ngrams{"1-1", "1-2", "1-3"},
      sens_caps{"100", "1000", "all"}, sens_weightings{"counts", "tfidf"};
  auto* report_cmd = app.add_subcommand("report", "Feature importance, misclassifications, sensitivity tables");
  report_cmd->add_option("--model", model_path, "Model JSON")->required();
  report_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  report_cmd->add_option("--out", out_dir, "Report directory")->required();
  report_cmd->add_option("--top-k", top_k, "Number of top coefficients")->capture_default_str();
  report_cmd->add_option("--subset", subset, "all, train or test portion of the split")
      ->check(CLI::IsMember({"all", "train", "test"}))
      ->capture_default_str();
  report_cmd->add_flag("--sensitivity", sensitivity, "Also run one-at-a-time sensitivity sweeps");
  report_cmd->add_option("--sens-lambdas", sens_lambdas, "Lambda sweep")->delimiter(',')->capture_default_str();
  report_cmd->add_option("--sens-ngram-ranges", sens_ngrams, "n-gram sweep")->delimiter(',')->capture_default_str();
  report_cmd->add_option("--sens-max-features", sens_caps, "Vocabulary cap sweep")->delimiter(',')->capture_default_str();
  report_cmd->add_option("--sens-weightings", sens_weightings, "Weighting sweep")->delimiter(',')->capture_default_str();
  report_cmd->add_option("--folds", o.folds, "Folds for the sensitivity sweeps")->capture_default_str();
  report_cmd->add_option("--jobs", o.jobs, "Parallel sensitivity points")->capture_default_str();
  add_split_flags(*report_cmd, o);

  FixtureSpec fixture;
  std::string fixture_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic planted-phrase corpus as CSV");
  synth_cmd->add_option("--out", fixture_out, "Output CSV")->required();
  synth_cmd->add_option("--documents", fixture.documents, "Number of documents")->capture_default_str();
  synth_cmd->add_option("--seed", fixture.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--fidelity", fixture.fidelity, "Chance a planted phrase matches the label")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: arguments: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    if (train_cmd->parsed()) {
      Manifest manifest("train");
      const auto v = vectorizer_config(o);
      const auto t = train_config(o, v.weighting);
      const auto spec = split_spec(o);
      const auto corpus = load_corpus(data_path);
      manifest.input(data_path);
      const auto [train_part, test_part] = split(corpus, spec);
      const auto model = train_on_corpus(apply_preprocessing(train_part, v.preprocessing), v, t);
      save_model(model_path, model);
      manifest.output(model_path);
      manifest.set_seed(o.seed);
      manifest.config()["vectorizer"] = vectorizer_json(v);
      manifest.config()["train"] = train_json(t);
      manifest.config()["split"] = split_json(spec);
      manifest.config()["train_documents"] = train_part.size();
      manifest.config()["test_documents"] = test_part.size();
      manifest.write(manifest_path.empty() ? model_path + ".manifest.json" : manifest_path);
      out << "trained: iterations=" << model.iterations() << " final_loss=" << format_double(model.final_loss())
          << " vocabulary=" << model.vocab.size() << " train_documents=" << train_part.size() << '\n';
      return kExitOk;
    }

    if (eval_cmd->parsed()) {
      Manifest manifest("evaluate");
      const auto model = load_model(model_path);
      const auto corpus = load_corpus(data_path);
      manifest.input(model_path);
      manifest.input(data_path);
      const auto spec = split_spec(o);
      const auto docs = select_subset(corpus, subset, spec);
      if (docs.empty()) throw ValidationError("nothing to evaluate: dataset is empty");
      const auto report = evaluate_model(model, docs);
      const fs::path dir = out_dir;
      ensure_dir(dir);
      emit(manifest, dir, "summary.txt", [&](std::ostream& s) { write_summary_text(s, report); });
      emit(manifest, dir, "summary.csv", [&](std::ostream& s) { write_summary_csv(s, report); });
      emit(manifest, dir, "confusion.csv", [&](std::ostream& s) { write_confusion_csv(s, report.confusion); });
      emit(manifest, dir, "roc.csv", [&](std::ostream& s) { write_roc_csv(s, report.roc); });
      emit(manifest, dir, "predictions.csv",
           [&](std::ostream& s) { write_predictions_csv(s, report.per_document); });
      manifest.set_seed(o.seed);
      manifest.config()["subset"] = subset;
      manifest.config()["split"] = split_json(spec);
      manifest.write(dir / "manifest.json");
      write_summary_text(out, report);
      return kExitOk;
    }

    if (predict_cmd->parsed()) {
      Manifest manifest("predict");
      const auto model = load_model(model_path);
      manifest.input(model_path);
      auto score_line = [&](std::string line) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const double p = score_text(model, line);
        out << format_double(p) << '\t' << label_name(decide(p, model.train.threshold)) << '\n';
      };
      std::size_t lines = 0;
      if (!texts.empty()) {
        for (const auto& t : texts) score_line(t), ++lines;
      } else {
        std::string line;
        while (std::getline(in, line)) score_line(line), ++lines;
      }
      manifest.config()["lines"] = lines;
      manifest.config()["source"] = texts.empty() ? "stdin" : "arguments";
      if (manifest_path.empty()) {
        err << manifest.render();
      } else {
        manifest.write(manifest_path);
      }
      return kExitOk;
    }

    if (cv_cmd->parsed()) {
      Manifest manifest("cv");
      const auto v = vectorizer_config(o);
      const auto t = train_config(o, v.weighting);
      const auto corpus = load_corpus(data_path);
      manifest.input(data_path);
      const auto result = k_fold_cv(corpus, v, t, o.folds, o.seed);
      const fs::path dir = out_dir;
      ensure_dir(dir);
      emit(manifest, dir, "cv_folds.csv", [&](std::ostream& s) { write_folds_csv(s, result); });
      emit(manifest, dir, "cv_summary.csv", [&](std::ostream& s) {
        write_results_header(s);
        write_result_row(s, "cv", std::to_string(o.folds), result);
      });
      manifest.set_seed(o.seed);
      manifest.config()["vectorizer"] = vectorizer_json(v);
      manifest.config()["train"] = train_json(t);
      manifest.config()["folds"] = o.folds;
      manifest.write(dir / "manifest.json");
      out << "cv: folds=" << o.folds << " mean_accuracy=" << format_double(result.mean_accuracy)
          << " mean_f1=" << format_double(result.mean_f1) << " std_f1=" << format_double(result.std_f1) << '\n';
      return kExitOk;
    }

    if (grid_cmd->parsed()) {
      Manifest manifest("gridsearch");
      ParamGrid grid;
      grid.lambdas = parse_list<double>(grid_lambdas, [](const std::string& s) {
        try {
          return std::stod(s);
        } catch (const std::exception&) {
          throw ValidationError("bad lambda '" + s + "'");
        }
      });
      grid.ngram_ranges = parse_list<std::pair<int, int>>(grid_ngrams, parse_ngram_range);
      grid.max_features_options = parse_list<std::optional<std::size_t>>(grid_caps, parse_max_features);
      grid.weightings = parse_list<Weighting>(grid_weightings, [](const std::string& s) { return parse_weighting(s); });

      auto base_v = vectorizer_config(o);
      auto base_t = train_config(o, base_v.weighting);
      const auto spec = split_spec(o);
      const auto corpus = load_corpus(data_path);
      manifest.input(data_path);
      const auto [train_part, test_part] = split(corpus, spec);
      GridSearchOptions options{o.folds, o.seed, o.learning_rate, o.jobs};
      const auto result = grid_search(train_part, grid, base_v, base_t, options);
      const fs::path dir = out_dir;
      ensure_dir(dir);
      emit(manifest, dir, "grid_results.csv", [&](std::ostream& s) { write_grid_csv(s, result); });

      const auto& best = result.best_result();
      if (!best_model_path.empty()) {
        const auto model = train_on_corpus(apply_preprocessing(train_part, best.vectorizer.preprocessing),
                                           best.vectorizer, best.train);
        save_model(best_model_path, model);
        manifest.output(best_model_path);
      }
      manifest.set_seed(o.seed);
      manifest.config()["split"] = split_json(spec);
      manifest.config()["folds"] = o.folds;
      manifest.config()["cells"] = result.cells.size();
      manifest.config()["best_cell"] = result.best;
      manifest.config()["best_vectorizer"] = vectorizer_json(best.vectorizer);
      manifest.config()["best_train"] = train_json(best.train);
      manifest.write(dir / "manifest.json");
      out << "best: cell=" << result.best << " lambda=" << best.train.lambda
          << " ngram=" << describe_ngram(best.vectorizer.ngram_min, best.vectorizer.ngram_max)
          << " max_features=" << describe_max_features(best.vectorizer.max_features)
          << " weighting=" << weighting_name(best.vectorizer.weighting)
          << " mean_f1=" << format_double(best.mean_f1) << '\n';
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      Manifest manifest("report");
      const auto model = load_model(model_path);
      const auto corpus = load_corpus(data_path);
      manifest.input(model_path);
      manifest.input(data_path);
      const auto spec = split_spec(o);
      const auto docs = select_subset(corpus, subset, spec);
      const fs::path dir = out_dir;
      ensure_dir(dir);
      const auto importance = feature_importance(model, top_k);
      emit(manifest, dir, "feature_importance.csv", [&](std::ostream& s) { write_importance_csv(s, importance); });
      emit(manifest, dir, "vocabulary.csv", [&](std::ostream& s) { write_vocabulary_csv(s, model.vocab); });
      const auto mistakes = misclassification_report(model, docs);
      emit(manifest, dir, "misclassified.csv", [&](std::ostream& s) { write_misclassification_csv(s, mistakes); });
      if (sensitivity) {
        SensitivityAxes axes;
        axes.params.lambdas = parse_list<double>(sens_lambdas, [](const std::string& s) {
          try {
            return std::stod(s);
          } catch (const std::exception&) {
            throw ValidationError("bad lambda '" + s + "'");
          }
        });
        axes.params.ngram_ranges = parse_list<std::pair<int, int>>(sens_ngrams, parse_ngram_range);
        axes.params.max_features_options = parse_list<std::optional<std::size_t>>(sens_caps, parse_max_features);
        axes.params.weightings =
            parse_list<Weighting>(sens_weightings, [](const std::string& s) { return parse_weighting(s); });
        axes.preprocessings = {{true, true}, {true, false}, {false, true}, {false, false}};
        const auto rows =
            sensitivity_analysis(docs, axes, model.vectorizer, model.train, o.folds, o.seed, o.jobs);
        emit(manifest, dir, "sensitivity.csv", [&](std::ostream& s) { write_sensitivity_csv(s, rows); });
      }
      manifest.set_seed(o.seed);
      manifest.config()["subset"] = subset;
      manifest.config()["top_k"] = top_k;
      manifest.config()["sensitivity"] = sensitivity;
      manifest.config()["folds"] = o.folds;
      manifest.write(dir / "manifest.json");
      out << "report: top_terms=" << importance.size() << " misclassified=" << mistakes.size() << '\n';
      return kExitOk;
    }

    if (synth_cmd->parsed()) {
      Manifest manifest("synth");
      const auto corpus = make_fixture(fixture);
      std::ostringstream buffer;
      buffer << "text,label\n";
      for (const auto& d : corpus.documents()) {
        buffer << csv::escape(d.raw_text) << ',' << to_int(d.label) << '\n';
      }
      Manifest::write_text(fixture_out, buffer.str());
      manifest.output(fixture_out);
      manifest.set_seed(fixture.seed);
      manifest.config()["documents"] = fixture.documents;
      manifest.config()["fidelity"] = fixture.fidelity;
      manifest.config()["phrases_per_doc"] = fixture.phrases_per_doc;
      manifest.write(fixture_out + ".manifest.json");
      out << "synth: documents=" << corpus.size() << " dark=" << corpus.positive_count()
          << " not_dark=" << corpus.negative_count() << '\n';
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: io: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << kind_of(e) << ": " << e.what() << '\n';
    return kExitPipeline;
  }
  return kExitPipeline;
}

}  // namespace darkpat::cli
