#include "darkpat/experiments.hpp"

#include "darkpat/csv.hpp"
#include "darkpat/error.hpp"
#include "darkpat/random.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <numeric>
#include <tuple>

namespace darkpat {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Re-throws `e` with a prefix, keeping the error category.
[[noreturn]] void rethrow_annotated(const std::string& where) {
  try {
    throw;
  } catch (const DivergenceError& e) {
    throw DivergenceError(where + ": " + e.what(), e.iteration());
  } catch (const IoError& e) {
    throw IoError(where + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const IntegrityError& e) {
    throw IntegrityError(where + ": " + e.what());
  } catch (const Error& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

std::string describe_config(const VectorizerConfig& v, const TrainConfig& t) {
  return "lambda=" + shortest(t.lambda) + " ngram=" + describe_ngram(v.ngram_min, v.ngram_max) +
         " max_features=" + describe_max_features(v.max_features) +
         " weighting=" + std::string(weighting_name(v.weighting));
}

EvaluationReport evaluate_model(const TrainedModel& model, const Corpus& preprocessed) {
  std::vector<DocumentPrediction> preds;
  preds.reserve(preprocessed.size());
  for (const auto& doc : preprocessed.documents()) {
    const double p = predict_proba(model, transform(doc.clean_text, model.vocab, model.vectorizer));
    preds.push_back({doc.id, doc.label, p, decide(p, model.train.threshold)});
  }
  return evaluate_scores(std::move(preds));
}

}  // namespace

void ParamGrid::validate() const {
  if (lambdas.empty() || ngram_ranges.empty() || max_features_options.empty() || weightings.empty()) {
    throw ValidationError("parameter grid has an empty axis");
  }
}

std::vector<std::size_t> make_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs k >= 2");
  if (corpus.positive_count() < k || corpus.negative_count() < k) {
    throw ValidationError("each class needs at least k=" + std::to_string(k) + " documents (have " +
                          std::to_string(corpus.positive_count()) + " dark, " +
                          std::to_string(corpus.negative_count()) + " not_dark)");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (corpus[i].label == Label::Dark ? pos : neg).push_back(i);
  }
  SplitMix64 rng(seed);
  seeded_shuffle(std::span<std::size_t>(pos), rng);
  seeded_shuffle(std::span<std::size_t>(neg), rng);

  std::vector<std::size_t> fold_of(corpus.size());
  std::size_t position = 0;
  for (auto i : pos) fold_of[i] = position++ % k;
  for (auto i : neg) fold_of[i] = position++ % k;
  return fold_of;
}

CvResult cross_validate(const Corpus& corpus, const std::vector<std::size_t>& fold_of, std::size_t k,
                        const VectorizerConfig& vconfig, const TrainConfig& tconfig,
                        const FoldObserver& observer) {
  if (fold_of.size() != corpus.size()) throw ValidationError("fold assignment does not cover the corpus");
  vconfig.validate();
  tconfig.validate();
  const auto cleaned = apply_preprocessing(corpus, vconfig.preprocessing);

  CvResult result;
  result.vectorizer = vconfig;
  result.train = tconfig;
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      (fold_of[i] == fold ? test_idx : train_idx).push_back(i);
    }
    if (test_idx.empty()) throw ValidationError("fold " + std::to_string(fold) + " is empty");
    try {
      const auto model = train_on_corpus(cleaned.subset(train_idx), vconfig, tconfig);
      if (observer) observer(fold, model);
      result.per_fold.push_back(evaluate_model(model, cleaned.subset(test_idx)));
    } catch (const Error&) {
      rethrow_annotated("fold " + std::to_string(fold));
    }
  }

  double acc = 0.0, f1 = 0.0;
  for (const auto& r : result.per_fold) {
    acc += r.accuracy;
    f1 += r.f1;
  }
  const auto n = static_cast<double>(k);
  result.mean_accuracy = acc / n;
  result.mean_f1 = f1 / n;
  double var = 0.0;
  for (const auto& r : result.per_fold) var += (r.f1 - result.mean_f1) * (r.f1 - result.mean_f1);
  result.std_f1 = std::sqrt(var / n);
  return result;
}

CvResult k_fold_cv(const Corpus& corpus, const VectorizerConfig& vconfig, const TrainConfig& tconfig,
                   std::size_t k, std::uint64_t seed) {
  return cross_validate(corpus, make_folds(corpus, k, seed), k, vconfig, tconfig);
}

bool prefer_cell(const CvResult& a, const CvResult& b) {
  if (a.mean_f1 != b.mean_f1) return a.mean_f1 > b.mean_f1;
  if (a.train.lambda != b.train.lambda) return a.train.lambda < b.train.lambda;
  const auto cap = [](const VectorizerConfig& v) {
    return v.max_features.value_or(std::numeric_limits<std::size_t>::max());
  };
  if (cap(a.vectorizer) != cap(b.vectorizer)) return cap(a.vectorizer) < cap(b.vectorizer);
  const auto width = [](const VectorizerConfig& v) { return v.ngram_max - v.ngram_min; };
  if (width(a.vectorizer) != width(b.vectorizer)) return width(a.vectorizer) < width(b.vectorizer);
  if (a.vectorizer.ngram_min != b.vectorizer.ngram_min) return a.vectorizer.ngram_min < b.vectorizer.ngram_min;
  return a.vectorizer.weighting == Weighting::Counts && b.vectorizer.weighting == Weighting::TfIdf;
}

GridSearchResult grid_search(const Corpus& corpus, const ParamGrid& grid, const VectorizerConfig& base_vectorizer,
                             const TrainConfig& base_train, const GridSearchOptions& options) {
  grid.validate();
  const auto folds = make_folds(corpus, options.k, options.seed);

  struct Cell {
    VectorizerConfig v;
    TrainConfig t;
  };
  std::vector<Cell> cells;
  cells.reserve(grid.size());
  for (double lambda : grid.lambdas) {
    for (const auto& [lo, hi] : grid.ngram_ranges) {
      for (const auto& cap : grid.max_features_options) {
        for (auto w : grid.weightings) {
          Cell c{base_vectorizer, base_train};
          c.v.ngram_min = lo;
          c.v.ngram_max = hi;
          c.v.max_features = cap;
          c.v.weighting = w;
          c.t.lambda = lambda;
          c.t.learning_rate = options.learning_rate.value_or(default_learning_rate(w));
          cells.push_back(c);
        }
      }
    }
  }

  GridSearchResult out;
  out.cells.resize(cells.size());
  detail::parallel_for(cells.size(), options.jobs, [&](std::size_t i) {
    try {
      out.cells[i] = {i, cross_validate(corpus, folds, options.k, cells[i].v, cells[i].t)};
    } catch (const Error&) {
      rethrow_annotated("grid cell " + std::to_string(i) + " (" + describe_config(cells[i].v, cells[i].t) + ")");
    }
  });
  for (std::size_t i = 1; i < out.cells.size(); ++i) {
    if (prefer_cell(out.cells[i].result, out.cells[out.best].result)) out.best = i;
  }
  return out;
}

std::vector<ImportanceEntry> feature_importance(const TrainedModel& model, std::size_t top_k) {
  std::vector<ImportanceEntry> entries;
  entries.reserve(model.vocab.size());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    entries.push_back({model.vocab.terms()[i], model.params.weights[i]});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    const double x = std::abs(a.coefficient), y = std::abs(b.coefficient);
    return x != y ? x > y : a.term < b.term;
  });
  entries.resize(std::min(top_k, entries.size()));
  return entries;
}

std::vector<Misclassification> misclassification_report(const TrainedModel& model, const Corpus& test) {
  constexpr std::size_t kTopContributions = 5;
  std::vector<Misclassification> rows;
  for (const auto& doc : test.documents()) {
    const auto clean = preprocess(doc.raw_text, model.vectorizer.preprocessing);
    TransformStats stats;
    const auto x = transform(clean, model.vocab, model.vectorizer, &stats);
    const double p = predict_proba(model, x);
    const auto predicted = decide(p, model.train.threshold);
    if (predicted == doc.label) continue;

    Misclassification row{doc.id, doc.raw_text, doc.label, p, predicted, stats.oov_terms, {}};
    for (const auto& e : x.entries) {
      row.contributions.push_back({model.vocab.terms()[e.index], e.weight * model.params.weights[e.index]});
    }
    std::sort(row.contributions.begin(), row.contributions.end(), [](const auto& a, const auto& b) {
      const double x = std::abs(a.value), y = std::abs(b.value);
      return x != y ? x > y : a.term < b.term;
    });
    if (row.contributions.size() > kTopContributions) row.contributions.resize(kTopContributions);
    rows.push_back(std::move(row));
  }
  const double threshold = model.train.threshold;
  std::stable_sort(rows.begin(), rows.end(), [threshold](const auto& a, const auto& b) {
    return std::abs(a.score - threshold) > std::abs(b.score - threshold);
  });
  return rows;
}

std::string_view axis_name(SensitivityAxis axis) noexcept {
  switch (axis) {
    case SensitivityAxis::Lambda: return "lambda";
    case SensitivityAxis::NgramRange: return "ngram";
    case SensitivityAxis::MaxFeatures: return "max_features";
    case SensitivityAxis::Weighting: return "weighting";
    case SensitivityAxis::Preprocessing: return "preprocessing";
  }
  return "unknown";
}

std::string describe_preprocessing(const PreprocessOptions& o) {
  return std::string("strip_html=") + (o.strip_html ? "on" : "off") + " lowercase=" + (o.lowercase ? "on" : "off");
}

std::string describe_ngram(int lo, int hi) { return std::to_string(lo) + "-" + std::to_string(hi); }

std::string describe_max_features(const std::optional<std::size_t>& max_features) {
  return max_features ? std::to_string(*max_features) : std::string("all");
}

std::vector<SensitivityRow> sensitivity_analysis(const Corpus& corpus, const SensitivityAxes& axes,
                                                 const VectorizerConfig& fixed_vectorizer,
                                                 const TrainConfig& fixed_train, std::size_t k,
                                                 std::uint64_t seed, std::size_t jobs) {
  const auto folds = make_folds(corpus, k, seed);
  std::vector<SensitivityRow> rows;

  // A point that switches weighting uses that weighting's default learning
  // rate; every other point keeps the fixed configuration's rate.
  auto point = [&](SensitivityAxis axis, std::string value, VectorizerConfig v, TrainConfig t) {
    if (v.weighting != fixed_vectorizer.weighting) t.learning_rate = default_learning_rate(v.weighting);
    rows.push_back({axis, std::move(value), v, t, {}});
  };

  auto lambdas = axes.params.lambdas;
  std::sort(lambdas.begin(), lambdas.end());
  for (double l : lambdas) {
    auto t = fixed_train;
    t.lambda = l;
    point(SensitivityAxis::Lambda, shortest(l), fixed_vectorizer, t);
  }
  auto ranges = axes.params.ngram_ranges;
  std::sort(ranges.begin(), ranges.end());
  for (const auto& [lo, hi] : ranges) {
    auto v = fixed_vectorizer;
    v.ngram_min = lo;
    v.ngram_max = hi;
    point(SensitivityAxis::NgramRange, describe_ngram(lo, hi), v, fixed_train);
  }
  auto caps = axes.params.max_features_options;
  std::sort(caps.begin(), caps.end(), [](const auto& a, const auto& b) {
    return a.value_or(std::numeric_limits<std::size_t>::max()) < b.value_or(std::numeric_limits<std::size_t>::max());
  });
  for (const auto& cap : caps) {
    auto v = fixed_vectorizer;
    v.max_features = cap;
    point(SensitivityAxis::MaxFeatures, describe_max_features(cap), v, fixed_train);
  }
  auto weightings = axes.params.weightings;
  std::sort(weightings.begin(), weightings.end());
  for (auto w : weightings) {
    auto v = fixed_vectorizer;
    v.weighting = w;
    point(SensitivityAxis::Weighting, std::string(weighting_name(w)), v, fixed_train);
  }
  auto preps = axes.preprocessings;
  std::sort(preps.begin(), preps.end(), [](const auto& a, const auto& b) {
    return std::tie(a.strip_html, a.lowercase) < std::tie(b.strip_html, b.lowercase);
  });
  for (const auto& p : preps) {
    auto v = fixed_vectorizer;
    v.preprocessing = p;
    point(SensitivityAxis::Preprocessing, describe_preprocessing(p), v, fixed_train);
  }

  detail::parallel_for(rows.size(), jobs, [&](std::size_t i) {
    auto& row = rows[i];
    try {
      row.result = cross_validate(corpus, folds, k, row.vectorizer, row.train);
    } catch (const Error&) {
      rethrow_annotated("sensitivity point " + std::string(axis_name(row.axis)) + "=" + row.value);
    }
  });
  return rows;
}

void write_results_header(std::ostream& out) {
  csv::write_row(out, {"axis", "value", "lambda", "ngram", "max_features", "weighting", "mean_accuracy",
                       "mean_f1", "std_f1"});
}

void write_result_row(std::ostream& out, std::string_view axis, std::string_view value, const CvResult& r) {
  csv::write_row(out, {std::string(axis), std::string(value), shortest(r.train.lambda),
                       describe_ngram(r.vectorizer.ngram_min, r.vectorizer.ngram_max),
                       describe_max_features(r.vectorizer.max_features),
                       std::string(weighting_name(r.vectorizer.weighting)), format_double(r.mean_accuracy),
                       format_double(r.mean_f1), format_double(r.std_f1)});
}

void write_grid_csv(std::ostream& out, const GridSearchResult& result) {
  write_results_header(out);
  for (const auto& cell : result.cells) write_result_row(out, "grid", std::to_string(cell.index), cell.result);
  write_result_row(out, "best", std::to_string(result.best), result.best_result());
}

void write_sensitivity_csv(std::ostream& out, const std::vector<SensitivityRow>& rows) {
  write_results_header(out);
  for (const auto& row : rows) write_result_row(out, axis_name(row.axis), row.value, row.result);
}

void write_folds_csv(std::ostream& out, const CvResult& result) {
  csv::write_row(out, {"fold", "n", "tp", "fp", "tn", "fn", "accuracy", "precision", "recall", "f1", "auc"});
  for (std::size_t i = 0; i < result.per_fold.size(); ++i) {
    const auto& r = result.per_fold[i];
    csv::write_row(out, {std::to_string(i), std::to_string(r.confusion.total()), std::to_string(r.confusion.tp),
                         std::to_string(r.confusion.fp), std::to_string(r.confusion.tn),
                         std::to_string(r.confusion.fn), format_double(r.accuracy), format_double(r.precision),
                         format_double(r.recall), format_double(r.f1),
                         r.auc_defined ? format_double(r.auc) : std::string()});
  }
}

void write_importance_csv(std::ostream& out, const std::vector<ImportanceEntry>& entries) {
  csv::write_row(out, {"rank", "term", "coefficient"});
  for (std::size_t i = 0; i < entries.size(); ++i) {
    csv::write_row(out, {std::to_string(i + 1), entries[i].term, format_double(entries[i].coefficient)});
  }
}

void write_misclassification_csv(std::ostream& out, const std::vector<Misclassification>& rows) {
  csv::write_row(out, {"id", "text", "true_label", "score", "predicted_label", "oov_terms", "contributions"});
  for (const auto& r : rows) {
    std::string contributions;
    for (std::size_t i = 0; i < r.contributions.size(); ++i) {
      if (i) contributions += ';';
      contributions += r.contributions[i].term + ":" + format_double(r.contributions[i].value);
    }
    csv::write_row(out, {r.id, r.text, std::string(label_name(r.truth)), format_double(r.score),
                         std::string(label_name(r.predicted)), std::to_string(r.oov_terms), contributions});
  }
}

}  // namespace darkpat
