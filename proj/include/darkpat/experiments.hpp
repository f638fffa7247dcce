#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "darkpat/corpus.hpp"
#include "darkpat/metrics.hpp"
#include "darkpat/model.hpp"
#include "darkpat/vectorizer.hpp"

namespace darkpat {

struct ParamGrid {
  std::vector<double> lambdas;
  std::vector<std::pair<int, int>> ngram_ranges;
  std::vector<std::optional<std::size_t>> max_features_options;
  std::vector<Weighting> weightings;

  std::size_t size() const noexcept {
    return lambdas.size() * ngram_ranges.size() * max_features_options.size() *
           weightings.size();
  }
  // Throws ValidationError if an axis is empty.
  void validate() const;
};

struct CvResult {
  std::vector<EvaluationReport> per_fold;
  double mean_accuracy = 0.0;
  double mean_f1 = 0.0;
  double std_f1 = 0.0;  // population standard deviation over folds
  VectorizerConfig vectorizer;
  TrainConfig train;
};

// fold_of[i] is the fold of corpus document i. Positive-class positions are
// shuffled, then negative-class positions, with one SplitMix64 stream; the
// concatenation is dealt round-robin, so fold sizes and per-class fold sizes
// each differ by at most one. Throws ValidationError if a class has fewer
// than k documents.
std::vector<std::size_t> make_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// Called with each fold's model before it is evaluated.
using FoldObserver = std::function<void(std::size_t fold, const TrainedModel& model)>;

// Cross-validation over fixed fold assignments. The corpus holds raw text;
// each fold preprocesses, fits the vocabulary and trains on the other folds only.
CvResult cross_validate(const Corpus& corpus, const std::vector<std::size_t>& fold_of,
                        std::size_t k, const VectorizerConfig& vconfig,
                        const TrainConfig& tconfig, const FoldObserver& observer = {});
CvResult k_fold_cv(const Corpus& corpus, const VectorizerConfig& vconfig,
                   const TrainConfig& tconfig, std::size_t k, std::uint64_t seed);

// Learning rate per cell: keep the caller's value, or pick the weighting's
// default when the caller leaves it unset.
struct GridSearchOptions {
  std::size_t k = 5;
  std::uint64_t seed = 42;
  std::optional<double> learning_rate;
  std::size_t jobs = 1;
};

struct GridCell {
  std::size_t index = 0;
  CvResult result;
};

struct GridSearchResult {
  std::size_t best = 0;  // index into cells
  std::vector<GridCell> cells;
  const CvResult& best_result() const { return cells.at(best).result; }
};

// Cells are enumerated lambda-major: lambda, ngram range, max_features,
// weighting. `base` supplies min_df, preprocessing and the non-grid train
// settings. Best = highest mean F1; ties go to smaller lambda, then smaller
// max_features (unset counts as unlimited), then narrower n-gram range, then
// counts before tf-idf.
GridSearchResult grid_search(const Corpus& corpus, const ParamGrid& grid,
                             const VectorizerConfig& base_vectorizer,
                             const TrainConfig& base_train, const GridSearchOptions& options);

// True when a should be preferred over b under the tie rules above (means
// are compared exactly).
bool prefer_cell(const CvResult& a, const CvResult& b);

struct ImportanceEntry {
  std::string term;
  double coefficient = 0.0;
};

// Sorted by |coefficient| descending, then term ascending.
std::vector<ImportanceEntry> feature_importance(const TrainedModel& model, std::size_t top_k);

struct Contribution {
  std::string term;
  double value = 0.0;  // feature weight times coefficient
};

struct Misclassification {
  std::string id;
  std::string text;
  Label truth = Label::NotDark;
  double score = 0.0;
  Label predicted = Label::NotDark;
  std::size_t oov_terms = 0;
  std::vector<Contribution> contributions;  // top 5 by |value|
};

// Misclassified documents only, most confident mistakes first.
std::vector<Misclassification> misclassification_report(const TrainedModel& model,
                                                         const Corpus& test);

enum class SensitivityAxis : std::uint8_t { Lambda, NgramRange, MaxFeatures, Weighting, Preprocessing };

std::string_view axis_name(SensitivityAxis axis) noexcept;

struct SensitivityAxes {
  ParamGrid params;  // empty axes are simply not swept
  std::vector<PreprocessOptions> preprocessings;
};

struct SensitivityRow {
  SensitivityAxis axis = SensitivityAxis::Lambda;
  std::string value;
  VectorizerConfig vectorizer;
  TrainConfig train;
  CvResult result;
};

// One-at-a-time sweeps around the fixed configuration on one shared fold
// assignment. Rows are ordered by axis, then by value.
std::vector<SensitivityRow> sensitivity_analysis(const Corpus& corpus, const SensitivityAxes& axes,
                                                 const VectorizerConfig& fixed_vectorizer,
                                                 const TrainConfig& fixed_train, std::size_t k,
                                                 std::uint64_t seed, std::size_t jobs = 1);

std::string describe_preprocessing(const PreprocessOptions& options);
std::string describe_ngram(int lo, int hi);
std::string describe_max_features(const std::optional<std::size_t>& max_features);

// Header `axis,value,lambda,ngram,max_features,weighting,mean_accuracy,mean_f1,std_f1`.
void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, std::string_view axis, std::string_view value,
                      const CvResult& result);
// Every grid cell (axis `grid`, value = cell index) followed by a `best` row.
void write_grid_csv(std::ostream& out, const GridSearchResult& result);
void write_sensitivity_csv(std::ostream& out, const std::vector<SensitivityRow>& rows);
// Per-fold CSV `fold,n,tp,fp,tn,fn,accuracy,precision,recall,f1,auc`.
void write_folds_csv(std::ostream& out, const CvResult& result);
// CSV `rank,term,coefficient`.
void write_importance_csv(std::ostream& out, const std::vector<ImportanceEntry>& entries);
// CSV `id,text,true_label,score,predicted_label,oov_terms,contributions`.
void write_misclassification_csv(std::ostream& out, const std::vector<Misclassification>& rows);

}  // namespace darkpat
