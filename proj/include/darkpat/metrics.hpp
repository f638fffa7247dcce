#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "darkpat/corpus.hpp"

namespace darkpat {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Positive class is Label::Dark. Throws ValidationError on length mismatch
// or empty input.
ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred);

// Which ratios hit a zero denominator and were reported as 0.
struct Degeneracy {
  bool precision = false;  // tp + fp == 0
  bool recall = false;     // tp + fn == 0
  bool f1 = false;         // precision + recall == 0
  bool any() const noexcept { return precision || recall || f1; }
};

struct Scores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Degeneracy degenerate;
};

// Throws ValidationError if the matrix is empty.
Scores scores(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// points[0] = (0,0) and points.back() = (1,1). thresholds[i] is the score
// cutoff (predict positive when score >= cutoff) for points[i]; the first
// entry is +inf and the last is the lowest score.
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<double> thresholds;
};

// Throws ValidationError when only one class is present.
RocCurve roc_curve(std::span<const Label> y_true, std::span<const double> scores);
double auc(const RocCurve& roc);

struct DocumentPrediction {
  std::string id;
  Label truth = Label::NotDark;
  double score = 0.0;
  Label predicted = Label::NotDark;
};

struct EvaluationReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  Degeneracy degenerate;
  bool auc_defined = true;  // false when the sample holds a single class
  RocCurve roc;
  std::vector<DocumentPrediction> per_document;
};

// Builds a report from labeled scores. With a single class present the ROC
// is left empty and auc_defined is false.
EvaluationReport evaluate_scores(std::vector<DocumentPrediction> predictions);

// 4-decimal text summary.
void write_summary_text(std::ostream& out, const EvaluationReport& report);
// CSV `metric,value` at full precision.
void write_summary_csv(std::ostream& out, const EvaluationReport& report);
// 2x2 CSV: rows actual negative/positive, columns predicted negative/positive.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);
// CSV `threshold,fpr,tpr`.
void write_roc_csv(std::ostream& out, const RocCurve& roc);
// CSV `id,true_label,score,predicted_label`.
void write_predictions_csv(std::ostream& out, const std::vector<DocumentPrediction>& rows);

}  // namespace darkpat
