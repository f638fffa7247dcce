#include "darkpat/metrics.hpp"

#include "darkpat/csv.hpp"
#include "darkpat/error.hpp"
#include "darkpat/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace darkpat {

ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw ValidationError("confusion_matrix: " + std::to_string(y_true.size()) + " labels vs " +
                          std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw ValidationError("confusion_matrix: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == Label::Dark;
    const bool predicted = y_pred[i] == Label::Dark;
    if (actual && predicted) ++cm.tp;
    else if (actual) ++cm.fn;
    else if (predicted) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

Scores scores(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ValidationError("scores: empty confusion matrix");
  Scores s;
  s.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  if (cm.tp + cm.fp == 0) {
    s.degenerate.precision = true;
  } else {
    s.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  }
  if (cm.tp + cm.fn == 0) {
    s.degenerate.recall = true;
  } else {
    s.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  if (s.precision + s.recall == 0.0) {
    s.degenerate.f1 = true;
  } else {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

RocCurve roc_curve(std::span<const Label> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw ValidationError("roc_curve: length mismatch");
  std::size_t positives = 0;
  for (auto y : y_true) positives += y == Label::Dark;
  const std::size_t negatives = y_true.size() - positives;
  if (positives == 0 || negatives == 0) throw ValidationError("roc_curve: both classes are required");
  for (double s : scores) {
    if (std::isnan(s)) throw ValidationError("roc_curve: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double cutoff = scores[order[i]];
    while (i < order.size() && scores[order[i]] == cutoff) {
      (y_true[order[i]] == Label::Dark ? tp : fp) += 1;
      ++i;
    }
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                          static_cast<double>(tp) / static_cast<double>(positives)});
    roc.thresholds.push_back(cutoff);
  }
  return roc;
}

double auc(const RocCurve& roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto& a = roc.points[i - 1];
    const auto& b = roc.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

EvaluationReport evaluate_scores(std::vector<DocumentPrediction> predictions) {
  if (predictions.empty()) throw ValidationError("evaluate: no documents");
  std::vector<Label> truth, predicted;
  std::vector<double> score_values;
  truth.reserve(predictions.size());
  predicted.reserve(predictions.size());
  score_values.reserve(predictions.size());
  for (const auto& p : predictions) {
    truth.push_back(p.truth);
    predicted.push_back(p.predicted);
    score_values.push_back(p.score);
  }

  EvaluationReport report;
  report.confusion = confusion_matrix(truth, predicted);
  const auto s = scores(report.confusion);
  report.accuracy = s.accuracy;
  report.precision = s.precision;
  report.recall = s.recall;
  report.f1 = s.f1;
  report.degenerate = s.degenerate;
  const auto positives = report.confusion.tp + report.confusion.fn;
  if (positives == 0 || positives == predictions.size()) {
    report.auc_defined = false;
  } else {
    report.roc = roc_curve(truth, score_values);
    report.auc = auc(report.roc);
  }
  report.per_document = std::move(predictions);
  return report;
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void write_summary_text(std::ostream& out, const EvaluationReport& r) {
  out << "samples    " << r.confusion.total() << '\n'
      << "accuracy   " << fixed4(r.accuracy) << '\n'
      << "precision  " << fixed4(r.precision) << (r.degenerate.precision ? "  (undefined: no positive predictions)" : "") << '\n'
      << "recall     " << fixed4(r.recall) << (r.degenerate.recall ? "  (undefined: no positive samples)" : "") << '\n'
      << "f1         " << fixed4(r.f1) << (r.degenerate.f1 ? "  (undefined: precision + recall = 0)" : "") << '\n'
      << "auc        " << (r.auc_defined ? fixed4(r.auc) : std::string("n/a (single class)")) << '\n'
      << "confusion  tp=" << r.confusion.tp << " fp=" << r.confusion.fp << " tn=" << r.confusion.tn
      << " fn=" << r.confusion.fn << '\n';
}

void write_summary_csv(std::ostream& out, const EvaluationReport& r) {
  csv::write_row(out, {"metric", "value"});
  csv::write_row(out, {"samples", std::to_string(r.confusion.total())});
  csv::write_row(out, {"accuracy", format_double(r.accuracy)});
  csv::write_row(out, {"precision", format_double(r.precision)});
  csv::write_row(out, {"recall", format_double(r.recall)});
  csv::write_row(out, {"f1", format_double(r.f1)});
  csv::write_row(out, {"auc", r.auc_defined ? format_double(r.auc) : std::string()});
  csv::write_row(out, {"precision_degenerate", r.degenerate.precision ? "1" : "0"});
  csv::write_row(out, {"recall_degenerate", r.degenerate.recall ? "1" : "0"});
  csv::write_row(out, {"f1_degenerate", r.degenerate.f1 ? "1" : "0"});
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
  csv::write_row(out, {"", "predicted_negative", "predicted_positive"});
  csv::write_row(out, {"actual_negative", std::to_string(cm.tn), std::to_string(cm.fp)});
  csv::write_row(out, {"actual_positive", std::to_string(cm.fn), std::to_string(cm.tp)});
}

void write_roc_csv(std::ostream& out, const RocCurve& roc) {
  csv::write_row(out, {"threshold", "fpr", "tpr"});
  for (std::size_t i = 0; i < roc.points.size(); ++i) {
    const double t = roc.thresholds[i];
    csv::write_row(out, {std::isinf(t) ? std::string(t > 0 ? "inf" : "-inf") : format_double(t),
                         format_double(roc.points[i].fpr), format_double(roc.points[i].tpr)});
  }
}

void write_predictions_csv(std::ostream& out, const std::vector<DocumentPrediction>& rows) {
  csv::write_row(out, {"id", "true_label", "score", "predicted_label"});
  for (const auto& p : rows) {
    csv::write_row(out, {p.id, std::string(label_name(p.truth)), format_double(p.score),
                         std::string(label_name(p.predicted))});
  }
}

}  // namespace darkpat
