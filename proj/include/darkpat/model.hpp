#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "darkpat/corpus.hpp"
#include "darkpat/vectorizer.hpp"

namespace darkpat {

struct TrainConfig {
  double lambda = 1.0;
  double learning_rate = 0.1;
  std::size_t max_iters = 5000;
  double tol = 1e-7;
  double threshold = 0.5;
  std::uint64_t seed = 42;  // reserved; training is deterministic

  void validate() const;
};

// Default learning rate for a weighting: 0.1 on unit-norm tf-idf rows,
// 0.01 on raw counts.
double default_learning_rate(Weighting weighting) noexcept;

struct Parameters {
  std::vector<double> weights;
  double bias = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  Parameters gradient;
};

// Numerically stable logistic function.
double sigmoid(double z) noexcept;

// Mean binary cross-entropy plus (lambda / 2m) * |w|^2, bias unpenalized.
// Log arguments are clamped to [1e-12, 1 - 1e-12].
LossGradient loss_and_gradient(const Parameters& params, const FeatureMatrix& data,
                               double lambda);

struct TrainedModel {
  Parameters params;
  Vocabulary vocab;
  VectorizerConfig vectorizer;
  TrainConfig train;
  std::vector<double> training_log;

  std::size_t iterations() const noexcept { return training_log.size(); }
  double final_loss() const { return training_log.empty() ? 0.0 : training_log.back(); }
};

// Full-batch gradient descent from zero. Rows are visited in a canonical
// order, so the result does not depend on the order of the input rows.
// Throws DivergenceError when the loss turns non-finite.
TrainedModel train(const FeatureMatrix& data, const Vocabulary& vocab,
                   const VectorizerConfig& vconfig, const TrainConfig& config);

// Convenience: fit the vocabulary on an already preprocessed corpus, then train.
TrainedModel train_on_corpus(const Corpus& preprocessed, const VectorizerConfig& vconfig,
                             const TrainConfig& config);

double predict_proba(const TrainedModel& model, const FeatureVector& x);
Label predict(const TrainedModel& model, const FeatureVector& x);
Label decide(double probability, double threshold) noexcept;

// Raw text through the model's preprocessing and vectorizer.
double score_text(const TrainedModel& model, std::string_view raw_text);

// Versioned JSON model format with a CRC-32 over vocabulary, weights and bias.
inline constexpr int kModelFormatVersion = 1;

void write_model(std::ostream& out, const TrainedModel& model);
TrainedModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

// %.17g; throws ValidationError for non-finite values.
std::string format_double(double value);

}  // namespace darkpat
