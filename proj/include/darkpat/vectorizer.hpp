#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "darkpat/corpus.hpp"

namespace darkpat {

enum class Weighting : std::uint8_t { Counts, TfIdf };

std::string_view weighting_name(Weighting w) noexcept;
// "counts" or "tfidf"; throws ValidationError otherwise.
Weighting parse_weighting(std::string_view name);

struct VectorizerConfig {
  int ngram_min = 1;
  int ngram_max = 2;
  std::optional<std::size_t> max_features;  // nullopt keeps every term
  std::size_t min_df = 1;
  Weighting weighting = Weighting::TfIdf;
  PreprocessOptions preprocessing;

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

// Lexicographically sorted n-gram terms with dense indices.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Rebuilds a vocabulary from stored parts; checks ordering and ranges.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
             std::size_t n_docs, std::optional<std::vector<double>> idf);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& doc_freq() const noexcept { return doc_freq_; }
  std::size_t n_docs() const noexcept { return n_docs_; }
  const std::optional<std::vector<double>>& idf() const noexcept { return idf_; }

  std::optional<std::size_t> index_of(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::size_t n_docs_ = 0;
  std::optional<std::vector<double>> idf_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct SparseEntry {
  std::size_t index = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Sorted sparse row; indices strictly increase and no zero weights are stored.
struct FeatureVector {
  std::vector<SparseEntry> entries;
  std::size_t dimension = 0;

  double dot(const std::vector<double>& dense) const;
};

class FeatureMatrix {
 public:
  explicit FeatureMatrix(std::size_t dimension) : dimension_(dimension) {}

  // Throws ValidationError if the row's dimension differs.
  void add_row(FeatureVector row);
  void add_row(FeatureVector row, Label label);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<FeatureVector>& row_data() const noexcept { return rows_; }
  const FeatureVector& row(std::size_t i) const { return rows_[i]; }
  bool has_labels() const noexcept { return !rows_.empty() && labels_.size() == rows_.size(); }
  const std::vector<Label>& labels() const noexcept { return labels_; }

 private:
  std::size_t dimension_;
  std::vector<FeatureVector> rows_;
  std::vector<Label> labels_;
};

// Unigrams are whitespace-separated tokens; each n in [ngram_min, ngram_max]
// contributes its windows left to right, smaller n first.
std::vector<std::string> tokenize(std::string_view clean_text, const VectorizerConfig& config);

// Throws ValidationError if every term is pruned.
Vocabulary fit_vocabulary(const Corpus& train, const VectorizerConfig& config);

struct TransformStats {
  std::size_t total_terms = 0;
  std::size_t oov_terms = 0;
};

FeatureVector transform(std::string_view clean_text, const Vocabulary& vocab,
                        const VectorizerConfig& config, TransformStats* stats = nullptr);
FeatureMatrix transform(const Corpus& corpus, const Vocabulary& vocab,
                        const VectorizerConfig& config);

// CSV `term,index,doc_freq,idf`; idf is empty in counts mode.
void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab);

}  // namespace darkpat
