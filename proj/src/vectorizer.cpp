#include "darkpat/vectorizer.hpp"

#include "darkpat/csv.hpp"
#include "darkpat/error.hpp"
#include "darkpat/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

namespace darkpat {

std::string_view weighting_name(Weighting w) noexcept {
  return w == Weighting::TfIdf ? "tfidf" : "counts";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "counts") return Weighting::Counts;
  if (name == "tfidf") return Weighting::TfIdf;
  throw ValidationError("unknown weighting '" + std::string(name) + "' (expected counts or tfidf)");
}

void VectorizerConfig::validate() const {
  if (ngram_min < 1) throw ValidationError("ngram_min must be >= 1");
  if (ngram_max < ngram_min) throw ValidationError("ngram_max must be >= ngram_min");
  if (max_features && *max_features < 1) throw ValidationError("max_features must be >= 1");
  if (min_df < 1) throw ValidationError("min_df must be >= 1");
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
                       std::size_t n_docs, std::optional<std::vector<double>> idf)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs), idf_(std::move(idf)) {
  if (doc_freq_.size() != terms_.size()) {
    throw ValidationError("vocabulary: doc_freq length differs from term count");
  }
  if (idf_ && idf_->size() != terms_.size()) {
    throw ValidationError("vocabulary: idf length differs from term count");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw ValidationError("vocabulary: terms not strictly sorted at index " + std::to_string(i));
    }
    if (doc_freq_[i] < 1 || doc_freq_[i] > n_docs_) {
      throw ValidationError("vocabulary: doc_freq out of range for '" + terms_[i] + "'");
    }
    if (idf_ && !((*idf_)[i] >= 1.0 && std::isfinite((*idf_)[i]))) {
      throw ValidationError("vocabulary: idf below 1 for '" + terms_[i] + "'");
    }
    index_.emplace(terms_[i], i);
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double FeatureVector::dot(const std::vector<double>& dense) const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.weight * dense[e.index];
  return sum;
}

void FeatureMatrix::add_row(FeatureVector row) {
  if (row.dimension != dimension_) {
    throw ValidationError("feature row dimension " + std::to_string(row.dimension) +
                          " does not match matrix dimension " + std::to_string(dimension_));
  }
  if (!labels_.empty()) throw ValidationError("cannot mix labeled and unlabeled rows");
  rows_.push_back(std::move(row));
}

void FeatureMatrix::add_row(FeatureVector row, Label label) {
  if (row.dimension != dimension_) {
    throw ValidationError("feature row dimension " + std::to_string(row.dimension) +
                          " does not match matrix dimension " + std::to_string(dimension_));
  }
  if (labels_.size() != rows_.size()) throw ValidationError("cannot mix labeled and unlabeled rows");
  rows_.push_back(std::move(row));
  labels_.push_back(label);
}

std::vector<std::string> tokenize(std::string_view clean_text, const VectorizerConfig& config) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < clean_text.size()) {
    while (pos < clean_text.size() && std::isspace(static_cast<unsigned char>(clean_text[pos]))) ++pos;
    const auto start = pos;
    while (pos < clean_text.size() && !std::isspace(static_cast<unsigned char>(clean_text[pos]))) ++pos;
    if (pos > start) tokens.push_back(clean_text.substr(start, pos - start));
  }

  std::vector<std::string> grams;
  for (int n = config.ngram_min; n <= config.ngram_max; ++n) {
    const auto width = static_cast<std::size_t>(n);
    if (tokens.size() < width) break;
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      std::string gram(tokens[i]);
      for (std::size_t j = 1; j < width; ++j) {
        gram.push_back(' ');
        gram.append(tokens[i + j]);
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

Vocabulary fit_vocabulary(const Corpus& train, const VectorizerConfig& config) {
  config.validate();
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : train.documents()) {
    auto grams = tokenize(doc.clean_text, config);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  kept.reserve(df.size());
  for (auto& [term, count] : df) {
    if (count >= config.min_df) kept.emplace_back(term, count);
  }
  if (config.max_features && kept.size() > *config.max_features) {
    const auto k = static_cast<std::ptrdiff_t>(*config.max_features);
    std::partial_sort(kept.begin(), kept.begin() + k, kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(*config.max_features);
  }
  if (kept.empty()) throw ValidationError("vocabulary is empty after document-frequency pruning");
  std::sort(kept.begin(), kept.end());

  std::vector<std::string> terms;
  std::vector<std::size_t> doc_freq;
  terms.reserve(kept.size());
  doc_freq.reserve(kept.size());
  for (auto& [term, count] : kept) {
    terms.push_back(std::move(term));
    doc_freq.push_back(count);
  }

  const auto n_docs = train.size();
  std::optional<std::vector<double>> idf;
  if (config.weighting == Weighting::TfIdf) {
    idf.emplace();
    idf->reserve(doc_freq.size());
    for (auto count : doc_freq) {
      idf->push_back(std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(count))) + 1.0);
    }
  }
  return Vocabulary(std::move(terms), std::move(doc_freq), n_docs, std::move(idf));
}

FeatureVector transform(std::string_view clean_text, const Vocabulary& vocab,
                        const VectorizerConfig& config, TransformStats* stats) {
  const auto grams = tokenize(clean_text, config);
  std::vector<std::size_t> hits;
  hits.reserve(grams.size());
  for (const auto& g : grams) {
    if (auto idx = vocab.index_of(g)) hits.push_back(*idx);
  }
  if (stats) {
    stats->total_terms = grams.size();
    stats->oov_terms = grams.size() - hits.size();
  }
  std::sort(hits.begin(), hits.end());

  FeatureVector vec;
  vec.dimension = vocab.size();
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    vec.entries.push_back({hits[i], static_cast<double>(j - i)});
    i = j;
  }

  if (config.weighting == Weighting::TfIdf) {
    if (!vocab.idf()) throw ValidationError("tf-idf transform needs a vocabulary with idf weights");
    const auto& idf = *vocab.idf();
    double sq = 0.0;
    for (auto& e : vec.entries) {
      e.weight *= idf[e.index];
      sq += e.weight * e.weight;
    }
    if (sq > 0.0) {
      const double norm = std::sqrt(sq);
      for (auto& e : vec.entries) e.weight /= norm;
    }
  }
  return vec;
}

FeatureMatrix transform(const Corpus& corpus, const Vocabulary& vocab, const VectorizerConfig& config) {
  FeatureMatrix m(vocab.size());
  for (const auto& doc : corpus.documents()) {
    m.add_row(transform(doc.clean_text, vocab, config), doc.label);
  }
  return m;
}

void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab) {
  csv::write_row(out, {"term", "index", "doc_freq", "idf"});
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    csv::write_row(out, {vocab.terms()[i], std::to_string(i), std::to_string(vocab.doc_freq()[i]),
                         vocab.idf() ? format_double((*vocab.idf())[i]) : std::string()});
  }
}

}  // namespace darkpat
