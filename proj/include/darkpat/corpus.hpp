#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace darkpat {

enum class Label : std::uint8_t { NotDark = 0, Dark = 1 };

inline constexpr int to_int(Label l) noexcept { return static_cast<int>(l); }

// "dark" / "not_dark".
std::string_view label_name(Label l) noexcept;

// Accepts 1/0 and dark/not_dark (case-insensitive). Returns false on anything else.
bool parse_label(std::string_view token, Label& out);

struct Document {
  std::string id;
  std::string raw_text;
  std::string clean_text;
  Label label = Label::NotDark;
};

struct Provenance {
  std::string source;
  std::size_t positive = 0;
  std::size_t negative = 0;
  double average_words = 0.0;  // mean whitespace-separated words in raw_text
};

// Ordered, id-unique collection of labeled documents.
class Corpus {
 public:
  Corpus() = default;
  // Throws ValidationError on duplicate ids.
  Corpus(std::vector<Document> documents, std::string source);

  const std::vector<Document>& documents() const noexcept { return docs_; }
  const Provenance& provenance() const noexcept { return prov_; }
  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  const Document& operator[](std::size_t i) const { return docs_[i]; }

  std::size_t positive_count() const noexcept { return prov_.positive; }
  std::size_t negative_count() const noexcept { return prov_.negative; }

  std::vector<Label> labels() const;

  // Documents at the given indices, in the given order.
  Corpus subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<Document> docs_;
  Provenance prov_;
};

struct PreprocessOptions {
  bool strip_html = true;
  bool lowercase = true;

  friend bool operator==(const PreprocessOptions&, const PreprocessOptions&) = default;
};

// Text cleaning applied in this fixed order:
//   1. delete every span from '<' to the next '>' (or to end of text),
//   2. replace every code point that is not a letter, digit or whitespace by a space,
//   3. lowercase,
//   4. collapse whitespace runs to one ASCII space and trim.
// Steps 1 and 3 can be switched off for sensitivity experiments.
std::string preprocess(std::string_view raw_text, const PreprocessOptions& options = {});

// Copy of the corpus with clean_text filled in for every document.
Corpus apply_preprocessing(const Corpus& corpus, const PreprocessOptions& options = {});

// Parses the `text,label` CSV contract. `source` names the input in errors.
Corpus parse_corpus(std::istream& in, const std::string& source);
Corpus load_corpus(const std::filesystem::path& path);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending corpus positions
  std::vector<std::size_t> test;
};

// Seeded shuffle (SplitMix64 + Fisher-Yates). Stratified mode shuffles the
// positive-class positions, then the negative-class positions, with one
// generator and puts the first floor(fraction * class_size) of each into
// train. Both halves keep corpus order.
SplitIndices split_indices(const Corpus& corpus, const SplitSpec& spec);
std::pair<Corpus, Corpus> split(const Corpus& corpus, const SplitSpec& spec);

}  // namespace darkpat
