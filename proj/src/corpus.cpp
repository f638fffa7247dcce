#include "darkpat/corpus.hpp"

#include "darkpat/csv.hpp"
#include "darkpat/error.hpp"
#include "darkpat/random.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace darkpat {

std::string_view label_name(Label l) noexcept {
  return l == Label::Dark ? "dark" : "not_dark";
}

bool parse_label(std::string_view token, Label& out) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "1" || lower == "dark") {
    out = Label::Dark;
    return true;
  }
  if (lower == "0" || lower == "not_dark") {
    out = Label::NotDark;
    return true;
  }
  return false;
}

namespace {

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

std::string strip_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('<', pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const auto close = text.find('>', open + 1);
    if (close == std::string_view::npos) break;
    pos = close + 1;
  }
  return out;
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents, std::string source) : docs_(std::move(documents)) {
  prov_.source = std::move(source);
  std::unordered_set<std::string_view> seen;
  seen.reserve(docs_.size());
  std::size_t words = 0;
  for (const auto& d : docs_) {
    if (!seen.insert(d.id).second) {
      throw ValidationError("duplicate document id '" + d.id + "'");
    }
    (d.label == Label::Dark ? prov_.positive : prov_.negative) += 1;
    words += count_words(d.raw_text);
  }
  prov_.average_words = docs_.empty() ? 0.0 : static_cast<double>(words) / docs_.size();
}

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(docs_.size());
  for (const auto& d : docs_) out.push_back(d.label);
  return out;
}

Corpus Corpus::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Document> docs;
  docs.reserve(indices.size());
  for (auto i : indices) docs.push_back(docs_.at(i));
  return Corpus(std::move(docs), prov_.source);
}

std::string preprocess(std::string_view raw_text, const PreprocessOptions& options) {
  const std::string stage1 = options.strip_html ? strip_tags(raw_text) : std::string(raw_text);

  std::string out;
  out.reserve(stage1.size());
  bool pending_space = false;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(stage1.data());
  const auto length = static_cast<std::int32_t>(stage1.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    // Invalid sequences (cp < 0) are treated like punctuation.
    const bool keep = cp >= 0 && (u_isalpha(cp) || u_isdigit(cp));
    if (!keep) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    if (options.lowercase) cp = u_tolower(cp);
    char buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, cp);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

Corpus apply_preprocessing(const Corpus& corpus, const PreprocessOptions& options) {
  std::vector<Document> docs = corpus.documents();
  for (auto& d : docs) d.clean_text = preprocess(d.raw_text, options);
  return Corpus(std::move(docs), corpus.provenance().source);
}

Corpus parse_corpus(std::istream& in, const std::string& source) {
  std::vector<csv::Record> records;
  try {
    records = csv::read_all(in);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
  while (!records.empty() && records.back().fields.size() == 1 && records.back().fields[0].empty()) {
    records.pop_back();
  }
  if (records.empty()) throw ParseError(source + ": missing header row `text,label`");

  auto header = records.front().fields;
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  if (header.size() != 2 || header[0] != "text" || header[1] != "label") {
    throw ParseError(source + ": header must be `text,label`");
  }

  std::vector<Document> docs;
  docs.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where =
        source + ": row " + std::to_string(r) + " (line " + std::to_string(rec.line) + ")";
    if (rec.fields.size() != 2) {
      throw ParseError(where + ": expected 2 columns, found " + std::to_string(rec.fields.size()));
    }
    Document d;
    if (!parse_label(rec.fields[1], d.label)) {
      throw ParseError(where + ": unrecognized label '" + rec.fields[1] + "'");
    }
    d.id = std::to_string(r);
    d.raw_text = rec.fields[0];
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs), source);
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read dataset '" + path.string() + "'");
  return parse_corpus(in, path.string());
}

SplitIndices split_indices(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ValidationError("train_fraction must lie strictly between 0 and 1");
  }
  if (corpus.empty()) throw ValidationError("cannot split an empty corpus");

  SplitMix64 rng(spec.seed);
  SplitIndices out;
  auto take = [&](std::vector<std::size_t> group) {
    seeded_shuffle(std::span<std::size_t>(group), rng);
    const auto n_train =
        static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(group.size())));
    out.train.insert(out.train.end(), group.begin(), group.begin() + n_train);
    out.test.insert(out.test.end(), group.begin() + n_train, group.end());
  };

  if (spec.stratified) {
    if (corpus.positive_count() == 0 || corpus.negative_count() == 0) {
      throw ValidationError("stratified split needs both classes");
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      (corpus[i].label == Label::Dark ? pos : neg).push_back(i);
    }
    take(std::move(pos));
    take(std::move(neg));
  } else {
    std::vector<std::size_t> all(corpus.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all));
  }
  if (out.train.empty() || out.test.empty()) {
    throw ValidationError("degenerate split: train " + std::to_string(out.train.size()) +
                          ", test " + std::to_string(out.test.size()));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, const SplitSpec& spec) {
  const auto idx = split_indices(corpus, spec);
  return {corpus.subset(idx.train), corpus.subset(idx.test)};
}

}  // namespace darkpat
