#pragma once

#include "darkpat/corpus.hpp"
#include "darkpat/random.hpp"

#include <string>
#include <vector>

namespace darkpat::test {

// Corpus from (text, label) pairs with ids "d0", "d1", ... and clean_text filled.
inline Corpus make_corpus(const std::vector<std::pair<std::string, Label>>& rows, bool clean = true) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Document d{"d" + std::to_string(i), rows[i].first, {}, rows[i].second};
    if (clean) d.clean_text = preprocess(d.raw_text);
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs), "test");
}

// n documents per class; positive documents contain `marker`.
inline Corpus separable_corpus(std::size_t per_class, const std::string& marker = "xx",
                               std::uint64_t seed = 1) {
  static const char* kWords[] = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
  SplitMix64 rng(seed);
  std::vector<std::pair<std::string, Label>> rows;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool dark = i % 2 == 0;
    std::string text;
    for (int w = 0; w < 4; ++w) text += std::string(kWords[rng.next_below(8)]) + " ";
    if (dark) text += marker;
    rows.emplace_back(text, dark ? Label::Dark : Label::NotDark);
  }
  return make_corpus(rows);
}

}  // namespace darkpat::test
