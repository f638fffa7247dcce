#include "doctest.h"
#include "helpers.hpp"

#include "darkpat/error.hpp"
#include "darkpat/vectorizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace darkpat;
using darkpat::test::make_corpus;

namespace {

VectorizerConfig cfg(int lo, int hi, Weighting w = Weighting::Counts) {
  VectorizerConfig c;
  c.ngram_min = lo;
  c.ngram_max = hi;
  c.weighting = w;
  return c;
}

Corpus docs(const std::vector<std::string>& texts) {
  std::vector<std::pair<std::string, Label>> rows;
  for (std::size_t i = 0; i < texts.size(); ++i) rows.emplace_back(texts[i], i % 2 ? Label::NotDark : Label::Dark);
  return make_corpus(rows);
}

std::string random_text(SplitMix64& rng, std::size_t vocab, std::size_t max_len) {
  std::string s;
  const auto n = rng.next_below(max_len + 1);
  for (std::uint64_t i = 0; i < n; ++i) s += "w" + std::to_string(rng.next_below(vocab)) + " ";
  return s;
}

}  // namespace

TEST_CASE("tokenize examples") {
  CHECK(tokenize("only 3 left", cfg(1, 1)) == std::vector<std::string>{"only", "3", "left"});
  CHECK(tokenize("sign up now", cfg(1, 2)) ==
        std::vector<std::string>{"sign", "up", "now", "sign up", "up now"});
  CHECK(tokenize("", cfg(1, 3)).empty());
  CHECK(tokenize("one two", cfg(3, 3)).empty());
  CHECK(tokenize("a b c", cfg(2, 3)) == std::vector<std::string>{"a b", "b c", "a b c"});
}

TEST_CASE("fit_vocabulary examples") {
  const auto c = docs({"a b", "b c"});
  auto v = fit_vocabulary(c, cfg(1, 1));
  CHECK(v.terms() == std::vector<std::string>{"a", "b", "c"});
  CHECK(v.doc_freq() == std::vector<std::size_t>{1, 2, 1});
  CHECK(v.n_docs() == 2);
  CHECK_FALSE(v.idf().has_value());

  auto capped = cfg(1, 1);
  capped.max_features = 2;
  CHECK(fit_vocabulary(c, capped).terms() == std::vector<std::string>{"a", "b"});

  auto pruned = cfg(1, 1);
  pruned.min_df = 2;
  CHECK(fit_vocabulary(c, pruned).terms() == std::vector<std::string>{"b"});

  pruned.min_df = 3;
  CHECK_THROWS_AS(fit_vocabulary(c, pruned), ValidationError);
}

TEST_CASE("idf collapses to 1 for a term in every document") {
  const auto v = fit_vocabulary(docs({"a b", "b c"}), cfg(1, 1, Weighting::TfIdf));
  REQUIRE(v.idf());
  CHECK((*v.idf())[1] == 1.0);
  for (double w : *v.idf()) CHECK(w >= 1.0);
}

TEST_CASE("transform counts and out-of-vocabulary terms") {
  const auto c = cfg(1, 1);
  const auto v = fit_vocabulary(docs({"a b", "b c"}), c);
  const auto x = transform("b b c", v, c);
  CHECK(x.dimension == 3);
  CHECK(x.entries == std::vector<SparseEntry>{{1, 2.0}, {2, 1.0}});

  TransformStats stats;
  CHECK(transform("z z", v, c, &stats).entries.empty());
  CHECK(stats.total_terms == 2);
  CHECK(stats.oov_terms == 2);
}

TEST_CASE("transform tf-idf matches the hand-computed vector") {
  // idf(a) = ln(3/2) + 1, idf(b) = 1; values from a 40-digit evaluation.
  const auto c = cfg(1, 1, Weighting::TfIdf);
  const auto v = fit_vocabulary(docs({"a b", "b b"}), c);
  REQUIRE(v.idf());
  CHECK((*v.idf())[0] == doctest::Approx(1.405465108108164382).epsilon(1e-15));
  const auto x = transform("a b", v, c);
  REQUIRE(x.entries.size() == 2);
  CHECK(std::abs(x.entries[0].weight - 0.814802474667168967) < 1e-12);
  CHECK(std::abs(x.entries[1].weight - 0.579738671537665731) < 1e-12);
}

TEST_CASE("feature matrix rejects mixed dimensions") {
  FeatureMatrix m(3);
  m.add_row(FeatureVector{{}, 3}, Label::Dark);
  CHECK_THROWS_AS(m.add_row(FeatureVector{{}, 4}, Label::Dark), ValidationError);
  CHECK_THROWS_AS(m.add_row(FeatureVector{{}, 3}), ValidationError);
}

TEST_CASE("vocabulary reconstruction validates its invariants") {
  CHECK_NOTHROW(Vocabulary({"a", "b"}, {1, 2}, 2, std::nullopt));
  CHECK_THROWS_AS(Vocabulary({"b", "a"}, {1, 1}, 2, std::nullopt), ValidationError);
  CHECK_THROWS_AS(Vocabulary({"a"}, {3}, 2, std::nullopt), ValidationError);
  CHECK_THROWS_AS(Vocabulary({"a"}, {1}, 2, std::vector<double>{0.5}), ValidationError);
}

TEST_CASE("vectorizer properties on random corpora") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> texts;
    const auto n = 2 + rng.next_below(15);
    for (std::uint64_t i = 0; i < n; ++i) texts.push_back(random_text(rng, 12, 10));
    texts[0] += " w0";  // never an empty vocabulary
    const int lo = 1 + static_cast<int>(rng.next_below(2));
    const int hi = lo + static_cast<int>(rng.next_below(2));
    const auto corpus = docs(texts);

    // Order invariance of the fit.
    auto counts = cfg(lo, hi);
    const auto v = fit_vocabulary(corpus, counts);
    auto reversed_texts = texts;
    std::reverse(reversed_texts.begin(), reversed_texts.end());
    const auto rv = fit_vocabulary(docs(reversed_texts), counts);
    CHECK(v.terms() == rv.terms());
    CHECK(v.doc_freq() == rv.doc_freq());
    CHECK(std::is_sorted(v.terms().begin(), v.terms().end()));

    // Count weights sum to the number of in-vocabulary n-grams.
    for (const auto& doc : corpus.documents()) {
      const auto x = transform(doc.clean_text, v, counts);
      double sum = 0.0;
      for (const auto& e : x.entries) sum += e.weight;
      std::size_t in_vocab = 0;
      for (const auto& g : tokenize(doc.clean_text, counts)) in_vocab += v.index_of(g).has_value();
      CHECK(sum == static_cast<double>(in_vocab));
      for (std::size_t i = 1; i < x.entries.size(); ++i) CHECK(x.entries[i - 1].index < x.entries[i].index);
    }

    // tf-idf rows have unit norm.
    auto tfidf = cfg(lo, hi, Weighting::TfIdf);
    const auto tv = fit_vocabulary(corpus, tfidf);
    const auto m = transform(corpus, tv, tfidf);
    for (const auto& row : m.row_data()) {
      CHECK(row.dimension == tv.size());
      if (row.entries.empty()) continue;
      double sq = 0.0;
      for (const auto& e : row.entries) sq += e.weight * e.weight;
      CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-12);
    }

    // max_features selects exactly the top-k under (df desc, term asc).
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (std::size_t i = 0; i < v.size(); ++i) ranked.emplace_back(v.doc_freq()[i], v.terms()[i]);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const auto k = 1 + rng.next_below(v.size());
    auto capped = counts;
    capped.max_features = k;
    std::set<std::string> expected;
    for (std::size_t i = 0; i < k; ++i) expected.insert(ranked[i].second);
    const auto cv = fit_vocabulary(corpus, capped);
    CHECK(std::set<std::string>(cv.terms().begin(), cv.terms().end()) == expected);

    // Raising min_df never adds a term.
    auto stricter = counts;
    stricter.min_df = 2;
    try {
      const auto sv = fit_vocabulary(corpus, stricter);
      for (const auto& t : sv.terms()) CHECK(v.index_of(t).has_value());
    } catch (const ValidationError&) {
    }
  }
}

TEST_CASE("vocabulary csv export") {
  const auto c = cfg(1, 1, Weighting::TfIdf);
  const auto v = fit_vocabulary(docs({"a b", "b b"}), c);
  std::ostringstream out;
  write_vocabulary_csv(out, v);
  CHECK(out.str() == "term,index,doc_freq,idf\na,0,1,1.4054651081081644\nb,1,2,1\n");

  const auto cc = cfg(1, 1);
  std::ostringstream counts;
  write_vocabulary_csv(counts, fit_vocabulary(docs({"a b", "b b"}), cc));
  CHECK(counts.str() == "term,index,doc_freq,idf\na,0,1,\nb,1,2,\n");
}

TEST_CASE("config validation") {
  auto c = cfg(2, 1);
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = cfg(0, 1);
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = cfg(1, 1);
  c.max_features = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK_THROWS_AS(parse_weighting("binary"), ValidationError);
}
