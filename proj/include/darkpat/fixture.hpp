#pragma once

#include <cstddef>
#include <cstdint>

#include "darkpat/corpus.hpp"

namespace darkpat {

struct FixtureSpec {
  std::size_t documents = 1000;  // split evenly between the classes
  std::uint64_t seed = 7;
  double fidelity = 0.95;        // chance a planted phrase comes from the document's own class
  std::size_t phrases_per_doc = 3;
  std::size_t min_filler = 4;
  std::size_t max_filler = 14;
};

// Synthetic UI-text corpus. Every document mixes neutral filler words with
// planted class-marker phrases (unigrams and bigrams such as "hurry" or
// "only left"); each planted phrase is drawn from the document's own class
// with probability `fidelity` and from the other class otherwise. Some
// documents carry HTML tags, capitals and punctuation. Labels alternate
// dark, not_dark, ...; ids are "syn-00000", "syn-00001", ...
Corpus make_fixture(const FixtureSpec& spec = {});

}  // namespace darkpat
