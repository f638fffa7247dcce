#include "darkpat/fixture.hpp"

#include "darkpat/error.hpp"
#include "darkpat/random.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <string_view>

namespace darkpat {

namespace {

constexpr std::array<std::string_view, 12> kDarkPhrases = {
    "hurry",          "only left",     "act now",        "limited time", "selling fast",  "expires soon",
    "last chance",    "in high demand", "ends tonight",  "people are viewing", "don't miss out", "almost gone"};

constexpr std::array<std::string_view, 12> kBenignPhrases = {
    "free returns",   "add to cart",   "learn more",     "customer reviews", "product details", "contact us",
    "shipping info",  "size guide",    "sign in",        "privacy policy",   "gift card",       "track order"};

constexpr std::array<std::string_view, 40> kFiller = {
    "the",    "item",   "shirt",  "blue",    "page",    "store",  "your",    "order",  "color",  "style",
    "a",      "for",    "with",   "this",    "new",     "cotton", "jacket",  "shoes",  "home",   "sale",
    "price",  "bag",    "small",  "large",   "women",   "men",    "kids",    "week",   "brand",  "summer",
    "on",     "of",     "and",    "deal",    "outlet",  "black",  "white",   "wool",   "lamp",   "desk"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& words, SplitMix64& rng) {
  return words[rng.next_below(N)];
}

std::string decorate(std::string_view phrase, SplitMix64& rng) {
  std::string out(phrase);
  const auto style = rng.next_below(6);
  if (style == 0 && !out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  if (style == 1) {
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (style == 2) out = "<b>" + out + "</b>";
  if (style == 3) out += "!";
  return out;
}

}  // namespace

Corpus make_fixture(const FixtureSpec& spec) {
  if (spec.documents < 2) throw ValidationError("fixture needs at least 2 documents");
  if (!(spec.fidelity >= 0.0 && spec.fidelity <= 1.0)) throw ValidationError("fixture fidelity must lie in [0,1]");
  if (spec.min_filler > spec.max_filler) throw ValidationError("fixture filler range is inverted");

  SplitMix64 rng(spec.seed);
  std::vector<Document> docs;
  docs.reserve(spec.documents);
  for (std::size_t i = 0; i < spec.documents; ++i) {
    const Label label = i % 2 == 0 ? Label::Dark : Label::NotDark;
    const auto filler = spec.min_filler + rng.next_below(spec.max_filler - spec.min_filler + 1);

    std::vector<std::string> segments;
    for (std::size_t w = 0; w < filler; ++w) segments.emplace_back(pick(kFiller, rng));
    for (std::size_t p = 0; p < spec.phrases_per_doc; ++p) {
      const bool own_class = rng.next_double() < spec.fidelity;
      const bool dark = (label == Label::Dark) == own_class;
      const auto phrase = dark ? pick(kDarkPhrases, rng) : pick(kBenignPhrases, rng);
      const auto at = rng.next_below(segments.size() + 1);
      segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(at), decorate(phrase, rng));
    }

    std::string text;
    for (const auto& s : segments) {
      if (!text.empty()) text.push_back(' ');
      text += s;
    }
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", i);
    docs.push_back({id, std::move(text), {}, label});
  }
  return Corpus(std::move(docs), "synthetic(seed=" + std::to_string(spec.seed) + ")");
}

}  // namespace darkpat
