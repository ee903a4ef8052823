#include "crowdspan/synthetic.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <string_view>

#include "crowdspan/error.hpp"
#include "crowdspan/random.hpp"

namespace crowdspan {

namespace {

template <typename T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
  return items[rng.below(N)];
}

// {N} marks the crowd noun phrase.
constexpr std::array<std::string_view, 8> kKeywordTemplates = {
    "{N} protesters gathered outside {P} on {D}.",
    "A crowd of {N} people rallied at {P} on {D}.",
    "Organizers said {N} demonstrators marched from {P} to the courthouse.",
    "On {D}, {N} people attended a vigil at {P}.",
    "Police said {N} residents picketed in front of {P}.",
    "The protest at {P} drew {N} participants.",
    "{N} students rallied near {P} to demand changes.",
    "Witnesses counted {N} people who gathered at {P}."};

constexpr std::array<std::string_view, 6> kQuietKeywordSentences = {
    "Protesters chanted slogans and carried signs.",
    "The crowd dispersed peacefully by evening.",
    "Demonstrators called on the mayor to respond.",
    "Several speakers addressed those who attended.",
    "The rally ended without arrests.",
    "Many of those who gathered wore matching shirts."};

// {V} marks a distractor number.
constexpr std::array<std::string_view, 9> kDistractorTemplates = {
    "The city council approved a budget of {V} dollars last month.",
    "The building has stood on that corner for {V} years.",
    "Local unions represent {V} workers across the state.",
    "A petition has collected {V} signatures online.",
    "Officials said {V} union jobs were cut in the region.",
    "The route covered {V} blocks of the downtown area.",
    "The county reported {V} new cases of the illness.",
    "The school district serves {V} families.",
    "Tickets for the concert sold for {V} dollars each."};

constexpr std::array<std::string_view, 8> kFillers = {
    "Speakers called for changes to state policy.",
    "The event remained peaceful, according to police.",
    "Organizers plan further events later this spring.",
    "A spokesperson for the city declined to comment.",
    "Traffic was diverted for several hours.",
    "Local businesses stayed open throughout the afternoon.",
    "The group was founded in {Y}.",
    "The ordinance was first proposed in {Y}."};

constexpr std::array<std::string_view, 8> kPlaces = {"City Hall",       "the state capitol", "Main Street Park",
                                                     "the federal building", "Lincoln Square", "the county courthouse",
                                                     "Union Station",   "the university library"};
constexpr std::array<std::string_view, 7> kDays = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                                   "Friday", "Saturday", "Sunday"};

constexpr std::array<std::string_view, 12> kHedges = {"about ",   "around ",       "more than ", "nearly ",
                                                      "an estimated ", "at least ", "roughly ",   "up to ",
                                                      "as many as ", "some ",       "approximately ", ""};

constexpr std::array<std::string_view, 9> kUnitWords = {"one", "two", "three", "four", "five",
                                                        "six", "seven", "eight", "nine"};
constexpr std::array<std::string_view, 8> kTensWords = {"twenty", "thirty", "forty", "fifty",
                                                        "sixty",  "seventy", "eighty", "ninety"};

std::string with_commas(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  const std::size_t lead = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
  out = digits.substr(0, lead);
  for (std::size_t i = lead; i < digits.size(); i += 3) out += "," + digits.substr(i, 3);
  return out;
}

struct Quantity {
  std::string text;
  bool plural_vague = false;  // needs "of" before the noun
};

// A crowd-size phrase whose value falls in the given bucket.
Quantity crowd_quantity(Rng& rng, int label) {
  const std::uint64_t style = rng.below(4);
  switch (label) {
    case 0:
      if (style == 0) return {"several dozen"};
      if (style == 1) return {"dozens", true};
      if (style == 2)
        return {std::string(pick(rng, kTensWords)) + "-" + std::string(pick(rng, kUnitWords))};
      return {std::to_string(rng.between(12, 95))};
    case 1:
      if (style == 0) return {"several hundred"};
      if (style == 1) return {"hundreds", true};
      if (style == 2) return {std::string(pick(rng, kUnitWords)) + " hundred"};
      return {std::to_string(rng.between(12, 95) * 10)};
    case 2:
      if (style == 0) return {"a few thousand"};
      if (style == 1) return {"thousands", true};
      if (style == 2) return {std::string(pick(rng, kUnitWords)) + " thousand"};
      return {with_commas(static_cast<std::uint64_t>(rng.between(11, 95) * 100))};
    default:
      if (style == 0) return {"tens of thousands", true};
      if (style == 1) return {std::string(pick(rng, kTensWords)) + " thousand"};
      return {with_commas(static_cast<std::uint64_t>(rng.between(10, 90) * 1000))};
  }
}

std::string distractor_value(Rng& rng, int label) {
  switch (label) {
    case 0:
      return std::to_string(rng.between(2, 99));
    case 1:
      return std::to_string(rng.between(100, 999));
    case 2: {
      // Stay clear of year-like values so every distractor is a candidate.
      const auto v = static_cast<std::uint64_t>(rng.between(2100, 9999));
      return with_commas(v);
    }
    default:
      return with_commas(static_cast<std::uint64_t>(rng.between(10, 500) * 1000 + rng.between(0, 999)));
  }
}

std::string replace(std::string_view pattern, std::string_view key, std::string_view value) {
  std::string out(pattern);
  const auto pos = out.find(key);
  if (pos != std::string::npos) out.replace(pos, key.size(), value);
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Piece {
  std::string sentence;
  // Gold span position inside the sentence, if this is the keyword sentence.
  std::size_t span_offset = std::string::npos;
  std::size_t span_length = 0;
};

Piece keyword_sentence(Rng& rng, int label) {
  const Quantity q = crowd_quantity(rng, label);
  const std::string hedge = q.plural_vague ? "" : std::string(pick(rng, kHedges));
  std::string pattern(pick(rng, kKeywordTemplates));
  pattern = replace(pattern, "{P}", pick(rng, kPlaces));
  pattern = replace(pattern, "{D}", pick(rng, kDays));
  const std::size_t slot = pattern.find("{N}");
  std::string span = hedge + q.text;
  if (slot == 0) span = capitalize(span);
  // Every template puts a noun right after the slot; vague plurals need "of".
  const std::string inserted = q.plural_vague ? span + " of" : span;
  pattern.replace(slot, 3, inserted);
  return Piece{pattern, slot, span.size()};
}

}  // namespace

std::vector<Document> make_synthetic_corpus(const SyntheticCorpusConfig& config) {
  if (config.min_distractors > config.max_distractors)
    throw ConfigError("synthetic corpus needs min_distractors <= max_distractors");
  Rng rng(config.seed);
  std::vector<Document> corpus;
  corpus.reserve(config.documents);
  for (std::size_t k = 0; k < config.documents; ++k) {
    const int label = static_cast<int>(rng.below(4));
    std::vector<Piece> pieces;
    const auto distractors = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(config.min_distractors),
                                                                  static_cast<std::int64_t>(config.max_distractors)));
    for (std::size_t d = 0; d < distractors; ++d) {
      int other = static_cast<int>(rng.below(3));
      if (other >= label) ++other;
      pieces.push_back({replace(pick(rng, kDistractorTemplates), "{V}", distractor_value(rng, other))});
    }
    const std::size_t fillers = static_cast<std::size_t>(rng.between(1, 3));
    for (std::size_t f = 0; f < fillers; ++f) {
      pieces.push_back({replace(pick(rng, kFillers), "{Y}", std::to_string(rng.between(1950, 2019)))});
    }
    if (rng.below(2) == 0) pieces.push_back({std::string(pick(rng, kQuietKeywordSentences))});
    rng.shuffle(std::span<Piece>(pieces));
    // Quiet keyword sentences carry no numbers, so the crowd-size sentence can
    // land anywhere and still be the first keyword sentence with a match.
    const std::size_t insert_at = static_cast<std::size_t>(rng.below(pieces.size() + 1));
    pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(insert_at), keyword_sentence(rng, label));

    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%04zu", k);
    doc.id = id;
    doc.coarse_label = label;
    std::vector<GoldSpan> spans;
    std::size_t in_paragraph = 0;
    const std::size_t paragraph_size = static_cast<std::size_t>(rng.between(2, 3));
    for (const Piece& piece : pieces) {
      if (!doc.text.empty()) doc.text += in_paragraph == 0 ? "\n" : " ";
      if (piece.span_offset != std::string::npos) {
        const std::size_t start = doc.text.size() + piece.span_offset;
        spans.push_back(GoldSpan{piece.sentence.substr(piece.span_offset, piece.span_length), start,
                                 start + piece.span_length});
      }
      doc.text += piece.sentence;
      in_paragraph = (in_paragraph + 1) % paragraph_size;
    }
    doc.gold_spans = std::move(spans);
    validate_document(doc);
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace crowdspan
