#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crowdspan {

// A token with byte offsets into the source text. JSON emitters convert the
// offsets to code points; everything in-process works on bytes.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

// Half-open token index range [begin, end).
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool contains(const TokenRange& other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const TokenRange&) const = default;
};

using Sentence = TokenRange;

struct NumberPhrase {
  TokenRange tokens;
  std::uint64_t value = 0;
  std::string surface;

  bool operator==(const NumberPhrase&) const = default;
};

// Order-of-magnitude crowd-size category, 0..3.
class MagnitudeLabel {
 public:
  static constexpr int kMax = 3;

  MagnitudeLabel() = default;
  // Throws DomainError outside 0..3.
  explicit MagnitudeLabel(int label);

  int value() const { return label_; }
  bool operator==(const MagnitudeLabel&) const = default;

 private:
  int label_ = 0;
};

// Lower bounds of labels 1, 2 and 3. Must be strictly increasing and > 1.
struct BucketTable {
  std::uint64_t thresholds[3] = {100, 1000, 10000};
};

// Readings for vague quantities. Multipliers only count when they directly
// precede a scale word ("several dozen"); plurals stand alone or combine as
// "<plural> of <larger plural>" ("tens of thousands").
struct VagueTable {
  std::map<std::string, std::uint64_t> multipliers = {
      {"a", 1}, {"a couple", 2}, {"a few", 3}, {"several", 3}};
  std::map<std::string, std::uint64_t> plurals = {
      {"tens", 20}, {"dozens", 24}, {"hundreds", 200}, {"thousands", 2000}, {"millions", 2000000}};
};

struct QuantityOptions {
  BucketTable buckets;
  VagueTable vague;
  // Words that keep an adjacent year-like number ("2000 protesters").
  std::vector<std::string> crowd_words = {
      "protesters", "demonstrators", "gathered", "crowd",    "rallied",  "attended",
      "picketed",   "protest",       "people",   "marchers", "participants", "supporters",
      "residents",  "students",      "workers",  "activists", "persons"};
  // Longest phrase considered, in tokens.
  std::size_t max_phrase_tokens = 12;
};

const QuantityOptions& default_quantity_options();

std::vector<Token> tokenize(std::string_view text);

std::vector<Sentence> segment_sentences(std::span<const Token> tokens);

// Returns the value of a complete number phrase, or nullopt when the words do
// not form one (callers skip such phrases).
std::optional<std::uint64_t> phrase_to_value(std::span<const std::string> words,
                                             const VagueTable& vague = VagueTable{});

// Throwing variant for callers that require a parse. Throws ParseError.
std::uint64_t phrase_to_value_or_throw(std::span<const std::string> words,
                                       const VagueTable& vague = VagueTable{});

std::vector<NumberPhrase> find_number_phrases(std::span<const Token> tokens,
                                              std::string_view text,
                                              const QuantityOptions& options = default_quantity_options());

// Throws DomainError for value < 1.
MagnitudeLabel magnitude_bucket(std::int64_t value, const BucketTable& table = BucketTable{});

// Throws ConfigError when thresholds are not strictly increasing above 1.
void validate(const BucketTable& table);
// Throws ConfigError for empty tables or plural words without a known scale.
void validate(const VagueTable& table);

// True when the lowercased word starts with one of the (lowercase) stems.
bool matches_stem(std::string_view lowered_word, std::span<const std::string> stems);

// Trims ASCII punctuation and common typographic marks from both ends.
std::string_view strip_punctuation(std::string_view word);

// ASCII lowercase; multibyte sequences pass through unchanged.
std::string to_lower(std::string_view s);

}  // namespace crowdspan
