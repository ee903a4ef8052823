#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdspan/quantity.hpp"

namespace crowdspan {

struct HeuristicOptions {
  QuantityOptions quantity;
  // Lowercase stems; a token matches when it starts with one of them.
  std::vector<std::string> keywords = {"protesters", "demonstrators", "gathered", "crowd",
                                       "rallied",    "attended",      "picketed", "protest"};
  // Hedge patterns absorbed to the left of a number phrase, one or more
  // lowercase words each.
  std::vector<std::string> modifiers = {"more than", "at least", "up to",  "as many as", "an estimated",
                                        "about",     "around",   "approximately", "nearly", "roughly",
                                        "over",      "some",     "almost", "estimated"};
};

const HeuristicOptions& default_heuristic_options();

// Throws ConfigError on empty keyword or modifier lists.
void validate(const HeuristicOptions& options);

// A magnitude-matching phrase with its hedge-expanded extent.
struct Candidate {
  NumberPhrase phrase;
  std::size_t sentence_index = 0;
  bool in_keyword_sentence = false;
  TokenRange expanded;
  std::size_t start = 0;  // byte offsets of the expanded range
  std::size_t end = 0;
};

enum class NoneReason { NoNumberPhrase, NoMagnitudeMatch };

std::string_view to_string(NoneReason reason);

struct ExtractedSpan {
  std::string text;
  std::size_t start = 0;  // byte offsets into the document text
  std::size_t end = 0;

  bool operator==(const ExtractedSpan&) const = default;
};

struct ExtractionResult {
  std::optional<ExtractedSpan> span;
  std::optional<NoneReason> none_reason;
  // Set when no keyword sentence held a magnitude match and the first
  // document-wide match was taken instead.
  bool fallback_used = false;

  bool operator==(const ExtractionResult&) const = default;
};

std::vector<NumberPhrase> filter_by_magnitude(std::span<const NumberPhrase> phrases, MagnitudeLabel coarse,
                                              const BucketTable& buckets = BucketTable{});

std::vector<std::size_t> keyword_sentence_indices(std::span<const Sentence> sentences,
                                                  std::span<const Token> tokens,
                                                  std::span<const std::string> keywords =
                                                      default_heuristic_options().keywords);

TokenRange expand_modifiers(const NumberPhrase& phrase, const Sentence& sentence, std::span<const Token> tokens,
                            std::span<const std::string> modifiers = default_heuristic_options().modifiers);

// Every magnitude-matching phrase in position order, expanded and flagged.
std::vector<Candidate> collect_candidates(std::string_view text, MagnitudeLabel coarse,
                                          const HeuristicOptions& options = default_heuristic_options());

// Full rule pipeline over one document text.
ExtractionResult extract(std::string_view text, MagnitudeLabel coarse,
                         const HeuristicOptions& options = default_heuristic_options());

}  // namespace crowdspan
