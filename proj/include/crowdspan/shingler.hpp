#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crowdspan/quantity.hpp"

namespace crowdspan {

struct ShingleConfig {
  std::size_t window = 450;
  std::size_t stride = 225;
  std::size_t sequence_length = 512;
  // Slots for the start marker, the question and the separator together.
  std::size_t question_budget = 62;
};

// Throws ConfigError unless 0 < stride <= window and
// window + question_budget <= sequence_length with room for both markers.
void validate(const ShingleConfig& config);

struct Shingle {
  std::string doc_id;
  std::size_t shingle_index = 0;
  std::size_t window_start = 0;
  std::size_t window_end = 0;  // exclusive, in document tokens

  std::size_t width() const { return window_end - window_start; }
  bool operator==(const Shingle&) const = default;
};

// Window starts 0, S, 2S, ... with the last window pinned to end at the final
// token. Documents no longer than W give one shingle.
std::vector<Shingle> make_shingles(std::size_t token_count, const ShingleConfig& config = {},
                                   const std::string& doc_id = {});
std::vector<Shingle> make_shingles(std::span<const Token> tokens, const ShingleConfig& config = {},
                                   const std::string& doc_id = {});

// Fixed slot layout: [start marker][question][separator][context][padding].
class SequenceLayout {
 public:
  std::size_t length() const { return length_; }
  std::size_t question_tokens() const { return question_; }
  std::size_t context_tokens() const { return context_; }
  std::size_t question_begin() const { return 1; }
  std::size_t separator_slot() const { return 1 + question_; }
  std::size_t context_begin() const { return 2 + question_; }
  std::size_t padding() const { return length_ - context_begin() - context_; }

  // Slot of the i-th context token; requires i < context_tokens().
  std::size_t slot_of_context(std::size_t i) const { return context_begin() + i; }
  // Context token at a slot, or nullopt for marker/question/separator/padding.
  std::optional<std::size_t> context_of_slot(std::size_t slot) const;

 private:
  friend SequenceLayout layout_sequence(std::size_t, std::size_t, const ShingleConfig&);
  std::size_t length_ = 0;
  std::size_t question_ = 0;
  std::size_t context_ = 0;
};

// Throws ConfigError for an empty context, a context longer than the window,
// or a question that does not fit the question budget.
SequenceLayout layout_sequence(std::size_t context_tokens, std::size_t question_tokens,
                               const ShingleConfig& config = {});

struct ShinglePrediction {
  std::size_t shingle_index = 0;
  std::vector<double> start_scores;
  std::vector<double> end_scores;
};

struct AggregatedSpan {
  std::size_t shingle_index = 0;
  bool is_impossible = false;
  // Inclusive document token indices; meaningful unless is_impossible.
  std::size_t start_token = 0;
  std::size_t end_token = 0;
  // Byte range into the document text.
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const AggregatedSpan&) const = default;
};

// Picks the shingle with the largest max(start) + max(end) (lowest index on
// an exact tie) and maps its argmax slots back to document tokens. Both
// argmaxes on slot 0 signal no answer; so does any argmax outside the context
// slots or a start after the end. Throws ValidationError for an empty list,
// unknown shingle indices, or malformed score vectors.
AggregatedSpan aggregate_predictions(std::span<const ShinglePrediction> predictions,
                                     std::span<const Shingle> shingles, std::span<const Token> tokens,
                                     std::size_t question_tokens = 0, const ShingleConfig& config = {});

}  // namespace crowdspan
