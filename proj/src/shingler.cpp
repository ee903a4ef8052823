#include "crowdspan/shingler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "crowdspan/error.hpp"

namespace crowdspan {

namespace {

constexpr std::size_t kMarkerSlots = 2;

std::size_t first_argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_scores(const std::vector<double>& scores, std::size_t n, std::size_t shingle, const char* which) {
  const std::string where = "shingle " + std::to_string(shingle) + " " + which + " scores: ";
  if (scores.size() != n)
    throw ValidationError(where + "expected " + std::to_string(n) + " entries, got " + std::to_string(scores.size()));
  double sum = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError(where + "entries must lie in [0, 1]");
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ValidationError(where + "entries must sum to 1");
}

}  // namespace

void validate(const ShingleConfig& config) {
  if (config.window == 0) throw ConfigError("shingle window must be positive");
  if (config.stride == 0 || config.stride > config.window)
    throw ConfigError("shingle stride must satisfy 0 < stride <= window");
  if (config.question_budget < kMarkerSlots)
    throw ConfigError("question budget must leave room for the start marker and separator");
  if (config.window + config.question_budget > config.sequence_length)
    throw ConfigError("window + question budget exceeds the sequence length");
}

std::vector<Shingle> make_shingles(std::size_t token_count, const ShingleConfig& config, const std::string& doc_id) {
  if (config.window == 0 || config.stride == 0 || config.stride > config.window)
    throw ConfigError("shingling requires 0 < stride <= window");
  const std::size_t w = config.window;
  if (token_count <= w) return {Shingle{doc_id, 0, 0, token_count}};

  const std::size_t last_start = token_count - w;
  std::vector<Shingle> shingles;
  for (std::size_t start = 0; start < last_start; start += config.stride) {
    shingles.push_back(Shingle{doc_id, shingles.size(), start, start + w});
  }
  shingles.push_back(Shingle{doc_id, shingles.size(), last_start, token_count});
  return shingles;
}

std::vector<Shingle> make_shingles(std::span<const Token> tokens, const ShingleConfig& config,
                                   const std::string& doc_id) {
  return make_shingles(tokens.size(), config, doc_id);
}

std::optional<std::size_t> SequenceLayout::context_of_slot(std::size_t slot) const {
  if (slot < context_begin() || slot >= context_begin() + context_) return std::nullopt;
  return slot - context_begin();
}

SequenceLayout layout_sequence(std::size_t context_tokens, std::size_t question_tokens, const ShingleConfig& config) {
  if (context_tokens == 0) throw ConfigError("sequence layout needs at least one context token");
  if (context_tokens > config.window)
    throw ConfigError("context of " + std::to_string(context_tokens) + " tokens exceeds the " +
                      std::to_string(config.window) + "-token window; shingle first");
  if (question_tokens + kMarkerSlots > config.question_budget)
    throw ConfigError("question of " + std::to_string(question_tokens) + " tokens exceeds the " +
                      std::to_string(config.question_budget) + "-slot question budget");
  if (kMarkerSlots + question_tokens + context_tokens > config.sequence_length)
    throw ConfigError("sequence layout exceeds the sequence length");
  SequenceLayout layout;
  layout.length_ = config.sequence_length;
  layout.question_ = question_tokens;
  layout.context_ = context_tokens;
  return layout;
}

AggregatedSpan aggregate_predictions(std::span<const ShinglePrediction> predictions,
                                     std::span<const Shingle> shingles, std::span<const Token> tokens,
                                     std::size_t question_tokens, const ShingleConfig& config) {
  if (predictions.empty()) throw ValidationError("no shingle predictions to aggregate");
  std::unordered_map<std::size_t, const Shingle*> by_index;
  for (const auto& s : shingles) by_index.emplace(s.shingle_index, &s);

  const ShinglePrediction* best = nullptr;
  double best_score = 0.0;
  std::unordered_map<std::size_t, bool> seen;
  for (const auto& p : predictions) {
    if (!by_index.contains(p.shingle_index))
      throw ValidationError("prediction for unknown shingle " + std::to_string(p.shingle_index));
    if (seen[p.shingle_index]) throw ValidationError("duplicate prediction for shingle " + std::to_string(p.shingle_index));
    seen[p.shingle_index] = true;
    check_scores(p.start_scores, config.sequence_length, p.shingle_index, "start");
    check_scores(p.end_scores, config.sequence_length, p.shingle_index, "end");
    const double score = *std::max_element(p.start_scores.begin(), p.start_scores.end()) +
                         *std::max_element(p.end_scores.begin(), p.end_scores.end());
    if (best == nullptr || score > best_score || (score == best_score && p.shingle_index < best->shingle_index)) {
      best = &p;
      best_score = score;
    }
  }

  const Shingle& shingle = *by_index.at(best->shingle_index);
  AggregatedSpan out;
  out.shingle_index = best->shingle_index;
  const std::size_t start_slot = first_argmax(best->start_scores);
  const std::size_t end_slot = first_argmax(best->end_scores);
  if (shingle.width() == 0 || (start_slot == 0 && end_slot == 0)) {
    out.is_impossible = true;
    return out;
  }
  const SequenceLayout layout = layout_sequence(shingle.width(), question_tokens, config);
  const auto start_ctx = layout.context_of_slot(start_slot);
  const auto end_ctx = layout.context_of_slot(end_slot);
  if (!start_ctx || !end_ctx || *start_ctx > *end_ctx) {
    out.is_impossible = true;
    return out;
  }
  out.start_token = shingle.window_start + *start_ctx;
  out.end_token = shingle.window_start + *end_ctx;
  if (out.end_token >= tokens.size())
    throw ValidationError("shingle " + std::to_string(shingle.shingle_index) + " extends past the document tokens");
  out.start = tokens[out.start_token].start;
  out.end = tokens[out.end_token].end;
  return out;
}

}  // namespace crowdspan
