#include "crowdspan/heuristic.hpp"

#include <algorithm>
#include <sstream>

#include "crowdspan/error.hpp"

namespace crowdspan {

namespace {

std::vector<std::string> split_words(const std::string& pattern) {
  std::istringstream in(pattern);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(to_lower(w));
  return words;
}

std::size_t sentence_of(std::span<const Sentence> sentences, std::size_t token) {
  auto it = std::upper_bound(sentences.begin(), sentences.end(), token,
                             [](std::size_t t, const Sentence& s) { return t < s.end; });
  return static_cast<std::size_t>(it - sentences.begin());
}

}  // namespace

const HeuristicOptions& default_heuristic_options() {
  static const HeuristicOptions options;
  return options;
}

void validate(const HeuristicOptions& options) {
  validate(options.quantity.buckets);
  validate(options.quantity.vague);
  if (options.keywords.empty()) throw ConfigError("keyword list must be nonempty");
  if (options.modifiers.empty()) throw ConfigError("modifier lexicon must be nonempty");
  for (const auto& m : options.modifiers) {
    if (split_words(m).empty()) throw ConfigError("modifier patterns must contain a word");
  }
}

std::string_view to_string(NoneReason reason) {
  switch (reason) {
    case NoneReason::NoNumberPhrase:
      return "no_number_phrase";
    case NoneReason::NoMagnitudeMatch:
      return "no_magnitude_match";
  }
  return "unknown";
}

std::vector<NumberPhrase> filter_by_magnitude(std::span<const NumberPhrase> phrases, MagnitudeLabel coarse,
                                              const BucketTable& buckets) {
  std::vector<NumberPhrase> kept;
  for (const auto& p : phrases) {
    if (magnitude_bucket(static_cast<std::int64_t>(p.value), buckets) == coarse) kept.push_back(p);
  }
  return kept;
}

std::vector<std::size_t> keyword_sentence_indices(std::span<const Sentence> sentences,
                                                  std::span<const Token> tokens,
                                                  std::span<const std::string> keywords) {
  std::vector<std::size_t> indices;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t t = sentences[s].begin; t < sentences[s].end; ++t) {
      if (matches_stem(to_lower(tokens[t].text), keywords)) {
        indices.push_back(s);
        break;
      }
    }
  }
  return indices;
}

TokenRange expand_modifiers(const NumberPhrase& phrase, const Sentence& sentence, std::span<const Token> tokens,
                            std::span<const std::string> modifiers) {
  std::vector<std::vector<std::string>> patterns;
  patterns.reserve(modifiers.size());
  for (const auto& m : modifiers) patterns.push_back(split_words(m));
  std::stable_sort(patterns.begin(), patterns.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  TokenRange range = phrase.tokens;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& pattern : patterns) {
      if (pattern.empty() || range.begin < sentence.begin + pattern.size()) continue;
      const std::size_t from = range.begin - pattern.size();
      bool match = true;
      for (std::size_t k = 0; k < pattern.size() && match; ++k) {
        match = to_lower(tokens[from + k].text) == pattern[k];
      }
      if (match) {
        range.begin = from;
        grew = true;
        break;
      }
    }
  }
  return range;
}

namespace {

struct Analysis {
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;
  std::vector<NumberPhrase> phrases;
};

Analysis analyze(std::string_view text, const QuantityOptions& options) {
  Analysis a;
  a.tokens = tokenize(text);
  a.sentences = segment_sentences(a.tokens);
  a.phrases = find_number_phrases(a.tokens, text, options);
  return a;
}

std::vector<Candidate> candidates_from(const Analysis& a, MagnitudeLabel coarse, const HeuristicOptions& options) {
  const std::vector<NumberPhrase> matching = filter_by_magnitude(a.phrases, coarse, options.quantity.buckets);
  const std::vector<std::size_t> keyword_sentences = keyword_sentence_indices(a.sentences, a.tokens, options.keywords);
  std::vector<Candidate> out;
  out.reserve(matching.size());
  for (const auto& p : matching) {
    Candidate c;
    c.phrase = p;
    c.sentence_index = sentence_of(a.sentences, p.tokens.begin);
    c.in_keyword_sentence = std::binary_search(keyword_sentences.begin(), keyword_sentences.end(), c.sentence_index);
    c.expanded = expand_modifiers(p, a.sentences[c.sentence_index], a.tokens, options.modifiers);
    c.start = a.tokens[c.expanded.begin].start;
    c.end = a.tokens[c.expanded.end - 1].end;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<Candidate> collect_candidates(std::string_view text, MagnitudeLabel coarse,
                                          const HeuristicOptions& options) {
  return candidates_from(analyze(text, options.quantity), coarse, options);
}

ExtractionResult extract(std::string_view text, MagnitudeLabel coarse, const HeuristicOptions& options) {
  const Analysis analysis = analyze(text, options.quantity);
  ExtractionResult result;
  if (analysis.phrases.empty()) {
    result.none_reason = NoneReason::NoNumberPhrase;
    return result;
  }
  const std::vector<Candidate> candidates = candidates_from(analysis, coarse, options);
  if (candidates.empty()) {
    result.none_reason = NoneReason::NoMagnitudeMatch;
    return result;
  }
  // Candidates are position-ordered, so the first keyword-sentence candidate
  // lies in the earliest keyword sentence that has one.
  auto chosen = std::find_if(candidates.begin(), candidates.end(),
                             [](const Candidate& c) { return c.in_keyword_sentence; });
  if (chosen == candidates.end()) {
    chosen = candidates.begin();
    result.fallback_used = true;
  }
  result.span = ExtractedSpan{std::string(text.substr(chosen->start, chosen->end - chosen->start)), chosen->start,
                              chosen->end};
  return result;
}

}  // namespace crowdspan
