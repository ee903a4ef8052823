#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "crowdspan/corpus.hpp"

namespace crowdspan {

struct SyntheticCorpusConfig {
  std::size_t documents = 240;
  std::uint64_t seed = 7;
  std::size_t min_distractors = 2;
  std::size_t max_distractors = 4;
};

// Templated news-style documents. Each has one keyword sentence holding a
// hedged crowd-size phrase (the single gold span, whose magnitude sets the
// coarse label) and 2-4 numbers of other magnitudes in non-keyword
// sentences, spread over several '\n'-separated paragraphs.
std::vector<Document> make_synthetic_corpus(const SyntheticCorpusConfig& config = {});

}  // namespace crowdspan
