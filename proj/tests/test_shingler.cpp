#include <string>
#include <vector>

#include "crowdspan/error.hpp"
#include "crowdspan/shingler.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crowdspan;

namespace {

std::vector<Token> tokens_of(std::size_t n) {
  std::string text;
  for (std::size_t i = 0; i < n; ++i) text += "w" + std::to_string(i) + " ";
  return tokenize(text);
}

// Scores putting all mass on one slot.
std::vector<double> peak(std::size_t n, std::size_t slot, double mass = 1.0) {
  std::vector<double> v(n, n > 1 ? (1.0 - mass) / static_cast<double>(n - 1) : 0.0);
  v[slot] = n > 1 ? mass : 1.0;
  return v;
}

}  // namespace

TEST_CASE("window starts match the oracle and cover the document") {
  const ShingleConfig config;
  for (std::size_t len = 1; len <= 2000; ++len) {
    const auto shingles = make_shingles(len, config);
    const auto expected = oracle::window_starts(len, 450, 225);
    REQUIRE(shingles.size() == expected.size());
    for (std::size_t i = 0; i < shingles.size(); ++i) {
      CHECK(shingles[i].window_start == expected[i]);
      CHECK(shingles[i].shingle_index == i);
    }
    CHECK(shingles.back().window_end == len);
  }
}

TEST_CASE("small documents get one shingle, smaller configs work too") {
  CHECK(make_shingles(0).size() == 1);
  const auto s = make_shingles(10, ShingleConfig{4, 3, 16, 4}, "d");
  REQUIRE(s.size() == 3);
  CHECK(s[0].window_start == 0);
  CHECK(s[1].window_start == 3);
  CHECK(s[2].window_start == 6);
  CHECK(s[2].doc_id == "d");
  CHECK_THROWS_AS(make_shingles(10, ShingleConfig{4, 5, 16, 4}), ConfigError);
  CHECK_THROWS_AS(make_shingles(10, ShingleConfig{4, 0, 16, 4}), ConfigError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate(ShingleConfig{}));
  CHECK_THROWS_AS(validate(ShingleConfig{450, 225, 500, 62}), ConfigError);
  CHECK_THROWS_AS(validate(ShingleConfig{450, 225, 512, 1}), ConfigError);
}

TEST_CASE("sequence layout places question and context after the markers") {
  const SequenceLayout layout = layout_sequence(450, 20);
  CHECK(layout.length() == 512);
  CHECK(layout.separator_slot() == 21);
  CHECK(layout.context_begin() == 22);
  CHECK(layout.padding() == 512 - 22 - 450);
  CHECK(layout.slot_of_context(0) == 22);
  CHECK(layout.context_of_slot(22) == 0u);
  CHECK(layout.context_of_slot(471) == 449u);
  CHECK_FALSE(layout.context_of_slot(0));
  CHECK_FALSE(layout.context_of_slot(21));
  CHECK_FALSE(layout.context_of_slot(472));
  CHECK_NOTHROW(layout_sequence(450, 60));
  CHECK_THROWS_AS(layout_sequence(450, 61), ConfigError);
  CHECK_THROWS_AS(layout_sequence(451, 0), ConfigError);
  CHECK_THROWS_AS(layout_sequence(0, 0), ConfigError);
}

TEST_CASE("aggregation picks the most confident shingle and maps back to tokens") {
  const auto tokens = tokens_of(1000);
  const auto shingles = make_shingles(tokens);
  const std::size_t q = 5;
  const std::size_t base = 2 + q;
  std::vector<ShinglePrediction> preds;
  preds.push_back({0, peak(512, base + 10, 0.6), peak(512, base + 12, 0.6)});
  preds.push_back({2, peak(512, base + 3, 0.9), peak(512, base + 5, 0.8)});
  const AggregatedSpan span = aggregate_predictions(preds, shingles, tokens, q);
  CHECK_FALSE(span.is_impossible);
  CHECK(span.shingle_index == 2);
  CHECK(span.start_token == 453);
  CHECK(span.end_token == 455);
  CHECK(span.start == tokens[453].start);
  CHECK(span.end == tokens[455].end);
}

TEST_CASE("aggregation ties go to the lowest shingle index") {
  const auto tokens = tokens_of(700);
  const auto shingles = make_shingles(tokens);
  std::vector<ShinglePrediction> preds;
  preds.push_back({1, peak(512, 4, 0.7), peak(512, 4, 0.7)});
  preds.push_back({0, peak(512, 3, 0.7), peak(512, 3, 0.7)});
  CHECK(aggregate_predictions(preds, shingles, tokens).shingle_index == 0);
}

TEST_CASE("impossible answers") {
  const auto tokens = tokens_of(100);
  const auto shingles = make_shingles(tokens);
  auto impossible = [&](std::size_t s, std::size_t e) {
    std::vector<ShinglePrediction> preds{{0, peak(512, s), peak(512, e)}};
    return aggregate_predictions(preds, shingles, tokens).is_impossible;
  };
  CHECK(impossible(0, 0));
  CHECK(impossible(5, 3));
  CHECK(impossible(1, 5));          // separator slot
  CHECK(impossible(2 + 100, 2 + 100));  // padding
  CHECK_FALSE(impossible(2, 2));
}

TEST_CASE("malformed predictions are rejected") {
  const auto tokens = tokens_of(100);
  const auto shingles = make_shingles(tokens);
  std::vector<ShinglePrediction> none;
  CHECK_THROWS_AS(aggregate_predictions(none, shingles, tokens), ValidationError);
  std::vector<ShinglePrediction> short_scores{{0, std::vector<double>(10, 0.1), peak(512, 2)}};
  CHECK_THROWS_AS(aggregate_predictions(short_scores, shingles, tokens), ValidationError);
  std::vector<ShinglePrediction> unknown{{3, peak(512, 2), peak(512, 2)}};
  CHECK_THROWS_AS(aggregate_predictions(unknown, shingles, tokens), ValidationError);
  std::vector<double> unnormalized(512, 0.0);
  unnormalized[2] = 0.5;
  std::vector<ShinglePrediction> bad_sum{{0, unnormalized, peak(512, 2)}};
  CHECK_THROWS_AS(aggregate_predictions(bad_sum, shingles, tokens), ValidationError);
}
