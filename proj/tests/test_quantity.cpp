#include <string>
#include <vector>

#include "crowdspan/error.hpp"
#include "crowdspan/quantity.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crowdspan;

namespace {

std::optional<std::uint64_t> value_of(const std::string& phrase) {
  const auto words = oracle::split_words(phrase);
  return phrase_to_value(words);
}

std::vector<std::string> surfaces(const std::string& text) {
  std::vector<std::string> out;
  const auto tokens = tokenize(text);
  for (const auto& p : find_number_phrases(tokens, text)) out.push_back(p.surface);
  return out;
}

}  // namespace

TEST_CASE("tokenize keeps byte offsets and peels punctuation") {
  const std::string text = "“About 2,000,” she said.";
  const auto tokens = tokenize(text);
  REQUIRE(tokens.size() == 8);
  CHECK(tokens[0].text == "“");
  CHECK(tokens[1].text == "About");
  CHECK(tokens[2].text == "2,000");
  CHECK(tokens[3].text == ",");
  CHECK(tokens[4].text == "”");
  CHECK(tokens[7].text == ".");
  for (const auto& t : tokens) CHECK(text.substr(t.start, t.end - t.start) == t.text);
  for (std::size_t i = 0; i < tokens.size(); ++i) CHECK(tokens[i].index == i);
}

TEST_CASE("tokenize keeps hyphenated words and inner apostrophes") {
  const auto tokens = tokenize("forty-two people didn't leave");
  REQUIRE(tokens.size() == 4);
  CHECK(tokens[0].text == "forty-two");
  CHECK(tokens[2].text == "didn't");
}

TEST_CASE("sentence segmentation honours abbreviations") {
  const std::string text = "Mr. Smith spoke at 5 p.m. on Main St. Later, 300 people came. Then they left!";
  const auto tokens = tokenize(text);
  const auto sentences = segment_sentences(tokens);
  REQUIRE(sentences.size() >= 2);
  const auto& last = sentences.back();
  CHECK(tokens[last.begin].text == "Then");
  // No sentence may begin right after "Mr.".
  for (const auto& s : sentences) CHECK(tokens[s.begin].text != "Smith");
}

TEST_CASE("sentences cover every token exactly once") {
  const std::string text = "One. Two! Three? \"Four.\" Five";
  const auto tokens = tokenize(text);
  const auto sentences = segment_sentences(tokens);
  std::size_t next = 0;
  for (const auto& s : sentences) {
    CHECK(s.begin == next);
    CHECK(s.end > s.begin);
    next = s.end;
  }
  CHECK(next == tokens.size());
  CHECK(sentences.size() == 5);
}

TEST_CASE("phrase_to_value reads cardinals") {
  CHECK(value_of("seven") == 7u);
  CHECK(value_of("forty-two") == 42u);
  CHECK(value_of("forty two") == 42u);
  CHECK(value_of("one hundred and five") == 105u);
  CHECK(value_of("two thousand three hundred") == 2300u);
  CHECK(value_of("1,500") == 1500u);
  CHECK(value_of("15") == 15u);
  CHECK(value_of("3 million") == 3000000u);
  CHECK(value_of("a hundred") == 100u);
  CHECK(value_of("a thousand") == 1000u);
  CHECK(value_of("Two Thousand") == 2000u);
}

TEST_CASE("phrase_to_value reads vague quantities") {
  CHECK(value_of("dozens") == 24u);
  CHECK(value_of("hundreds") == 200u);
  CHECK(value_of("thousands") == 2000u);
  CHECK(value_of("several hundred") == 300u);
  CHECK(value_of("a few thousand") == 3000u);
  CHECK(value_of("a couple hundred") == 200u);
  CHECK(value_of("several dozen") == 36u);
  CHECK(value_of("tens of thousands") == 20000u);
  CHECK(value_of("hundreds of thousands") == 200000u);
  CHECK(value_of("dozen") == 12u);
  CHECK(value_of("two dozen") == 24u);
}

TEST_CASE("phrase_to_value rejects malformed phrases") {
  CHECK_FALSE(value_of("tens").has_value());
  CHECK_FALSE(value_of("thousands of hundreds").has_value());
  CHECK_FALSE(value_of("several").has_value());
  CHECK_FALSE(value_of("thousand thousand").has_value());
  CHECK_FALSE(value_of("and five").has_value());
  CHECK_FALSE(value_of("protesters").has_value());
  CHECK_FALSE(value_of("1,50").has_value());
  CHECK_FALSE(value_of("0").has_value());
  CHECK_FALSE(value_of("").has_value());
  const std::vector<std::string> bad = {"tens"};
  CHECK_THROWS_AS(phrase_to_value_or_throw(bad), ParseError);
}

TEST_CASE("round trip through the words oracle, all styles") {
  std::size_t failures = 0;
  for (unsigned v = 1; v <= 9999; ++v) {
    for (const bool hyphen : {true, false}) {
      for (const bool use_and : {true, false}) {
        const auto got = value_of(oracle::words(v, {hyphen, use_and}));
        if (got != v) ++failures;
      }
    }
    if (value_of(std::to_string(v)) != v) ++failures;
    if (value_of(oracle::with_commas(v)) != v) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("find_number_phrases takes the longest match") {
  CHECK(surfaces("Some two thousand three hundred people marched.") ==
        std::vector<std::string>{"two thousand three hundred"});
  CHECK(surfaces("Tens of thousands gathered, then hundreds left.") ==
        std::vector<std::string>{"Tens of thousands", "hundreds"});
}

TEST_CASE("find_number_phrases skips years unless a crowd word is adjacent") {
  CHECK(surfaces("The group was founded in 1999.").empty());
  CHECK(surfaces("In 2019 the council met.").empty());
  CHECK(surfaces("About 2000 protesters came.") == std::vector<std::string>{"2000"});
  CHECK(surfaces("It cost 2500 dollars.") == std::vector<std::string>{"2500"});
}

TEST_CASE("find_number_phrases ignores ordinals and stray words") {
  CHECK(surfaces("The first and second marches.").empty());
  CHECK(surfaces("A crowd formed.").empty());
}

TEST_CASE("magnitude buckets") {
  CHECK(magnitude_bucket(1).value() == 0);
  CHECK(magnitude_bucket(99).value() == 0);
  CHECK(magnitude_bucket(100).value() == 1);
  CHECK(magnitude_bucket(999).value() == 1);
  CHECK(magnitude_bucket(1000).value() == 2);
  CHECK(magnitude_bucket(9999).value() == 2);
  CHECK(magnitude_bucket(10000).value() == 3);
  CHECK(magnitude_bucket(5000000).value() == 3);
  CHECK_THROWS_AS(magnitude_bucket(0), DomainError);
  CHECK_THROWS_AS(magnitude_bucket(-5), DomainError);
  CHECK_THROWS_AS(MagnitudeLabel(4), DomainError);
  CHECK_THROWS_AS(MagnitudeLabel(-1), DomainError);
}

TEST_CASE("bucket and vague table validation") {
  BucketTable bad;
  bad.thresholds[1] = 50;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  CHECK_NOTHROW(validate(BucketTable{}));
  VagueTable vague;
  vague.plurals["scores"] = 40;
  CHECK_THROWS_AS(validate(vague), ConfigError);
}

TEST_CASE("strip_punctuation and to_lower") {
  CHECK(strip_punctuation("“50,”") == "50");
  CHECK(strip_punctuation("(about") == "about");
  CHECK(strip_punctuation("...") == "");
  CHECK(to_lower("ÉTÉ Crowd") == "ÉtÉ crowd");
}
