#include <set>
#include <sstream>
#include <string>

#include "crowdspan/corpus.hpp"
#include "crowdspan/error.hpp"
#include "crowdspan/random.hpp"
#include "crowdspan/synthetic.hpp"
#include "doctest.h"

using namespace crowdspan;

namespace {

Document doc(const std::string& id, const std::string& text, std::optional<int> label = 1) {
  Document d;
  d.id = id;
  d.text = text;
  d.coarse_label = label;
  return d;
}

std::vector<Document> read(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return read_corpus(in);
}

std::vector<Document> numbered(std::size_t n) {
  std::vector<Document> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(doc("d" + std::to_string(i), "text " + std::to_string(i)));
  return out;
}

}  // namespace

TEST_CASE("JSONL round trip preserves documents, with code point offsets on disk") {
  Document d = doc("a", "Café: “about 300” protesters", 1);
  d.url = "https://example.org/a";
  const std::string span = "about 300";
  const std::size_t start = d.text.find(span);
  d.gold_spans = std::vector<GoldSpan>{{span, start, start + span.size()}};
  Document e = doc("b", "No label here", std::nullopt);
  e.gold_spans = std::vector<GoldSpan>{};

  std::ostringstream out;
  const std::vector<Document> corpus = {d, e};
  write_corpus(out, corpus);
  CHECK(out.str().find("\"start_char\":7") != std::string::npos);
  CHECK(read(out.str()) == corpus);
}

TEST_CASE("reader rejects malformed records with the line number") {
  CHECK_THROWS_WITH_AS(read("{\"id\":\"a\",\"text\":\"x\"}\nnot json\n"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(read("{\"id\":\"a\"}\n"), ParseError);
  CHECK_THROWS_AS(read("{\"id\":\"a\",\"text\":\"x\",\"colour\":1}\n"), ParseError);
  CHECK_THROWS_AS(read("[1,2]\n"), ParseError);
}

TEST_CASE("validation names the offending document") {
  CHECK_THROWS_WITH_AS(read("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n"),
                       doctest::Contains("\"a\""), ValidationError);
  CHECK_THROWS_WITH_AS(read("{\"id\":\"q\",\"text\":\"x\",\"coarse_label\":5}\n"), doctest::Contains("\"q\""),
                       ValidationError);
  CHECK_THROWS_AS(
      read("{\"id\":\"a\",\"text\":\"hello\",\"gold_spans\":[{\"text\":\"hex\",\"start_char\":0,\"end_char\":3}]}\n"),
      ValidationError);
  CHECK_THROWS_AS(
      read("{\"id\":\"a\",\"text\":\"hello\",\"gold_spans\":[{\"text\":\"hello!\",\"start_char\":0,\"end_char\":6}]}\n"),
      ValidationError);
  CHECK(read("\n{\"id\":\"a\",\"text\":\"hello\"}\n\n").size() == 1);
}

TEST_CASE("apportion uses largest remainders") {
  CHECK(apportion(default_split_ratios(), 3849) == SplitCounts{2694, 25, 200, 930});
  CHECK(apportion({0.7, 0.1, 0.1, 0.1}, 10) == SplitCounts{7, 1, 1, 1});
  CHECK(apportion({0.25, 0.25, 0.25, 0.25}, 2) == SplitCounts{1, 1, 0, 0});
  CHECK_THROWS_AS(apportion({0.5, 0.5, 0.5, -0.5}, 10), ConfigError);
  CHECK_THROWS_AS(apportion({0.5, 0.1, 0.1, 0.1}, 10), ConfigError);
}

TEST_CASE("split is a seeded partition for every corpus size") {
  for (std::size_t n = 1; n <= 1000; n += (n < 50 ? 1 : 37)) {
    const auto corpus = numbered(n);
    SplitSpec spec;
    spec.sizes = default_split_ratios();
    spec.seed = n;
    const SplitResult r = split_corpus(corpus, spec);
    const SplitCounts counts = apportion(default_split_ratios(), n);
    std::multiset<std::string> seen;
    for (std::size_t p = 0; p < 4; ++p) {
      CHECK(r.ids[p].size() == counts[p]);
      seen.insert(r.ids[p].begin(), r.ids[p].end());
    }
    CHECK(seen.size() == n);
    CHECK(std::set<std::string>(seen.begin(), seen.end()).size() == n);
    CHECK(split_corpus(corpus, spec) == r);
  }
}

TEST_CASE("split seed changes the assignment and counts must add up") {
  const auto corpus = numbered(100);
  SplitSpec a;
  a.sizes = SplitCounts{70, 10, 10, 10};
  a.seed = 1;
  SplitSpec b = a;
  b.seed = 2;
  CHECK_FALSE(split_corpus(corpus, a) == split_corpus(corpus, b));
  a.sizes = SplitCounts{70, 10, 10, 9};
  CHECK_THROWS_AS(split_corpus(corpus, a), ConfigError);
  CHECK_THROWS_AS(split_corpus(std::vector<Document>{}, b), ConfigError);
}

TEST_CASE("materialized parts drop the fields their role must not see") {
  const auto corpus = make_synthetic_corpus({20, 3});
  SplitSpec spec;
  spec.sizes = SplitCounts{10, 5, 3, 2};
  const auto parts = materialize_split(corpus, split_corpus(corpus, spec), true);
  for (const auto& d : parts[0]) CHECK_FALSE(d.gold_spans.has_value());
  for (const auto& d : parts[1]) {
    CHECK_FALSE(d.coarse_label.has_value());
    CHECK(d.text.find('\n') == std::string::npos);
    validate_document(d);
  }
  for (const auto& d : parts[2]) CHECK(d.gold_spans.has_value());
}

TEST_CASE("truncation keeps the first span's paragraph with re-based offsets") {
  Document d = doc("t", "First para.\nSecond has 300 people.\nThird.");
  const std::size_t start = d.text.find("300");
  d.gold_spans = std::vector<GoldSpan>{{"300", start, start + 3}};
  const Document t = truncate_to_first_span_paragraph(d);
  CHECK(t.text == "Second has 300 people.");
  REQUIRE(t.gold_spans->size() == 1);
  CHECK(t.text.substr((*t.gold_spans)[0].start, 3) == "300");
  const Document plain = doc("p", "a\nb");
  CHECK(truncate_to_first_span_paragraph(plain) == plain);
}

TEST_CASE("parallel extraction equals the serial reference and keeps order") {
  const auto corpus = make_synthetic_corpus({120, 11});
  const auto serial = extract_corpus_serial(corpus);
  for (int threads : {1, 2, 4}) CHECK(extract_corpus(corpus, default_heuristic_options(), threads) == serial);
}

TEST_CASE("weak labels replace gold spans with the extractor's output") {
  std::vector<Document> corpus = {doc("a", "About 300 protesters came.", 1), doc("b", "Nothing here.", 2)};
  const auto labelled = emit_weak_labels(corpus);
  REQUIRE(labelled[0].gold_spans->size() == 1);
  CHECK((*labelled[0].gold_spans)[0].text == "About 300");
  CHECK(labelled[1].gold_spans->empty());
  corpus.push_back(doc("c", "x", std::nullopt));
  CHECK_THROWS_WITH_AS(emit_weak_labels(corpus), doctest::Contains("\"c\""), ValidationError);
}

TEST_CASE("synthetic corpus is deterministic and self-consistent") {
  const auto a = make_synthetic_corpus({50, 5});
  CHECK(a == make_synthetic_corpus({50, 5}));
  CHECK_FALSE(a == make_synthetic_corpus({50, 6}));
  for (const auto& d : a) {
    validate_document(d);
    REQUIRE(d.gold_spans->size() == 1);
    REQUIRE(d.coarse_label);
  }
}

TEST_CASE("Rng derived draws stay in range") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.below(7) < 7u);
    const auto v = rng.between(-3, 3);
    CHECK((v >= -3 && v <= 3));
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
  Rng x(9), y(9);
  for (int i = 0; i < 10; ++i) CHECK(x.normal() == y.normal());
}
