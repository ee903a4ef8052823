#include <sstream>

#include "crowdspan/error.hpp"
#include "crowdspan/metrics.hpp"
#include "crowdspan/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crowdspan;

namespace {

Prediction pred(const std::string& text) { return Prediction{"x", text, 0, text.size(), false}; }
Prediction no_answer() { return Prediction{"x", std::nullopt, std::nullopt, std::nullopt, false}; }

std::vector<GoldSpan> golds(std::initializer_list<std::string> texts) {
  std::vector<GoldSpan> out;
  for (const auto& t : texts) out.push_back({t, 0, t.size()});
  return out;
}

Document gold_doc(const std::string& id, const std::string& text, std::vector<std::string> spans) {
  Document d;
  d.id = id;
  d.text = text;
  std::vector<GoldSpan> g;
  for (const auto& s : spans) {
    const auto at = text.find(s);
    g.push_back({s, at, at + s.size()});
  }
  d.gold_spans = g;
  return d;
}

}  // namespace

TEST_CASE("hand cases") {
  CHECK(token_f1(pred("more than 50"), golds({"than 50"})) == 0.8);
  CHECK(token_f1(pred("about 300"), golds({"about 300"})) == 1.0);
  CHECK(token_f1(pred("about 300"), golds({"dozens"})) == 0.0);
  CHECK(exact_match(pred("About 300,"), golds({"about 300"})));
  CHECK_FALSE(exact_match(pred("300"), golds({"about 300"})));
}

TEST_CASE("no-answer conventions") {
  CHECK(exact_match(no_answer(), {}));
  CHECK(token_f1(no_answer(), {}) == 1.0);
  CHECK(token_f1(pred("300"), {}) == 0.0);
  CHECK(token_f1(no_answer(), golds({"300"})) == 0.0);
  CHECK_FALSE(exact_match(no_answer(), golds({"300"})));
}

TEST_CASE("max over multiple golds") {
  CHECK(token_f1(pred("about 300"), golds({"dozens", "300"})) == doctest::Approx(2.0 / 3.0));
  CHECK(exact_match(pred("300"), golds({"dozens", "300"})));
}

TEST_CASE("token f1 equals the brute-force oracle") {
  const std::vector<std::string> vocab = {"about", "300", "people", "more", "than", "the", "crowd", "of"};
  Rng rng(21);
  auto phrase = [&] {
    std::string s;
    const auto len = rng.below(5);
    for (std::uint64_t i = 0; i < len; ++i) s += (s.empty() ? "" : " ") + vocab[rng.below(vocab.size())];
    return s;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const std::string p = phrase();
    std::vector<std::string> g_texts;
    std::vector<GoldSpan> g;
    for (std::uint64_t k = 0, m = 1 + rng.below(3); k < m; ++k) {
      std::string t = phrase();
      if (t.empty()) t = "crowd";
      g_texts.push_back(t);
      g.push_back({t, 0, t.size()});
    }
    const Prediction pr = p.empty() ? no_answer() : pred(p);
    CHECK(token_f1(pr, g) == oracle::token_f1(p, g_texts));
  }
}

TEST_CASE("normalize") {
  CHECK(normalize("  “More  than 50,” ") == std::vector<std::string>{"more", "than", "50"});
  CHECK(normalize("--").empty());
}

TEST_CASE("evaluate averages over gold-annotated documents") {
  Document unlabeled;
  unlabeled.id = "u";
  unlabeled.text = "no spans";
  const std::vector<Document> corpus = {gold_doc("a", "About 300 came", {"About 300"}),
                                        gold_doc("b", "Dozens came", {"Dozens"}), unlabeled,
                                        gold_doc("c", "nothing", {})};
  std::vector<Prediction> preds = {{"a", "300", 6, 9, false}, {"b", "Dozens", 0, 6, false}};
  const EvalReport r = evaluate(preds, corpus);
  CHECK(r.n_docs == 3);
  CHECK(r.exact_match == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1 == doctest::Approx((2.0 / 3.0 + 1.0 + 1.0) / 3.0));
  REQUIRE(r.per_doc.size() == 3);
  CHECK(r.per_doc[0].id == "a");

  preds.push_back({"zzz", std::nullopt, std::nullopt, std::nullopt, false});
  CHECK_THROWS_AS(evaluate(preds, corpus), ValidationError);
  preds.back() = preds.front();
  CHECK_THROWS_AS(evaluate(preds, corpus), ValidationError);
  CHECK_THROWS_AS(evaluate({}, std::vector<Document>{unlabeled}), ValidationError);
}

TEST_CASE("prediction JSONL round trip") {
  const Prediction a{"a", "about “300”", 3, 14, true};
  const Prediction b{"b", std::nullopt, std::nullopt, std::nullopt, false};
  std::stringstream ss;
  ss << prediction_to_json_line(a) << '\n' << prediction_to_json_line(b) << '\n';
  CHECK(read_predictions(ss) == std::vector<Prediction>{a, b});

  std::istringstream alias("{\"doc_id\":\"q\",\"span_text\":\"x\",\"start_char\":0,\"end_char\":1,\"extra\":1}\n");
  CHECK(read_predictions(alias).at(0).id == "q");
  std::istringstream half("{\"id\":\"q\",\"span_text\":\"x\"}\n");
  CHECK_THROWS_AS(read_predictions(half), ValidationError);
  std::istringstream junk("{\"id\":\"q\"\n");
  CHECK_THROWS_AS(read_predictions(junk), ParseError);
}

TEST_CASE("to_prediction converts byte offsets to code points") {
  Document d;
  d.id = "d";
  d.text = "Café: about 300 protesters";
  d.coarse_label = 1;
  const auto p = to_prediction(d, extract(d.text, MagnitudeLabel(1)));
  CHECK(p.span_text == "about 300");
  CHECK(p.start_char == 6u);
  CHECK(p.end_char == 15u);
}
