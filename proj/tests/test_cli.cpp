#include <filesystem>
#include <fstream>
#include <sstream>

#include "crowdspan/cli.hpp"
#include "crowdspan/config.hpp"
#include "crowdspan/error.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace crowdspan;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "crowdspan");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// A fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("crowdspan-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config overrides apply and unknown keys are refused") {
  const Config c = config_from_json(R"({"window": 100, "stride": 50, "seed": 3, "toy": {"n": 16}})");
  CHECK(c.shingle.window == 100);
  CHECK(c.seed == 3);
  CHECK(c.toy_fit.seed == 3);
  CHECK(c.toy_data.n == 16);
  CHECK_THROWS_AS(config_from_json(R"({"windw": 100})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"toy": {"m": 1}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"stride": 900})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"window": "big"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1"), ConfigError);
  const Config round = config_from_json(config_to_json(Config{}));
  CHECK(config_to_json(round) == config_to_json(Config{}));
}

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"extract"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"extract", "--corpus", "/nonexistent/file.jsonl"}).code == kExitUsage);
  const fs::path dir = scratch("usage");
  write(dir / "bad.json", R"({"nope": 1})");
  CHECK(cli({"--config", (dir / "bad.json").string(), "synth-corpus", "--count", "2"}).code == kExitUsage);
}

TEST_CASE("data errors exit 2") {
  const fs::path dir = scratch("data");
  write(dir / "c.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\nnot json\n");
  const Run r = cli({"extract", "--corpus", (dir / "c.jsonl").string()});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("line 2") != std::string::npos);
  write(dir / "nolabel.jsonl", "{\"id\":\"a\",\"text\":\"About 300 protesters\"}\n");
  CHECK(cli({"extract", "--corpus", (dir / "nolabel.jsonl").string()}).code == kExitData);
}

TEST_CASE("synth, extract and evaluate chain together") {
  const fs::path dir = scratch("chain");
  const std::string corpus = (dir / "synth.jsonl").string();
  const std::string preds = (dir / "preds.jsonl").string();
  REQUIRE(cli({"--out", corpus, "synth-corpus", "--count", "30"}).code == 0);
  REQUIRE(cli({"--out", preds, "--threads", "2", "extract", "--corpus", corpus}).code == 0);
  const Run r = cli({"evaluate", "--predictions", preds, "--gold", corpus, "--per-doc"});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["exact_match"] == 1.0);
  CHECK(report["n_docs"] == 30);
  CHECK(report["per_doc"].size() == 30);

  const Run weak = cli({"weak-labels", "--corpus", corpus});
  CHECK(weak.code == 0);
  CHECK(weak.out == slurp(corpus));
}

TEST_CASE("split writes four parts and a manifest") {
  const fs::path dir = scratch("split");
  const std::string corpus = (dir / "synth.jsonl").string();
  REQUIRE(cli({"--out", corpus, "synth-corpus", "--count", "40"}).code == 0);
  const Run r = cli({"--seed", "5", "split", "--corpus", corpus, "--counts", "20,5,10,5", "--out-dir",
                     (dir / "parts").string()});
  REQUIRE(r.code == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "parts" / "manifest.json"));
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["counts"]["validation"] == 10);
  CHECK(fs::exists(dir / "parts" / "gold_span_train.jsonl"));
  CHECK(cli({"split", "--corpus", corpus, "--counts", "20,5,10"}).code == kExitUsage);
  CHECK(cli({"split", "--corpus", corpus, "--counts", "20,5,10,6"}).code == kExitUsage);
  CHECK(cli({"split", "--corpus", corpus, "--ratios", "0.5,0.5,0,0", "--out-dir", (dir / "r").string()}).code == 0);
}

TEST_CASE("ingest reads html and text files in name order") {
  const fs::path dir = scratch("ingest");
  fs::create_directories(dir / "in");
  write(dir / "in" / "b.html", "<p>Nearly 400 protesters</p><p>marched.</p>");
  write(dir / "in" / "a.txt", "About  300 people\n\nrallied.\n");
  write(dir / "in" / "skip.pdf", "x");
  write(dir / "labels.json", R"({"a": 1, "b": 1})");
  const Run r = cli({"ingest", "--input", (dir / "in").string(), "--labels", (dir / "labels.json").string()});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string first, second, third;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK_FALSE(std::getline(lines, third));
  CHECK(nlohmann::json::parse(first)["text"] == "About 300 people\nrallied.");
  CHECK(nlohmann::json::parse(second)["text"] == "Nearly 400 protesters\nmarched.");
  CHECK(nlohmann::json::parse(second)["coarse_label"] == 1);
}

TEST_CASE("parse-numbers reports code point offsets") {
  const Run r = cli({"parse-numbers", "--text", "Café crowd of 2,500 and dozens more"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["value"] == 2500);
  CHECK(j["start_char"] == 14);
  CHECK(j["end_char"] == 19);
  CHECK(j["magnitude"] == 2);
}

TEST_CASE("shingle and aggregate round trip") {
  const fs::path dir = scratch("shingle");
  std::string text;
  for (int i = 0; i < 600; ++i) text += "word ";
  text += "About 300 protesters came.";
  nlohmann::ordered_json doc = {{"id", "long"}, {"text", text}};
  write(dir / "c.jsonl", doc.dump() + "\n");
  const Run s = cli({"shingle", "--corpus", (dir / "c.jsonl").string()});
  REQUIRE(s.code == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 2);

  // Shingle 1 starts at token 155 and the target tokens are 600..601.
  std::vector<double> start(512, 0.0), end(512, 0.0);
  start[2 + 600 - 155] = 1.0;
  end[2 + 601 - 155] = 1.0;
  std::vector<double> flat(512, 1.0 / 512);
  nlohmann::json p0 = {{"doc_id", "long"}, {"shingle_index", 0}, {"start_scores", flat}, {"end_scores", flat}};
  nlohmann::json p1 = {{"doc_id", "long"}, {"shingle_index", 1}, {"start_scores", start}, {"end_scores", end}};
  write(dir / "p.jsonl", p0.dump() + "\n" + p1.dump() + "\n");
  const Run a = cli({"aggregate", "--predictions", (dir / "p.jsonl").string(), "--corpus", (dir / "c.jsonl").string()});
  REQUIRE(a.code == 0);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["span_text"] == "About 300");
  CHECK(j["shingle_index"] == 1);
  CHECK(j["start_char"] == 3000);

  nlohmann::json stray = p1;
  stray["doc_id"] = "missing";
  write(dir / "bad.jsonl", stray.dump() + "\n");
  CHECK(cli({"aggregate", "--predictions", (dir / "bad.jsonl").string(), "--corpus", (dir / "c.jsonl").string()}).code ==
        kExitData);
}

TEST_CASE("kernel commands") {
  const Run check = cli({"kernel-check", "--instances", "5"});
  CHECK(check.code == 0);
  CHECK(nlohmann::json::parse(check.out)["passed"] == true);
  const fs::path dir = scratch("kernel");
  write(dir / "small.json", R"({"steps": 20, "toy": {"documents": 5}})");
  const Run demo = cli({"--config", (dir / "small.json").string(), "kernel-demo"});
  REQUIRE(demo.code == 0);
  const auto j = nlohmann::json::parse(demo.out);
  CHECK(j["losses"].size() == 20);
  CHECK(j["planted_mass"].size() == 5);
}
