#include "crowdspan/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "crowdspan/config.hpp"
#include "crowdspan/corpus.hpp"
#include "crowdspan/error.hpp"
#include "crowdspan/html.hpp"
#include "crowdspan/kernel.hpp"
#include "crowdspan/kernel_check.hpp"
#include "crowdspan/metrics.hpp"
#include "crowdspan/synthetic.hpp"
#include "crowdspan/utf8.hpp"
#include "json.hpp"

namespace crowdspan {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<int> threads;
};

// Writes to --out when given, otherwise to the caller's stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

template <std::size_t N, typename T>
std::array<T, N> parse_list(const std::string& text, const char* what) {
  std::array<T, N> out{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= N) throw ConfigError(std::string(what) + " needs exactly " + std::to_string(N) + " values");
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) {
        out[i] = std::stod(item, &used);
      } else {
        const long long v = std::stoll(item, &used);
        if (v < 0) throw std::invalid_argument("negative");
        out[i] = static_cast<T>(v);
      }
      if (used != item.size()) throw std::invalid_argument("trailing text");
    } catch (const std::logic_error&) {
      throw ConfigError(std::string(what) + ": cannot read \"" + item + "\"");
    }
    ++i;
  }
  if (i != N) throw ConfigError(std::string(what) + " needs exactly " + std::to_string(N) + " values");
  return out;
}

Config resolve_config(const GlobalOptions& g) {
  Config c = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (g.seed) {
    c.seed = *g.seed;
    c.toy_data.seed = *g.seed;
    c.toy_fit.seed = *g.seed;
  }
  if (g.threads) c.threads = *g.threads;
  validate(c);
  return c;
}

// Plain text keeps its line structure; runs of whitespace inside a line
// collapse to one space and blank lines are dropped.
std::string clean_plain_text(const std::string& raw) {
  std::string out;
  std::istringstream in(raw);
  for (std::string line; std::getline(in, line);) {
    std::istringstream words(line);
    std::string joined;
    for (std::string w; words >> w;) joined += (joined.empty() ? "" : " ") + w;
    if (joined.empty()) continue;
    if (!out.empty()) out += '\n';
    out += joined;
  }
  return out;
}

// --- subcommands -------------------------------------------------------------

int cmd_ingest(const Config&, const std::string& input_dir, const std::string& labels_path, std::ostream& out,
               std::ostream& err) {
  if (!fs::is_directory(input_dir)) throw ConfigError("input directory not found: " + input_dir);
  std::map<std::string, int> labels;
  if (!labels_path.empty()) {
    const json j = json::parse(read_file(labels_path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("labels file must be a JSON object of id -> label");
    for (const auto& [id, v] : j.items()) {
      if (!v.is_number_integer()) throw ValidationError("label for \"" + id + "\" must be an integer");
      labels[id] = v.get<int>();
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = to_lower(entry.path().extension().string());
    if (ext == ".html" || ext == ".htm" || ext == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Document> corpus;
  for (const auto& path : files) {
    const std::string raw = read_file(path);
    const std::string ext = to_lower(path.extension().string());
    Document doc;
    doc.id = path.stem().string();
    doc.text = ext == ".txt" ? clean_plain_text(raw) : ingest_html(raw);
    if (doc.text.empty()) {
      err << "skipping " << path.filename().string() << ": no text\n";
      continue;
    }
    if (auto it = labels.find(doc.id); it != labels.end()) doc.coarse_label = it->second;
    corpus.push_back(std::move(doc));
  }
  validate_corpus(corpus);
  write_corpus(out, corpus);
  return kExitOk;
}

int cmd_split(const Config& config, const std::string& corpus_path, const std::string& counts,
              const std::string& ratios, const std::string& out_dir, bool no_truncate, std::ostream& out) {
  const std::vector<Document> corpus = load_corpus(corpus_path);
  SplitSpec spec;
  spec.seed = config.seed;
  spec.truncate_gold_paragraphs = !no_truncate;
  if (!counts.empty() && !ratios.empty()) throw ConfigError("give either --counts or --ratios, not both");
  if (!counts.empty()) {
    spec.sizes = parse_list<4, std::size_t>(counts, "--counts");
  } else if (!ratios.empty()) {
    spec.sizes = parse_list<4, double>(ratios, "--ratios");
  } else {
    spec.sizes = default_split_ratios();
  }
  const SplitResult split = split_corpus(corpus, spec);
  const auto parts = materialize_split(corpus, split, spec.truncate_gold_paragraphs);

  fs::create_directories(out_dir);
  json manifest;
  manifest["seed"] = spec.seed;
  json count_obj, file_obj;
  for (std::size_t p = 0; p < 4; ++p) {
    const std::string name(kSplitPartNames[p]);
    const std::string file = name + ".jsonl";
    save_corpus(fs::path(out_dir) / file, parts[p]);
    count_obj[name] = parts[p].size();
    file_obj[name] = file;
  }
  manifest["counts"] = std::move(count_obj);
  manifest["files"] = std::move(file_obj);
  const std::string text = manifest.dump(2);
  std::ofstream(fs::path(out_dir) / "manifest.json", std::ios::binary) << text << '\n';
  out << text << '\n';
  return kExitOk;
}

int cmd_parse_numbers(const Config& config, const std::string& text_arg, const std::string& input,
                      std::ostream& out) {
  std::string text;
  if (!text_arg.empty()) {
    text = text_arg;
  } else if (!input.empty()) {
    text = read_file(input);
  } else {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  }
  const auto tokens = tokenize(text);
  const Utf8Index index(text);
  for (const auto& p : find_number_phrases(tokens, text, config.heuristic.quantity)) {
    json j;
    j["surface"] = p.surface;
    j["value"] = p.value;
    j["magnitude"] = magnitude_bucket(static_cast<std::int64_t>(p.value), config.heuristic.quantity.buckets).value();
    j["start_char"] = index.to_code_point(tokens[p.tokens.begin].start);
    j["end_char"] = index.to_code_point(tokens[p.tokens.end - 1].end);
    j["token_start"] = p.tokens.begin;
    j["token_end"] = p.tokens.end;
    out << j.dump() << '\n';
  }
  return kExitOk;
}

int cmd_extract(const Config& config, const std::string& corpus_path, std::ostream& out) {
  const std::vector<Document> corpus = load_corpus(corpus_path);
  const auto results = extract_corpus(corpus, config.heuristic, config.threads);
  for (std::size_t i = 0; i < corpus.size(); ++i) out << prediction_to_json_line(to_prediction(corpus[i], results[i])) << '\n';
  return kExitOk;
}

int cmd_weak_labels(const Config& config, const std::string& corpus_path, std::ostream& out) {
  const std::vector<Document> corpus = load_corpus(corpus_path);
  write_corpus(out, emit_weak_labels(corpus, config.heuristic, config.threads));
  return kExitOk;
}

int cmd_shingle(const Config& config, const std::string& corpus_path, std::ostream& out) {
  for (const auto& doc : load_corpus(corpus_path)) {
    const auto tokens = tokenize(doc.text);
    for (const auto& s : make_shingles(tokens, config.shingle, doc.id)) {
      json texts = json::array();
      for (std::size_t t = s.window_start; t < s.window_end; ++t) texts.push_back(tokens[t].text);
      json j;
      j["doc_id"] = s.doc_id;
      j["shingle_index"] = s.shingle_index;
      j["window_start"] = s.window_start;
      j["token_texts"] = std::move(texts);
      out << j.dump() << '\n';
    }
  }
  return kExitOk;
}

int cmd_aggregate(const Config& config, const std::string& predictions_path, const std::string& corpus_path,
                  std::size_t question_tokens, std::ostream& out) {
  const std::vector<Document> corpus = load_corpus(corpus_path);
  std::map<std::string, std::vector<ShinglePrediction>> by_doc;
  std::ifstream in(predictions_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + predictions_path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    const std::string where = "line " + std::to_string(number) + ": ";
    if (j.is_discarded() || !j.is_object()) throw ParseError(where + "record must be a JSON object");
    try {
      ShinglePrediction p;
      p.shingle_index = j.at("shingle_index").get<std::size_t>();
      p.start_scores = j.at("start_scores").get<std::vector<double>>();
      p.end_scores = j.at("end_scores").get<std::vector<double>>();
      by_doc[j.at("doc_id").get<std::string>()].push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    }
  }
  std::size_t matched = 0;
  for (const auto& doc : corpus) {
    auto it = by_doc.find(doc.id);
    if (it == by_doc.end()) continue;
    ++matched;
    const auto tokens = tokenize(doc.text);
    const auto shingles = make_shingles(tokens, config.shingle, doc.id);
    const AggregatedSpan span = aggregate_predictions(it->second, shingles, tokens, question_tokens, config.shingle);
    json j;
    j["doc_id"] = doc.id;
    j["shingle_index"] = span.shingle_index;
    j["is_impossible"] = span.is_impossible;
    if (span.is_impossible) {
      j["start_token"] = nullptr;
      j["end_token"] = nullptr;
      j["start_char"] = nullptr;
      j["end_char"] = nullptr;
      j["span_text"] = nullptr;
    } else {
      const Utf8Index index(doc.text);
      j["start_token"] = span.start_token;
      j["end_token"] = span.end_token;
      j["start_char"] = index.to_code_point(span.start);
      j["end_char"] = index.to_code_point(span.end);
      j["span_text"] = doc.text.substr(span.start, span.end - span.start);
    }
    out << j.dump() << '\n';
  }
  if (matched != by_doc.size()) throw ValidationError("predictions name documents missing from the corpus");
  return kExitOk;
}

int cmd_kernel_demo(const Config& config, std::ostream& out) {
  kernel::ToyFitConfig fit = config.toy_fit;
  fit.threads = config.threads > 0 ? config.threads : 1;
  const auto docs = kernel::make_toy_dataset(config.toy_data);
  const kernel::TrainingTrace trace = kernel::toy_fit(docs, fit);
  json j;
  j["seed"] = config.seed;
  j["documents"] = config.toy_data.documents;
  j["n"] = config.toy_data.n;
  j["d"] = config.toy_data.d;
  j["steps"] = fit.steps;
  j["learning_rate"] = fit.learning_rate;
  j["lambda"] = fit.lambda;
  j["initial_loss"] = trace.initial_loss;
  j["final_loss"] = trace.final_loss;
  j["mean_planted_mass"] = trace.mean_planted_mass;
  j["losses"] = trace.losses;
  j["planted_mass"] = trace.planted_mass;
  json spans = json::array();
  for (const auto& d : docs) spans.push_back({d.span_begin, d.span_end});
  j["planted_spans"] = std::move(spans);
  j["final_masks"] = trace.final_masks;
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_kernel_check(const Config& config, std::size_t instances, std::ostream& out) {
  const kernel::CheckReport report = kernel::run_kernel_checks(config.seed, instances);
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json j;
  j["passed"] = report.passed();
  j["checks"] = std::move(checks);
  out << j.dump(2) << '\n';
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_evaluate(const std::string& predictions_path, const std::string& gold_path, bool per_doc, std::ostream& out) {
  const std::vector<Document> gold = load_corpus(gold_path);
  std::ifstream in(predictions_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + predictions_path);
  const std::vector<Prediction> predictions = read_predictions(in);
  out << report_to_json(evaluate(predictions, gold), per_doc) << '\n';
  return kExitOk;
}

int cmd_synth(const Config& config, std::size_t count, std::ostream& out) {
  SyntheticCorpusConfig sc;
  sc.documents = count;
  sc.seed = config.seed;
  write_corpus(out, make_synthetic_corpus(sc));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crowd-size span extraction from coarse order-of-magnitude labels", "crowdspan"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON file overriding the default configuration");
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_option("--out", g.out_path, "Write output here instead of stdout");
  app.add_option("--threads", g.threads, "Worker threads for corpus commands (0 = OpenMP default)");

  std::string input, labels, corpus, counts, ratios, out_dir = "split", text, predictions, gold;
  bool no_truncate = false, per_doc = false;
  std::size_t question_tokens = 0, instances = 100, synth_count = 240;

  auto* ingest = app.add_subcommand("ingest", "HTML/text directory -> corpus JSONL");
  ingest->add_option("--input", input, "Directory of .html/.htm/.txt files")->required();
  ingest->add_option("--labels", labels, "JSON object mapping document id to coarse label");

  auto* split = app.add_subcommand("split", "Corpus -> four split files plus a manifest");
  split->add_option("--corpus", corpus)->required();
  split->add_option("--counts", counts, "coarse_train,gold_span_train,validation,test document counts");
  split->add_option("--ratios", ratios, "Four ratios summing to 1");
  split->add_option("--out-dir", out_dir, "Directory for the split files");
  split->add_flag("--no-truncate", no_truncate, "Keep whole articles in gold_span_train");

  auto* parse = app.add_subcommand("parse-numbers", "Text -> number phrase JSONL");
  parse->add_option("--text", text);
  parse->add_option("--input", input, "Read the text from a file (default: stdin)");

  auto* extract_cmd = app.add_subcommand("extract", "Corpus with coarse labels -> prediction JSONL");
  extract_cmd->add_option("--corpus", corpus)->required();

  auto* weak = app.add_subcommand("weak-labels", "Corpus -> corpus with heuristic gold spans");
  weak->add_option("--corpus", corpus)->required();

  auto* shingle = app.add_subcommand("shingle", "Corpus -> shingle JSONL");
  shingle->add_option("--corpus", corpus)->required();

  auto* aggregate = app.add_subcommand("aggregate", "Per-shingle scores -> one span per document");
  aggregate->add_option("--predictions", predictions)->required();
  aggregate->add_option("--corpus", corpus)->required();
  aggregate->add_option("--question-tokens", question_tokens, "Question length used when the scores were produced");

  auto* demo = app.add_subcommand("kernel-demo", "Train the toy multitask model and print its trace");

  auto* check = app.add_subcommand("kernel-check", "Run mask, loss and gradient property checks");
  check->add_option("--instances", instances, "Random gradient-check instances");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Exact match and token F1 against a gold corpus");
  evaluate_cmd->add_option("--predictions", predictions)->required();
  evaluate_cmd->add_option("--gold", gold)->required();
  evaluate_cmd->add_flag("--per-doc", per_doc, "Include per-document scores");

  auto* synth = app.add_subcommand("synth-corpus", "Generate the templated synthetic corpus");
  synth->add_option("--count", synth_count, "Number of documents");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Config config = resolve_config(g);
    Output sink(g.out_path, out);
    std::ostream& o = *sink;
    if (*ingest) return cmd_ingest(config, input, labels, o, err);
    if (*split) return cmd_split(config, corpus, counts, ratios, out_dir, no_truncate, o);
    if (*parse) return cmd_parse_numbers(config, text, input, o);
    if (*extract_cmd) return cmd_extract(config, corpus, o);
    if (*weak) return cmd_weak_labels(config, corpus, o);
    if (*shingle) return cmd_shingle(config, corpus, o);
    if (*aggregate) return cmd_aggregate(config, predictions, corpus, question_tokens, o);
    if (*demo) return cmd_kernel_demo(config, o);
    if (*check) return cmd_kernel_check(config, instances, o);
    if (*evaluate_cmd) return cmd_evaluate(predictions, gold, per_doc, o);
    if (*synth) return cmd_synth(config, synth_count, o);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace crowdspan
