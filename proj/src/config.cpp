#include "crowdspan/config.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "crowdspan/error.hpp"
#include "json.hpp"

namespace crowdspan {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + key + "\" has the wrong type");
  }
}

void reject_unknown(const json& j, const std::unordered_set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown config key \"" + where + key + "\"");
  }
}

}  // namespace

void validate(const Config& config) {
  validate(config.heuristic);
  validate(config.shingle);
  if (config.heuristic.quantity.crowd_words.empty()) throw ConfigError("crowd word list must be nonempty");
  if (config.toy_fit.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
  if (config.toy_fit.lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (config.toy_data.documents == 0 || config.toy_data.n == 0 || config.toy_data.d == 0)
    throw ConfigError("toy dataset dimensions must be positive");
  if (config.threads < 0) throw ConfigError("threads must be nonnegative");
}

Config config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"buckets", "vague", "keywords", "modifiers", "crowd_words", "window", "stride", "sequence_length",
                  "question_budget", "lambda", "learning_rate", "steps", "init_scale", "toy", "seed", "threads"},
                 "");

  Config c;
  auto& q = c.heuristic.quantity;
  if (j.contains("buckets")) {
    const auto b = get_as<std::vector<std::uint64_t>>(j["buckets"], "buckets");
    if (b.size() != 3) throw ConfigError("\"buckets\" must list exactly three thresholds");
    for (std::size_t i = 0; i < 3; ++i) q.buckets.thresholds[i] = b[i];
  }
  if (j.contains("vague")) {
    const json& v = j["vague"];
    if (!v.is_object()) throw ConfigError("\"vague\" must be an object");
    reject_unknown(v, {"multipliers", "plurals"}, "vague.");
    if (v.contains("multipliers"))
      q.vague.multipliers = get_as<std::map<std::string, std::uint64_t>>(v["multipliers"], "vague.multipliers");
    if (v.contains("plurals"))
      q.vague.plurals = get_as<std::map<std::string, std::uint64_t>>(v["plurals"], "vague.plurals");
  }
  if (j.contains("crowd_words")) q.crowd_words = get_as<std::vector<std::string>>(j["crowd_words"], "crowd_words");
  if (j.contains("keywords")) c.heuristic.keywords = get_as<std::vector<std::string>>(j["keywords"], "keywords");
  if (j.contains("modifiers")) c.heuristic.modifiers = get_as<std::vector<std::string>>(j["modifiers"], "modifiers");
  for (auto& k : c.heuristic.keywords) k = to_lower(k);
  for (auto& k : q.crowd_words) k = to_lower(k);

  if (j.contains("window")) c.shingle.window = get_as<std::size_t>(j["window"], "window");
  if (j.contains("stride")) c.shingle.stride = get_as<std::size_t>(j["stride"], "stride");
  if (j.contains("sequence_length")) c.shingle.sequence_length = get_as<std::size_t>(j["sequence_length"], "sequence_length");
  if (j.contains("question_budget")) c.shingle.question_budget = get_as<std::size_t>(j["question_budget"], "question_budget");

  if (j.contains("lambda")) c.toy_fit.lambda = get_as<double>(j["lambda"], "lambda");
  if (j.contains("learning_rate")) c.toy_fit.learning_rate = get_as<double>(j["learning_rate"], "learning_rate");
  if (j.contains("steps")) c.toy_fit.steps = get_as<std::size_t>(j["steps"], "steps");
  if (j.contains("init_scale")) c.toy_fit.init_scale = get_as<double>(j["init_scale"], "init_scale");
  if (j.contains("toy")) {
    const json& t = j["toy"];
    if (!t.is_object()) throw ConfigError("\"toy\" must be an object");
    reject_unknown(t, {"documents", "n", "d"}, "toy.");
    if (t.contains("documents")) c.toy_data.documents = get_as<std::size_t>(t["documents"], "toy.documents");
    if (t.contains("n")) c.toy_data.n = get_as<std::size_t>(t["n"], "toy.n");
    if (t.contains("d")) c.toy_data.d = get_as<std::size_t>(t["d"], "toy.d");
  }
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("threads")) c.threads = get_as<int>(j["threads"], "threads");
  c.toy_data.seed = c.seed;
  c.toy_fit.seed = c.seed;
  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json(text.str());
}

std::string config_to_json(const Config& c) {
  const auto& q = c.heuristic.quantity;
  json j;
  j["buckets"] = {q.buckets.thresholds[0], q.buckets.thresholds[1], q.buckets.thresholds[2]};
  j["vague"] = {{"multipliers", q.vague.multipliers}, {"plurals", q.vague.plurals}};
  j["keywords"] = c.heuristic.keywords;
  j["modifiers"] = c.heuristic.modifiers;
  j["crowd_words"] = q.crowd_words;
  j["window"] = c.shingle.window;
  j["stride"] = c.shingle.stride;
  j["sequence_length"] = c.shingle.sequence_length;
  j["question_budget"] = c.shingle.question_budget;
  j["lambda"] = c.toy_fit.lambda;
  j["learning_rate"] = c.toy_fit.learning_rate;
  j["steps"] = c.toy_fit.steps;
  j["init_scale"] = c.toy_fit.init_scale;
  j["toy"] = {{"documents", c.toy_data.documents}, {"n", c.toy_data.n}, {"d", c.toy_data.d}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j.dump(2);
}

}  // namespace crowdspan
