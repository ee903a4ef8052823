#include "crowdspan/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <unordered_map>
#include <unordered_set>

#include "crowdspan/error.hpp"
#include "crowdspan/quantity.hpp"
#include "crowdspan/utf8.hpp"
#include "json.hpp"

namespace crowdspan {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> normalized_prediction(const Prediction& pred) {
  return pred.span_text ? normalize(*pred.span_text) : std::vector<std::string>{};
}

double f1_against(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : gold) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

std::optional<std::size_t> optional_offset(const json& j, const char* name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
    throw ParseError("line " + std::to_string(line) + ": \"" + name + "\" must be a nonnegative integer");
  return static_cast<std::size_t>(it->get<std::int64_t>());
}

}  // namespace

std::vector<std::string> normalize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    const std::string_view core = strip_punctuation(text.substr(i, j - i));
    if (!core.empty()) out.push_back(to_lower(core));
    i = j;
  }
  return out;
}

bool exact_match(const Prediction& pred, std::span<const GoldSpan> golds) {
  const auto p = normalized_prediction(pred);
  if (golds.empty()) return p.empty();
  return std::any_of(golds.begin(), golds.end(), [&](const GoldSpan& g) { return normalize(g.text) == p; });
}

double token_f1(const Prediction& pred, std::span<const GoldSpan> golds) {
  const auto p = normalized_prediction(pred);
  if (golds.empty()) return p.empty() ? 1.0 : 0.0;
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, f1_against(p, normalize(g.text)));
  return best;
}

EvalReport evaluate(std::span<const Prediction> predictions, std::span<const Document> corpus) {
  std::unordered_set<std::string> known;
  for (const auto& doc : corpus) known.insert(doc.id);
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions) {
    if (!known.contains(p.id)) throw ValidationError("prediction for unknown document \"" + p.id + "\"");
    if (!by_id.emplace(p.id, &p).second) throw ValidationError("duplicate prediction for document \"" + p.id + "\"");
  }

  EvalReport report;
  double em_sum = 0.0;
  double f1_sum = 0.0;
  const Prediction no_answer{};
  for (const auto& doc : corpus) {
    if (!doc.gold_spans) continue;
    auto it = by_id.find(doc.id);
    const Prediction& pred = it == by_id.end() ? no_answer : *it->second;
    DocScore score{doc.id, exact_match(pred, *doc.gold_spans), token_f1(pred, *doc.gold_spans)};
    em_sum += score.em ? 1.0 : 0.0;
    f1_sum += score.f1;
    report.per_doc.push_back(std::move(score));
  }
  if (report.per_doc.empty()) throw ValidationError("no document in the gold corpus has gold_spans");
  report.n_docs = report.per_doc.size();
  report.exact_match = em_sum / static_cast<double>(report.n_docs);
  report.f1 = f1_sum / static_cast<double>(report.n_docs);
  return report;
}

Prediction to_prediction(const Document& doc, const ExtractionResult& result) {
  Prediction p;
  p.id = doc.id;
  p.fallback_used = result.fallback_used;
  if (result.span) {
    const Utf8Index index(doc.text);
    p.span_text = result.span->text;
    p.start_char = index.to_code_point(result.span->start);
    p.end_char = index.to_code_point(result.span->end);
  }
  return p;
}

std::string prediction_to_json_line(const Prediction& pred) {
  json j;
  j["id"] = pred.id;
  j["span_text"] = pred.span_text ? json(*pred.span_text) : json(nullptr);
  j["start_char"] = pred.start_char ? json(*pred.start_char) : json(nullptr);
  j["end_char"] = pred.end_char ? json(*pred.end_char) : json(nullptr);
  j["fallback_used"] = pred.fallback_used;
  return j.dump();
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(number) + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw ParseError("line " + std::to_string(number) + ": record must be a JSON object");
    Prediction p;
    auto id = j.find("id");
    if (id == j.end()) id = j.find("doc_id");
    if (id == j.end() || !id->is_string())
      throw ParseError("line " + std::to_string(number) + ": \"id\" must be a string");
    p.id = id->get<std::string>();
    if (auto t = j.find("span_text"); t != j.end() && !t->is_null()) {
      if (!t->is_string()) throw ParseError("line " + std::to_string(number) + ": \"span_text\" must be a string");
      p.span_text = t->get<std::string>();
    }
    p.start_char = optional_offset(j, "start_char", number);
    p.end_char = optional_offset(j, "end_char", number);
    if (auto f = j.find("fallback_used"); f != j.end() && f->is_boolean()) p.fallback_used = f->get<bool>();
    const bool has_range = p.start_char && p.end_char;
    if (p.span_text.has_value() != has_range || p.start_char.has_value() != p.end_char.has_value())
      throw ValidationError("prediction \"" + p.id + "\": span_text and its character range must appear together");
    out.push_back(std::move(p));
  }
  return out;
}

std::string report_to_json(const EvalReport& report, bool include_per_doc) {
  json j;
  j["exact_match"] = report.exact_match;
  j["f1"] = report.f1;
  j["n_docs"] = report.n_docs;
  if (include_per_doc) {
    json docs = json::array();
    for (const auto& d : report.per_doc) docs.push_back(json{{"id", d.id}, {"em", d.em}, {"f1", d.f1}});
    j["per_doc"] = std::move(docs);
  }
  return j.dump(2);
}

}  // namespace crowdspan
