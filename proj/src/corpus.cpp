#include "crowdspan/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "crowdspan/error.hpp"
#include "crowdspan/random.hpp"
#include "crowdspan/utf8.hpp"
#include "json.hpp"

namespace crowdspan {

using json = nlohmann::ordered_json;

namespace {

const std::unordered_set<std::string> kDocumentFields = {"id", "url", "text", "coarse_label", "gold_spans"};
const std::unordered_set<std::string> kSpanFields = {"text", "start_char", "end_char"};

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::size_t offset_field(const json& span, const char* name, std::size_t line) {
  const auto it = span.find(name);
  if (it == span.end()) parse_fail(line, std::string("gold span missing \"") + name + "\"");
  if (!it->is_number_integer()) parse_fail(line, std::string("\"") + name + "\" must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < 0) parse_fail(line, std::string("\"") + name + "\" must be nonnegative");
  return static_cast<std::size_t>(v);
}

Document document_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) parse_fail(line, "record must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kDocumentFields.contains(key)) parse_fail(line, "unknown field \"" + key + "\"");
  }
  Document doc;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) parse_fail(line, "\"id\" must be a string");
  doc.id = id->get<std::string>();
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string()) parse_fail(line, "\"text\" must be a string");
  doc.text = text->get<std::string>();
  if (auto url = j.find("url"); url != j.end() && !url->is_null()) {
    if (!url->is_string()) parse_fail(line, "\"url\" must be a string");
    doc.url = url->get<std::string>();
  }
  if (auto label = j.find("coarse_label"); label != j.end() && !label->is_null()) {
    if (!label->is_number_integer()) parse_fail(line, "\"coarse_label\" must be an integer");
    const auto v = label->get<std::int64_t>();
    if (v < 0 || v > 3)
      throw ValidationError("document \"" + doc.id + "\": coarse_label " + std::to_string(v) + " outside 0..3");
    doc.coarse_label = static_cast<int>(v);
  }
  if (auto spans = j.find("gold_spans"); spans != j.end() && !spans->is_null()) {
    if (!spans->is_array()) parse_fail(line, "\"gold_spans\" must be an array");
    const Utf8Index index(doc.text);
    std::vector<GoldSpan> parsed;
    for (const auto& s : *spans) {
      if (!s.is_object()) parse_fail(line, "gold span must be an object");
      for (const auto& [key, _] : s.items()) {
        if (!kSpanFields.contains(key)) parse_fail(line, "unknown gold span field \"" + key + "\"");
      }
      const auto st = s.find("text");
      if (st == s.end() || !st->is_string()) parse_fail(line, "gold span \"text\" must be a string");
      const std::size_t start_cp = offset_field(s, "start_char", line);
      const std::size_t end_cp = offset_field(s, "end_char", line);
      if (start_cp > index.code_points() || end_cp > index.code_points())
        throw ValidationError("document \"" + doc.id + "\": gold span offsets outside the text");
      parsed.push_back(GoldSpan{st->get<std::string>(), index.to_byte(start_cp), index.to_byte(end_cp)});
    }
    doc.gold_spans = std::move(parsed);
  }
  validate_document(doc);
  return doc;
}

json document_to_json(const Document& doc) {
  json j;
  j["id"] = doc.id;
  if (doc.url) j["url"] = *doc.url;
  j["text"] = doc.text;
  if (doc.coarse_label) j["coarse_label"] = *doc.coarse_label;
  if (doc.gold_spans) {
    const Utf8Index index(doc.text);
    json spans = json::array();
    for (const auto& s : *doc.gold_spans) {
      json js;
      js["text"] = s.text;
      js["start_char"] = index.to_code_point(s.start);
      js["end_char"] = index.to_code_point(s.end);
      spans.push_back(std::move(js));
    }
    j["gold_spans"] = std::move(spans);
  }
  return j;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

}  // namespace

void validate_document(const Document& doc) {
  if (doc.id.empty()) throw ValidationError("document id must be nonempty");
  const std::string who = "document \"" + doc.id + "\": ";
  if (doc.coarse_label && (*doc.coarse_label < 0 || *doc.coarse_label > 3))
    throw ValidationError(who + "coarse_label outside 0..3");
  if (!doc.gold_spans) return;
  const Utf8Index index(doc.text);
  for (const auto& s : *doc.gold_spans) {
    if (s.text.empty()) throw ValidationError(who + "gold span text is empty");
    if (s.end <= s.start || s.end > doc.text.size())
      throw ValidationError(who + "gold span offsets out of range");
    if (index.to_code_point(s.start) == Utf8Index::npos || index.to_code_point(s.end) == Utf8Index::npos)
      throw ValidationError(who + "gold span offsets split a character");
    if (std::string_view(doc.text).substr(s.start, s.end - s.start) != s.text)
      throw ValidationError(who + "gold span \"" + s.text + "\" does not match the text at its offsets");
  }
}

void validate_corpus(std::span<const Document> corpus) {
  std::unordered_set<std::string> seen;
  for (const auto& doc : corpus) {
    validate_document(doc);
    if (!seen.insert(doc.id).second) throw ValidationError("duplicate document id \"" + doc.id + "\"");
  }
}

std::vector<Document> read_corpus(std::istream& in) {
  std::vector<Document> corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(number, std::string("malformed JSON: ") + e.what());
    }
    Document doc = document_from_json(j, number);
    if (!seen.insert(doc.id).second) throw ValidationError("duplicate document id \"" + doc.id + "\"");
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file " + path.string());
  return read_corpus(in);
}

std::string document_to_json_line(const Document& doc) { return document_to_json(doc).dump(); }

void write_corpus(std::ostream& out, std::span<const Document> corpus) {
  for (const auto& doc : corpus) out << document_to_json_line(doc) << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const Document> corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_corpus(out, corpus);
}

SplitRatios default_split_ratios() {
  constexpr double total = 3849.0;
  return {2694.0 / total, 25.0 / total, 200.0 / total, 930.0 / total};
}

SplitCounts apportion(const SplitRatios& ratios, std::size_t total) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw ConfigError("split ratios must be nonnegative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");

  SplitCounts counts{};
  std::array<double, 4> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double quota = ratios[i] / sum * static_cast<double>(total);
    // Absorb rounding noise so 0.7 * 10 counts as exactly 7.
    const double whole = std::floor(quota + 1e-9);
    counts[i] = static_cast<std::size_t>(whole);
    remainders[i] = std::max(0.0, quota - whole);
    assigned += counts[i];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % 4, ++assigned) ++counts[order[k]];
  return counts;
}

SplitResult split_corpus(std::span<const Document> corpus, const SplitSpec& spec) {
  if (corpus.empty()) throw ConfigError("cannot split an empty corpus");
  const SplitCounts counts = std::holds_alternative<SplitCounts>(spec.sizes)
                                 ? std::get<SplitCounts>(spec.sizes)
                                 : apportion(std::get<SplitRatios>(spec.sizes), corpus.size());
  const std::size_t requested = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (requested != corpus.size())
    throw ConfigError("split counts sum to " + std::to_string(requested) + " but the corpus has " +
                      std::to_string(corpus.size()) + " documents");

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::size_t>(order));

  SplitResult result;
  std::size_t next = 0;
  for (std::size_t part = 0; part < 4; ++part) {
    result.ids[part].reserve(counts[part]);
    for (std::size_t k = 0; k < counts[part]; ++k) result.ids[part].push_back(corpus[order[next++]].id);
  }
  return result;
}

Document truncate_to_first_span_paragraph(const Document& doc) {
  if (!doc.gold_spans || doc.gold_spans->empty()) return doc;
  const GoldSpan& first = doc.gold_spans->front();
  const std::string_view text = doc.text;
  const std::size_t nl_before = first.start == 0 ? std::string_view::npos : text.rfind('\n', first.start - 1);
  const std::size_t begin = nl_before == std::string_view::npos ? 0 : nl_before + 1;
  const std::size_t nl_after = text.find('\n', first.end);
  const std::size_t end = nl_after == std::string_view::npos ? text.size() : nl_after;

  Document out = doc;
  out.text = std::string(text.substr(begin, end - begin));
  std::vector<GoldSpan> spans;
  for (const auto& s : *doc.gold_spans) {
    if (s.start >= begin && s.end <= end) spans.push_back(GoldSpan{s.text, s.start - begin, s.end - begin});
  }
  out.gold_spans = std::move(spans);
  return out;
}

std::array<std::vector<Document>, 4> materialize_split(std::span<const Document> corpus, const SplitResult& split,
                                                       bool truncate_gold_paragraphs) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& doc : corpus) by_id.emplace(doc.id, &doc);

  std::array<std::vector<Document>, 4> parts;
  for (std::size_t p = 0; p < 4; ++p) {
    for (const auto& id : split.ids[p]) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw ValidationError("split refers to unknown document \"" + id + "\"");
      Document doc = *it->second;
      if (p == static_cast<std::size_t>(SplitPart::CoarseTrain)) {
        doc.gold_spans.reset();
      } else if (p == static_cast<std::size_t>(SplitPart::GoldSpanTrain)) {
        doc.coarse_label.reset();
        if (truncate_gold_paragraphs) doc = truncate_to_first_span_paragraph(doc);
      }
      parts[p].push_back(std::move(doc));
    }
  }
  return parts;
}

namespace {

void require_labels(std::span<const Document> corpus) {
  for (const auto& doc : corpus) {
    if (!doc.coarse_label) throw ValidationError("document \"" + doc.id + "\" has no coarse_label");
  }
}

}  // namespace

std::vector<ExtractionResult> extract_corpus_serial(std::span<const Document> corpus,
                                                    const HeuristicOptions& options) {
  require_labels(corpus);
  std::vector<ExtractionResult> results;
  results.reserve(corpus.size());
  for (const auto& doc : corpus) results.push_back(extract(doc.text, MagnitudeLabel(*doc.coarse_label), options));
  return results;
}

std::vector<ExtractionResult> extract_corpus(std::span<const Document> corpus, const HeuristicOptions& options,
                                             int threads) {
  require_labels(corpus);
  std::vector<ExtractionResult> results(corpus.size());
  const auto n = static_cast<std::int64_t>(corpus.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(team)
  for (std::int64_t i = 0; i < n; ++i) {
    const Document& doc = corpus[static_cast<std::size_t>(i)];
    results[static_cast<std::size_t>(i)] = extract(doc.text, MagnitudeLabel(*doc.coarse_label), options);
  }
  return results;
}

std::vector<Document> emit_weak_labels(std::span<const Document> corpus, const SpanExtractor& extractor) {
  require_labels(corpus);
  std::vector<Document> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    Document labeled = doc;
    labeled.gold_spans = std::vector<GoldSpan>{};
    if (auto span = extractor(doc)) labeled.gold_spans->push_back(std::move(*span));
    validate_document(labeled);
    out.push_back(std::move(labeled));
  }
  return out;
}

std::vector<Document> emit_weak_labels(std::span<const Document> corpus, const HeuristicOptions& options,
                                       int threads) {
  const std::vector<ExtractionResult> results = extract_corpus(corpus, options, threads);
  std::size_t next = 0;
  return emit_weak_labels(corpus, [&](const Document&) -> std::optional<GoldSpan> {
    const ExtractionResult& r = results[next++];
    if (!r.span) return std::nullopt;
    return GoldSpan{r.span->text, r.span->start, r.span->end};
  });
}

}  // namespace crowdspan
