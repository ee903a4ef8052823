#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdspan/corpus.hpp"
#include "crowdspan/heuristic.hpp"

namespace crowdspan {

// A predicted span for one document. Offsets are code points, as on disk;
// scoring only looks at the text.
struct Prediction {
  std::string id;
  std::optional<std::string> span_text;  // nullopt: predicted no answer
  std::optional<std::size_t> start_char;
  std::optional<std::size_t> end_char;
  bool fallback_used = false;

  bool operator==(const Prediction&) const = default;
};

// Lowercased whitespace tokens with leading/trailing punctuation stripped.
// Articles stay: hedges such as "about" belong to the target spans.
std::vector<std::string> normalize(std::string_view text);

bool exact_match(const Prediction& pred, std::span<const GoldSpan> golds);
double token_f1(const Prediction& pred, std::span<const GoldSpan> golds);

struct DocScore {
  std::string id;
  bool em = false;
  double f1 = 0.0;
};

struct EvalReport {
  double exact_match = 0.0;
  double f1 = 0.0;
  std::size_t n_docs = 0;
  std::vector<DocScore> per_doc;
};

// Scores every corpus document that carries a gold_spans field (an empty
// list means "no answer"), in corpus order. A missing prediction counts as
// predicting no answer. Throws ValidationError for predictions naming unknown
// or duplicate ids, or when no document has gold spans.
EvalReport evaluate(std::span<const Prediction> predictions, std::span<const Document> corpus);

// Byte offsets in the result are converted to code points.
Prediction to_prediction(const Document& doc, const ExtractionResult& result);

// JSONL {id, span_text, start_char, end_char, fallback_used}; absent spans
// are written as nulls. Reading also accepts "doc_id" for "id".
std::string prediction_to_json_line(const Prediction& pred);
std::vector<Prediction> read_predictions(std::istream& in);

// {exact_match, f1, n_docs[, per_doc]} as a JSON string.
std::string report_to_json(const EvalReport& report, bool include_per_doc);

}  // namespace crowdspan
