#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crowdspan/heuristic.hpp"

namespace crowdspan {

// Offsets are UTF-8 byte offsets into Document::text. On disk they are
// Unicode code point offsets under the names start_char / end_char.
struct GoldSpan {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const GoldSpan&) const = default;
};

struct Document {
  std::string id;
  std::optional<std::string> url;
  std::string text;
  std::optional<int> coarse_label;
  // nullopt: no span annotation. Empty vector: annotated as impossible.
  std::optional<std::vector<GoldSpan>> gold_spans;

  bool operator==(const Document&) const = default;
};

// Throws ValidationError naming the document id.
void validate_document(const Document& doc);
// Per-document checks plus id uniqueness.
void validate_corpus(std::span<const Document> corpus);

// JSONL I/O. Loading throws ParseError ("line N: ...") for malformed records
// and ValidationError for invariant violations.
std::vector<Document> read_corpus(std::istream& in);
std::vector<Document> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, std::span<const Document> corpus);
void save_corpus(const std::filesystem::path& path, std::span<const Document> corpus);

// One JSONL line (no trailing newline).
std::string document_to_json_line(const Document& doc);

// --- splitting ---------------------------------------------------------------

enum class SplitPart : std::size_t { CoarseTrain = 0, GoldSpanTrain = 1, Validation = 2, Test = 3 };
inline constexpr std::array<std::string_view, 4> kSplitPartNames = {"coarse_train", "gold_span_train",
                                                                      "validation", "test"};

using SplitRatios = std::array<double, 4>;
using SplitCounts = std::array<std::size_t, 4>;

struct SplitSpec {
  std::variant<SplitRatios, SplitCounts> sizes = SplitCounts{0, 25, 0, 0};
  std::uint64_t seed = 0;
  // Cut gold-span-train documents down to the paragraph holding their first span.
  bool truncate_gold_paragraphs = true;
};

// Ratios that reproduce the 2694 / 25 / 200 / 930 partition of 3,849 documents.
SplitRatios default_split_ratios();

struct SplitResult {
  std::array<std::vector<std::string>, 4> ids;

  const std::vector<std::string>& part(SplitPart p) const { return ids[static_cast<std::size_t>(p)]; }
  bool operator==(const SplitResult&) const = default;
};

// Largest-remainder apportionment of total over the ratios; ties go to the
// earlier part. Throws ConfigError for negative ratios or a sum other than 1.
SplitCounts apportion(const SplitRatios& ratios, std::size_t total);

// Seeded shuffle, then partition in part order. Throws ConfigError when the
// counts do not sum to the corpus size or the corpus is empty.
SplitResult split_corpus(std::span<const Document> corpus, const SplitSpec& spec);

// Documents of each part as they are written to disk: coarse-train loses its
// gold spans, gold-span-train loses its coarse labels (and is optionally
// truncated to one paragraph).
std::array<std::vector<Document>, 4> materialize_split(std::span<const Document> corpus, const SplitResult& split,
                                                       bool truncate_gold_paragraphs);

// Keeps only the paragraph ('\n'-delimited) holding the first gold span, with
// spans re-based. Documents without spans come back unchanged.
Document truncate_to_first_span_paragraph(const Document& doc);

// --- extraction over corpora ---------------------------------------------------

// Runs the heuristic over every document in parallel (OpenMP) and returns
// results in input order. threads == 0 uses the OpenMP default. Every
// document needs a coarse label; throws ValidationError naming the first
// one without.
std::vector<ExtractionResult> extract_corpus(std::span<const Document> corpus,
                                             const HeuristicOptions& options = default_heuristic_options(),
                                             int threads = 0);

// Single-threaded reference for extract_corpus.
std::vector<ExtractionResult> extract_corpus_serial(std::span<const Document> corpus,
                                                    const HeuristicOptions& options = default_heuristic_options());

using SpanExtractor = std::function<std::optional<GoldSpan>(const Document&)>;

// Replaces each document's gold spans with the extractor's span (or an empty
// list when it finds none). Throws ValidationError for a document with no
// coarse label.
std::vector<Document> emit_weak_labels(std::span<const Document> corpus, const SpanExtractor& extractor);

// Heuristic-backed weak labels, extracted in parallel.
std::vector<Document> emit_weak_labels(std::span<const Document> corpus,
                                       const HeuristicOptions& options = default_heuristic_options(),
                                       int threads = 0);

}  // namespace crowdspan
