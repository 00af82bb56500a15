#ifndef QAKD_FORMATS_HPP
#define QAKD_FORMATS_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qakd/active_select.hpp"
#include "qakd/metrics.hpp"
#include "qakd/tokenizer_align.hpp"
#include "qakd/types.hpp"

namespace qakd {

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Parses a JSON document; failures become ParseError with the byte offset.
nlohmann::json parse_json(std::string_view text, std::string_view what);

/// One JSON value per non-blank line; errors name the line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

// tokens.jsonl: {"id", "source": "student"|"teacher", "tokens": [{"text", "cont"}]}
struct TokenPair {
  std::string id;
  TokenSequence student;
  TokenSequence teacher;
};
/// Pairs student and teacher records by id, in order of first appearance.
std::vector<TokenPair> read_tokens(const std::filesystem::path& path);

// logits.jsonl: {"id", "start": [...], "end": [...]}
struct LogitRecord {
  std::string id;
  SpanLogits logits;
};
LogitRecord logit_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LogitRecord& rec);
std::vector<LogitRecord> read_logits(const std::filesystem::path& path);

// gold spans: {"id", "start", "end"}
std::map<std::string, GoldSpan> read_gold_spans(const std::filesystem::path& path);

// predictions.jsonl: {"id", "candidates": [{"text", "prob", "start", "end"}]}
PredictionRecord prediction_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PredictionRecord& rec);
PredictionTable read_prediction_records(const std::filesystem::path& path);

/// Official {id: answer} JSON map, or predictions.jsonl (".jsonl" suffix) reduced to top-1 text.
PredictionMap read_prediction_map(const std::filesystem::path& path);

// embeddings.jsonl: {"id", "vec": [...]}
EmbeddingTable read_embeddings(const std::filesystem::path& path);

// pool snapshot: {"cycle", "labeled": [...], "unlabeled": [...]}
Pool pool_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Pool& pool);

/// Report as {"exact_match", "f1", "count"} plus optional per-example scores.
nlohmann::json to_json(const EvalReport& report, bool per_example);

}  // namespace qakd

#endif  // QAKD_FORMATS_HPP
