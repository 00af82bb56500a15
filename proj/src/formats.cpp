#include "qakd/formats.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qakd/errors.hpp"

namespace qakd {
namespace {

using nlohmann::json;

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) throw ValidationError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Index index_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ValidationError(where + ": \"" + key + "\" must be an integer");
  return v.get<Index>();
}

LogitVector vector_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) throw ValidationError(where + ": \"" + key + "\" must be an array of numbers");
  LogitVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ValidationError(where + ": \"" + key + "\" must be an array of numbers");
    out(static_cast<Index>(i)) = v[i].get<double>();
    if (!std::isfinite(out(static_cast<Index>(i)))) throw ValidationError(where + ": non-finite value in \"" + key + "\"");
  }
  return out;
}

json vector_json(const LogitVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::string record_where(const json& j, std::size_t line) {
  std::string where = "record " + std::to_string(line);
  if (j.is_object()) {
    auto it = j.find("id");
    if (it != j.end() && it->is_string()) where += " (id " + it->get<std::string>() + ")";
  }
  return where;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string() + ": " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<json> out;
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    ++line;
    const std::string_view row(text.data() + pos, eol - pos);
    if (row.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(json::parse(row.begin(), row.end()));
      } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": malformed JSON at byte " +
                             std::to_string(pos + e.byte) + ": " + e.what(),
                         pos + e.byte);
      }
    }
    pos = eol + 1;
  }
  return out;
}

std::vector<TokenPair> read_tokens(const std::filesystem::path& path) {
  std::vector<TokenPair> pairs;
  std::map<std::string, std::size_t> index;
  std::map<std::string, int> seen_sources;
  const auto rows = read_jsonl(path);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& j = rows[r];
    const std::string where = record_where(j, r + 1);
    const std::string id = string_field(j, "id", where);
    const std::string source = string_field(j, "source", where);
    if (source != "student" && source != "teacher") throw ValidationError(where + ": source must be student or teacher");
    const int bit = source == "student" ? 1 : 2;
    if (seen_sources[id] & bit) throw ValidationError(where + ": duplicate " + source + " record");
    seen_sources[id] |= bit;

    TokenSequence seq;
    seq.source = source == "student" ? TokenSource::student : TokenSource::teacher;
    const json& tokens = field(j, "tokens", where);
    if (!tokens.is_array()) throw ValidationError(where + ": tokens must be an array");
    for (const json& t : tokens) {
      Token tok;
      tok.text = string_field(t, "text", where);
      if (tok.text.empty()) throw ValidationError(where + ": token text is empty");
      if (auto it = t.find("cont"); it != t.end()) {
        if (!it->is_boolean()) throw ValidationError(where + ": cont must be a boolean");
        tok.is_continuation = it->get<bool>();
      }
      seq.tokens.push_back(std::move(tok));
    }
    if (!seq.tokens.empty() && seq.tokens.front().is_continuation)
      throw ValidationError(where + ": first token is marked as a continuation");

    auto [it, inserted] = index.emplace(id, pairs.size());
    if (inserted) pairs.push_back(TokenPair{id, {}, {}});
    TokenPair& pair = pairs[it->second];
    (seq.source == TokenSource::student ? pair.student : pair.teacher) = std::move(seq);
  }
  for (const auto& [id, bits] : seen_sources)
    if (bits != 3) throw ValidationError("tokens for " + id + " lack a " + (bits == 1 ? "teacher" : "student") + " record");
  return pairs;
}

LogitRecord logit_record_from_json(const json& j) {
  const std::string where = record_where(j, 0);
  LogitRecord rec;
  rec.id = string_field(j, "id", where);
  rec.logits.start = vector_field(j, "start", where);
  rec.logits.end = vector_field(j, "end", where);
  if (rec.logits.start.size() != rec.logits.end.size())
    throw ValidationError(where + ": start and end have different lengths");
  if (rec.logits.start.size() == 0) throw ValidationError(where + ": empty logits");
  return rec;
}

json to_json(const LogitRecord& rec) {
  return {{"id", rec.id}, {"start", vector_json(rec.logits.start)}, {"end", vector_json(rec.logits.end)}};
}

std::vector<LogitRecord> read_logits(const std::filesystem::path& path) {
  std::vector<LogitRecord> out;
  std::map<std::string, bool> seen;
  for (const json& j : read_jsonl(path)) {
    out.push_back(logit_record_from_json(j));
    if (!seen.emplace(out.back().id, true).second) throw ValidationError("duplicate logits record " + out.back().id);
  }
  return out;
}

std::map<std::string, GoldSpan> read_gold_spans(const std::filesystem::path& path) {
  std::map<std::string, GoldSpan> out;
  const auto rows = read_jsonl(path);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string where = record_where(rows[r], r + 1);
    const std::string id = string_field(rows[r], "id", where);
    GoldSpan span{index_field(rows[r], "start", where), index_field(rows[r], "end", where)};
    if (span.start < 0 || span.end < span.start) throw ValidationError(where + ": invalid gold span");
    if (!out.emplace(id, span).second) throw ValidationError(where + ": duplicate gold span");
  }
  return out;
}

PredictionRecord prediction_record_from_json(const json& j) {
  const std::string where = record_where(j, 0);
  PredictionRecord rec;
  rec.id = string_field(j, "id", where);
  const json& cands = field(j, "candidates", where);
  if (!cands.is_array() || cands.empty()) throw ValidationError(where + ": candidates must be a non-empty array");
  for (const json& c : cands) {
    AnswerCandidate cand;
    cand.text = string_field(c, "text", where);
    const json& p = field(c, "prob", where);
    if (!p.is_number()) throw ValidationError(where + ": prob must be a number");
    cand.probability = p.get<double>();
    if (!(cand.probability >= 0.0 && cand.probability <= 1.0))
      throw ValidationError(where + ": prob must lie in [0, 1]");
    cand.start = index_field(c, "start", where);
    cand.end = index_field(c, "end", where);
    if (cand.start < 0 || cand.end < cand.start) throw ValidationError(where + ": candidate has start > end");
    rec.candidates.push_back(std::move(cand));
  }
  rec.sort_candidates();
  return rec;
}

json to_json(const PredictionRecord& rec) {
  json cands = json::array();
  for (const auto& c : rec.candidates)
    cands.push_back({{"text", c.text}, {"prob", c.probability}, {"start", c.start}, {"end", c.end}});
  return {{"id", rec.id}, {"candidates", std::move(cands)}};
}

PredictionTable read_prediction_records(const std::filesystem::path& path) {
  PredictionTable out;
  for (const json& j : read_jsonl(path)) {
    PredictionRecord rec = prediction_record_from_json(j);
    std::string id = rec.id;
    if (!out.emplace(std::move(id), std::move(rec)).second)
      throw ValidationError("duplicate prediction record " + j.at("id").get<std::string>());
  }
  return out;
}

PredictionMap read_prediction_map(const std::filesystem::path& path) {
  PredictionMap out;
  if (path.extension() == ".jsonl") {
    for (auto& [id, rec] : read_prediction_records(path)) out.emplace(id, rec.candidates.front().text);
    return out;
  }
  const json doc = parse_json(read_file(path), path.string());
  if (!doc.is_object()) throw ValidationError(path.string() + ": predictions must be a JSON object {id: text}");
  for (const auto& [id, text] : doc.items()) {
    if (!text.is_string()) throw ValidationError(path.string() + ": prediction for " + id + " is not a string");
    out.emplace(id, text.get<std::string>());
  }
  return out;
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  EmbeddingTable table;
  std::map<std::string, bool> seen;
  const auto rows = read_jsonl(path);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string where = record_where(rows[r], r + 1);
    std::string id = string_field(rows[r], "id", where);
    if (!seen.emplace(id, true).second) throw ValidationError(where + ": duplicate embedding");
    table.insert(std::move(id), vector_field(rows[r], "vec", where));
  }
  return table;
}

Pool pool_from_json(const json& j) {
  const std::string where = "pool snapshot";
  auto ids = [&](const char* key) {
    const json& arr = field(j, key, where);
    if (!arr.is_array()) throw ValidationError(where + ": \"" + key + "\" must be an array");
    std::vector<std::string> out;
    for (const json& v : arr) {
      if (!v.is_string()) throw ValidationError(where + ": ids must be strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  const auto cycle = index_field(j, "cycle", where);
  if (cycle < 0) throw ValidationError(where + ": cycle must be non-negative");
  return Pool(ids("labeled"), ids("unlabeled"), static_cast<int>(cycle));
}

json to_json(const Pool& pool) {
  return {{"cycle", pool.cycle()}, {"labeled", pool.labeled()}, {"unlabeled", pool.unlabeled()}};
}

json to_json(const EvalReport& report, bool per_example) {
  json out = {{"exact_match", report.exact_match}, {"f1", report.f1}, {"count", report.count}};
  if (per_example) {
    json scores = json::object();
    for (const auto& s : report.per_example) scores[s.id] = {{"em", s.exact_match}, {"f1", s.f1}};
    out["per_example"] = std::move(scores);
  }
  return out;
}

}  // namespace qakd
