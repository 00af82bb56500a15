#include "qakd/qa_data.hpp"

#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qakd/errors.hpp"
#include "qakd/formats.hpp"
#include "qakd/unicode.hpp"

namespace qakd {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

const json& require_array(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array()) throw ValidationError(where + ": field \"" + key + "\" must be an array");
  return v;
}

void check_answer(const std::u32string& context, const GoldAnswer& answer, const std::string& id) {
  const std::u32string text = unicode::decode_utf8(answer.text);
  if (answer.answer_start + text.size() > context.size() ||
      context.compare(answer.answer_start, text.size(), text) != 0) {
    throw ValidationError("question " + id + ": answer \"" + answer.text + "\" not found at offset " +
                          std::to_string(answer.answer_start));
  }
}

}  // namespace

std::size_t QADataset::num_paragraphs() const {
  std::size_t n = 0;
  for (const auto& a : articles) n += a.paragraphs.size();
  return n;
}

std::size_t QADataset::num_questions() const {
  std::size_t n = 0;
  for (const auto& a : articles)
    for (const auto& p : a.paragraphs) n += p.qas.size();
  return n;
}

std::vector<std::string> QADataset::question_ids() const {
  std::vector<std::string> ids;
  ids.reserve(num_questions());
  for (const auto& a : articles)
    for (const auto& p : a.paragraphs)
      for (const auto& q : p.qas) ids.push_back(q.id);
  return ids;
}

QADataset parse_squad(std::string_view json_text) {
  const json doc = parse_json(json_text, "dataset");
  if (!doc.is_object()) throw ValidationError("dataset: top level must be an object");

  QADataset dataset;
  if (auto it = doc.find("version"); it != doc.end() && it->is_string()) dataset.version = it->get<std::string>();

  std::unordered_set<std::string> seen;
  const json& data = require_array(doc, "data", "dataset");
  for (std::size_t ai = 0; ai < data.size(); ++ai) {
    const std::string where_a = "data[" + std::to_string(ai) + "]";
    Article article;
    if (auto it = data[ai].find("title"); it != data[ai].end() && it->is_string()) article.title = it->get<std::string>();
    const json& paragraphs = require_array(data[ai], "paragraphs", where_a);
    for (std::size_t pi = 0; pi < paragraphs.size(); ++pi) {
      const std::string where_p = where_a + ".paragraphs[" + std::to_string(pi) + "]";
      Paragraph paragraph;
      paragraph.context = require_string(paragraphs[pi], "context", where_p);
      if (paragraph.context.empty()) throw ValidationError(where_p + ": empty context");
      const std::u32string context = unicode::decode_utf8(paragraph.context);

      for (const json& qa : require_array(paragraphs[pi], "qas", where_p)) {
        QAExample example;
        example.id = require_string(qa, "id", where_p + ".qas");
        if (!seen.insert(example.id).second) throw ValidationError("duplicate question id " + example.id);
        example.question = require_string(qa, "question", "question " + example.id);
        for (const json& ans : require_array(qa, "answers", "question " + example.id)) {
          GoldAnswer answer;
          answer.text = require_string(ans, "text", "question " + example.id);
          const json& start = require(ans, "answer_start", "question " + example.id);
          if (!start.is_number_integer() || start.get<long long>() < 0)
            throw ValidationError("question " + example.id + ": answer_start must be a non-negative integer");
          answer.answer_start = start.get<std::size_t>();
          check_answer(context, answer, example.id);
          example.answers.push_back(std::move(answer));
        }
        if (example.answers.empty()) throw ValidationError("question " + example.id + ": no gold answers");
        paragraph.qas.push_back(std::move(example));
      }
      article.paragraphs.push_back(std::move(paragraph));
    }
    dataset.articles.push_back(std::move(article));
  }
  return dataset;
}

QADataset load_squad(const std::filesystem::path& path) {
  return parse_squad(read_file(path));
}

nlohmann::json to_json(const QADataset& dataset) {
  json data = json::array();
  for (const auto& a : dataset.articles) {
    json paragraphs = json::array();
    for (const auto& p : a.paragraphs) {
      json qas = json::array();
      for (const auto& q : p.qas) {
        json answers = json::array();
        for (const auto& ans : q.answers) answers.push_back({{"text", ans.text}, {"answer_start", ans.answer_start}});
        qas.push_back({{"id", q.id}, {"question", q.question}, {"answers", std::move(answers)}});
      }
      paragraphs.push_back({{"context", p.context}, {"qas", std::move(qas)}});
    }
    data.push_back({{"title", a.title}, {"paragraphs", std::move(paragraphs)}});
  }
  return {{"version", dataset.version}, {"data", std::move(data)}};
}

void save_squad(const std::filesystem::path& path, const QADataset& dataset) {
  write_atomic(path, to_json(dataset).dump() + "\n");
}

std::string normalize_answer(std::string_view text) {
  const std::u32string lowered = unicode::to_lower(unicode::decode_utf8(text));

  std::u32string no_punct;
  no_punct.reserve(lowered.size());
  for (char32_t c : lowered)
    if (!unicode::is_punctuation(c)) no_punct.push_back(c);

  // Drop "a", "an", "the" wherever they stand between word boundaries, the
  // way the reference regex \b(a|an|the)\b does.
  std::u32string no_articles;
  no_articles.reserve(no_punct.size());
  const std::size_t n = no_punct.size();
  std::size_t i = 0;
  while (i < n) {
    const bool boundary_before = i == 0 || !unicode::is_word_char(no_punct[i - 1]);
    if (boundary_before) {
      std::size_t len = 0;
      for (std::u32string_view article : {U"the", U"an", U"a"}) {
        if (no_punct.compare(i, article.size(), article) == 0) {
          const std::size_t after = i + article.size();
          if (after == n || !unicode::is_word_char(no_punct[after])) {
            len = article.size();
            break;
          }
        }
      }
      if (len > 0) {
        no_articles.push_back(U' ');
        i += len;
        continue;
      }
    }
    no_articles.push_back(no_punct[i++]);
  }

  std::u32string out;
  out.reserve(no_articles.size());
  bool pending_space = false;
  for (char32_t c : no_articles) {
    if (unicode::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return unicode::encode_utf8(out);
}

}  // namespace qakd
