#ifndef QAKD_QA_DATA_HPP
#define QAKD_QA_DATA_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace qakd {

struct GoldAnswer {
  std::string text;
  std::size_t answer_start = 0;  ///< code-point offset into the paragraph context
};

struct QAExample {
  std::string id;
  std::string question;
  std::vector<GoldAnswer> answers;
};

struct Paragraph {
  std::string context;
  std::vector<QAExample> qas;
};

struct Article {
  std::string title;
  std::vector<Paragraph> paragraphs;
};

/// A SQuAD v1.1-format corpus (Adversarial SQuAD files share the schema).
/// Construct through parse_squad/load_squad, which validate:
///   - question ids are unique across the dataset;
///   - every question has at least one gold answer;
///   - every answer text sits at its answer_start in the context;
///   - contexts are non-empty.
struct QADataset {
  std::string version;
  std::vector<Article> articles;

  std::size_t num_articles() const { return articles.size(); }
  std::size_t num_paragraphs() const;
  std::size_t num_questions() const;

  /// Question ids in file order.
  std::vector<std::string> question_ids() const;
};

QADataset parse_squad(std::string_view json_text);
QADataset load_squad(const std::filesystem::path& path);

nlohmann::json to_json(const QADataset& dataset);
void save_squad(const std::filesystem::path& path, const QADataset& dataset);

/// Official SQuAD answer normalization: lower-case, strip punctuation, drop the
/// whole words "a", "an", "the", collapse whitespace.
std::string normalize_answer(std::string_view text);

}  // namespace qakd

#endif  // QAKD_QA_DATA_HPP
