#include "qakd/metrics.hpp"

#include <algorithm>
#include <map>

#include "qakd/errors.hpp"
#include "qakd/log.hpp"

namespace qakd {
namespace {

std::vector<std::string> split_tokens(const std::string& normalized) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    std::size_t next = normalized.find(' ', pos);
    if (next == std::string::npos) next = normalized.size();
    if (next > pos) tokens.emplace_back(normalized.substr(pos, next - pos));
    pos = next + 1;
  }
  return tokens;
}

void require_golds(std::span<const std::string> golds) {
  if (golds.empty()) throw ArgumentError("no gold answers to compare against");
}

}  // namespace

int exact_match(std::string_view prediction, std::span<const std::string> golds) {
  require_golds(golds);
  const std::string pred = normalize_answer(prediction);
  return std::any_of(golds.begin(), golds.end(), [&](const std::string& g) { return normalize_answer(g) == pred; })
             ? 1
             : 0;
}

double f1_score(std::string_view prediction, std::string_view gold) {
  const std::vector<std::string> pred_tokens = split_tokens(normalize_answer(prediction));
  const std::vector<std::string> gold_tokens = split_tokens(normalize_answer(gold));
  if (pred_tokens.empty() || gold_tokens.empty()) return pred_tokens.empty() && gold_tokens.empty() ? 1.0 : 0.0;

  std::map<std::string_view, long> counts;
  for (const auto& t : gold_tokens) ++counts[t];
  long common = 0;
  for (const auto& t : pred_tokens) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred_tokens.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold_tokens.size());
  return (2.0 * precision * recall) / (precision + recall);
}

double f1_score(std::string_view prediction, std::span<const std::string> golds) {
  require_golds(golds);
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, f1_score(prediction, g));
  return best;
}

EvalReport evaluate(const QADataset& dataset, const PredictionMap& predictions, MissingPolicy missing) {
  EvalReport report;
  std::size_t em_sum = 0;
  double f1_sum = 0.0;
  std::vector<std::string> golds;
  std::size_t matched = 0;

  for (const auto& article : dataset.articles) {
    for (const auto& paragraph : article.paragraphs) {
      for (const auto& qa : paragraph.qas) {
        ExampleScore score{qa.id, 0, 0.0, false};
        auto it = predictions.find(qa.id);
        if (it == predictions.end()) {
          if (missing == MissingPolicy::error) throw ArgumentError("no prediction for question " + qa.id);
          log::warn("missing_prediction", {{"id", qa.id}});
        } else {
          ++matched;
          golds.clear();
          for (const auto& a : qa.answers) golds.push_back(a.text);
          score.predicted = true;
          score.exact_match = exact_match(it->second, golds);
          score.f1 = f1_score(it->second, golds);
        }
        em_sum += static_cast<std::size_t>(score.exact_match);
        f1_sum += score.f1;
        report.per_example.push_back(std::move(score));
      }
    }
  }

  if (matched != predictions.size()) {
    std::unordered_map<std::string_view, bool> known;
    for (const auto& s : report.per_example) known.emplace(s.id, true);
    for (const auto& [id, text] : predictions)
      if (!known.contains(id)) report.unknown_ids.push_back(id);
    std::sort(report.unknown_ids.begin(), report.unknown_ids.end());
    for (const auto& id : report.unknown_ids) log::warn("unknown_prediction_id", {{"id", id}});
  }

  report.count = report.per_example.size();
  if (report.count > 0) {
    report.exact_match = 100.0 * static_cast<double>(em_sum) / static_cast<double>(report.count);
    report.f1 = 100.0 * f1_sum / static_cast<double>(report.count);
  }
  return report;
}

}  // namespace qakd
