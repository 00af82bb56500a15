#ifndef QAKD_METRICS_HPP
#define QAKD_METRICS_HPP

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qakd/qa_data.hpp"

namespace qakd {

/// 1 iff the normalized prediction equals some normalized gold answer.
int exact_match(std::string_view prediction, std::span<const std::string> golds);

/// Best bag-of-tokens F1 over the gold answers.
double f1_score(std::string_view prediction, std::span<const std::string> golds);

/// Single-gold token F1; two empty normalizations score 1, one empty scores 0.
double f1_score(std::string_view prediction, std::string_view gold);

using PredictionMap = std::unordered_map<std::string, std::string>;

enum class MissingPolicy {
  error,  ///< a question without a prediction is an ArgumentError
  zero,   ///< a question without a prediction scores 0 on both metrics
};

struct ExampleScore {
  std::string id;
  int exact_match = 0;
  double f1 = 0.0;
  bool predicted = false;
};

struct EvalReport {
  double exact_match = 0.0;  ///< percentage
  double f1 = 0.0;           ///< percentage
  std::size_t count = 0;
  std::vector<ExampleScore> per_example;  ///< dataset order
  std::vector<std::string> unknown_ids;   ///< predictions for ids not in the dataset, sorted
};

EvalReport evaluate(const QADataset& dataset, const PredictionMap& predictions,
                    MissingPolicy missing = MissingPolicy::zero);

}  // namespace qakd

#endif  // QAKD_METRICS_HPP
