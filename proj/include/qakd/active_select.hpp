#ifndef QAKD_ACTIVE_SELECT_HPP
#define QAKD_ACTIVE_SELECT_HPP

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qakd/types.hpp"

namespace qakd {

struct AnswerCandidate {
  std::string text;
  double probability = 0.0;
  Index start = 0;
  Index end = 0;
};

/// Ranked answer candidates for one question.
struct PredictionRecord {
  std::string id;
  std::vector<AnswerCandidate> candidates;

  /// Stable sort by descending probability.
  void sort_candidates();
};

using PredictionTable = std::unordered_map<std::string, PredictionRecord>;

/// Question embeddings keyed by id; every vector has the same dimension.
class EmbeddingTable {
 public:
  void insert(std::string id, Vector<double> vec);
  const Vector<double>* find(const std::string& id) const;
  Index dimension() const { return dim_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, Vector<double>> table_;
  Index dim_ = -1;
};

enum class Strategy { random, lc, margin, entropy, lc_cluster };

enum class MarginMode {
  paper_literal,  ///< largest top-1/top-2 gap first
  uncertainty,    ///< smallest gap first
};

struct StrategyConfig {
  Strategy strategy = Strategy::lc;
  int top_n = 5;
  int k_clusters = 10;
  int oversample_factor = 3;
  MarginMode margin_mode = MarginMode::paper_literal;
  bool renormalize_entropy = false;
  /// Missing prediction records rank last instead of raising.
  bool lenient = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Labeled / unlabeled partition of the question ids.
class Pool {
 public:
  Pool() = default;
  /// All ids start unlabeled at cycle 0.
  explicit Pool(std::span<const std::string> ids);
  Pool(std::span<const std::string> labeled, std::span<const std::string> unlabeled, int cycle);

  const std::set<std::string>& labeled() const { return labeled_; }
  const std::set<std::string>& unlabeled() const { return unlabeled_; }
  int cycle() const { return cycle_; }
  std::size_t size() const { return labeled_.size() + unlabeled_.size(); }

  /// Moves ids from the unlabeled to the labeled set.
  void label(std::span<const std::string> ids);
  void set_cycle(int cycle) { cycle_ = cycle; }

  /// Disjoint and covering exactly `all`.
  bool partitions(const std::set<std::string>& all) const;

 private:
  std::set<std::string> labeled_;
  std::set<std::string> unlabeled_;
  int cycle_ = 0;
};

/// 1 - p(top candidate).
double score_least_confidence(const PredictionRecord& rec);

/// p(top 1) - p(top 2); needs at least two candidates.
double score_margin(const PredictionRecord& rec);

/// -sum p log p over the first min(top_n, available) candidates.
double score_entropy(const PredictionRecord& rec, int top_n, bool renormalize = false);

/// Largest-remainder apportionment of `budget` across groups of the given sizes.
/// Sums to min(budget, total) and never exceeds a group's size.
std::vector<std::size_t> largest_remainder(std::span<const std::size_t> sizes, std::size_t budget);

/// Unlabeled ids ordered most-informative first under the configured strategy
/// (ties by ascending id). Not defined for lc_cluster.
std::vector<std::string> rank_unlabeled(const Pool& pool, const PredictionTable& preds, const StrategyConfig& cfg);

/// Picks min(budget, |unlabeled|) distinct unlabeled ids.
std::vector<std::string> select(const Pool& pool, const PredictionTable& preds, const StrategyConfig& cfg,
                                std::size_t budget, const EmbeddingTable* embeddings = nullptr);

/// Least-confidence preselection of oversample_factor * budget ids, k-means on
/// their embeddings, proportional per-cluster picks by least confidence.
std::vector<std::string> select_lc_cluster(const Pool& pool, const PredictionTable& preds,
                                           const EmbeddingTable& embeddings, const StrategyConfig& cfg,
                                           std::size_t budget);

}  // namespace qakd

#endif  // QAKD_ACTIVE_SELECT_HPP
