#include "qakd/active_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "qakd/errors.hpp"
#include "qakd/kmeans.hpp"
#include "qakd/log.hpp"
#include "qakd/rng.hpp"

namespace qakd {
namespace {

__extension__ using Wide = unsigned __int128;

struct Ranked {
  std::string id;
  std::optional<double> key;  // larger ranks first; empty ranks last
};

void sort_ranked(std::vector<Ranked>& items) {
  std::sort(items.begin(), items.end(), [](const Ranked& a, const Ranked& b) {
    if (a.key.has_value() != b.key.has_value()) return a.key.has_value();
    if (a.key && *a.key != *b.key) return *a.key > *b.key;
    return a.id < b.id;
  });
}

std::optional<double> ranking_key(const PredictionRecord& rec, const StrategyConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::lc:
    case Strategy::lc_cluster:
      // Ascending top-1 probability, i.e. descending 1 - p without rounding.
      score_least_confidence(rec);
      return -rec.candidates.front().probability;
    case Strategy::margin:
      if (rec.candidates.size() < 2) {
        log::warn("margin_unscorable", {{"id", rec.id}, {"candidates", rec.candidates.size()}});
        return std::nullopt;
      }
      return cfg.margin_mode == MarginMode::paper_literal ? score_margin(rec) : -score_margin(rec);
    case Strategy::entropy:
      return score_entropy(rec, cfg.top_n, cfg.renormalize_entropy);
    case Strategy::random:
      break;
  }
  return std::nullopt;
}

}  // namespace

void PredictionRecord::sort_candidates() {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const AnswerCandidate& a, const AnswerCandidate& b) { return a.probability > b.probability; });
}

void EmbeddingTable::insert(std::string id, Vector<double> vec) {
  if (vec.size() == 0) throw ValidationError("embedding for " + id + " is empty");
  if (dim_ >= 0 && vec.size() != dim_)
    throw ValidationError("embedding for " + id + " has dimension " + std::to_string(vec.size()) + ", expected " +
                          std::to_string(dim_));
  if (!vec.allFinite()) throw ValidationError("embedding for " + id + " has non-finite values");
  dim_ = vec.size();
  table_.insert_or_assign(std::move(id), std::move(vec));
}

const Vector<double>* EmbeddingTable::find(const std::string& id) const {
  auto it = table_.find(id);
  return it == table_.end() ? nullptr : &it->second;
}

void StrategyConfig::validate() const {
  if ((strategy == Strategy::margin || strategy == Strategy::entropy) && top_n < 2)
    throw ArgumentError("top_n must be at least 2 for margin and entropy sampling");
  if (top_n < 1) throw ArgumentError("top_n must be positive");
  if (oversample_factor < 1) throw ArgumentError("oversample factor must be at least 1");
  if (k_clusters < 1) throw ArgumentError("k_clusters must be at least 1");
}

Pool::Pool(std::span<const std::string> ids) {
  for (const auto& id : ids)
    if (!unlabeled_.insert(id).second) throw ValidationError("duplicate id in pool: " + id);
}

Pool::Pool(std::span<const std::string> labeled, std::span<const std::string> unlabeled, int cycle) : cycle_(cycle) {
  for (const auto& id : labeled)
    if (!labeled_.insert(id).second) throw ValidationError("duplicate labeled id in pool: " + id);
  for (const auto& id : unlabeled) {
    if (labeled_.contains(id)) throw ValidationError("id is both labeled and unlabeled: " + id);
    if (!unlabeled_.insert(id).second) throw ValidationError("duplicate unlabeled id in pool: " + id);
  }
}

void Pool::label(std::span<const std::string> ids) {
  for (const auto& id : ids)
    if (!unlabeled_.contains(id)) throw ArgumentError("cannot label " + id + ": not in the unlabeled set");
  for (const auto& id : ids) {
    unlabeled_.erase(id);
    labeled_.insert(id);
  }
}

bool Pool::partitions(const std::set<std::string>& all) const {
  if (labeled_.size() + unlabeled_.size() != all.size()) return false;
  for (const auto& id : labeled_)
    if (unlabeled_.contains(id) || !all.contains(id)) return false;
  for (const auto& id : unlabeled_)
    if (!all.contains(id)) return false;
  return true;
}

double score_least_confidence(const PredictionRecord& rec) {
  if (rec.candidates.empty()) throw ArgumentError("prediction record " + rec.id + " has no candidates");
  return 1.0 - rec.candidates.front().probability;
}

double score_margin(const PredictionRecord& rec) {
  if (rec.candidates.size() < 2)
    throw ArgumentError("prediction record " + rec.id + " needs two candidates for margin sampling");
  return rec.candidates[0].probability - rec.candidates[1].probability;
}

double score_entropy(const PredictionRecord& rec, int top_n, bool renormalize) {
  if (rec.candidates.empty()) throw ArgumentError("prediction record " + rec.id + " has no candidates");
  if (top_n < 1) throw ArgumentError("top_n must be positive");
  const std::size_t n = std::min(rec.candidates.size(), static_cast<std::size_t>(top_n));
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = rec.candidates[i].probability;
    if (!(p >= 0.0)) throw ContractViolation("prediction record " + rec.id + " has a negative probability");
    mass += p;
  }
  const double scale = renormalize && mass > 0.0 ? 1.0 / mass : 1.0;
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = rec.candidates[i].probability * scale;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<std::size_t> largest_remainder(std::span<const std::size_t> sizes, std::size_t budget) {
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  std::vector<std::size_t> quotas(sizes.size(), 0);
  if (total == 0) return quotas;
  budget = std::min(budget, total);

  // Exact integer arithmetic: quota = floor(budget * size / total), remainder in units of 1/total.
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder, group)
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const auto product = static_cast<Wide>(budget) * sizes[g];
    quotas[g] = static_cast<std::size_t>(product / total);
    remainders.emplace_back(static_cast<std::size_t>(product % total), g);
    assigned += quotas[g];
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < budget; ++r, ++assigned) ++quotas[remainders[r].second];
  return quotas;
}

std::vector<std::string> rank_unlabeled(const Pool& pool, const PredictionTable& preds, const StrategyConfig& cfg) {
  cfg.validate();
  std::vector<std::string> ids(pool.unlabeled().begin(), pool.unlabeled().end());
  if (cfg.strategy == Strategy::random) {
    Rng rng(cfg.seed);
    shuffle(ids, rng);
    return ids;
  }

  std::vector<Ranked> ranked;
  ranked.reserve(ids.size());
  for (auto& id : ids) {
    auto it = preds.find(id);
    if (it == preds.end()) {
      if (!cfg.lenient) throw ArgumentError("no prediction record for unlabeled id " + id);
      ranked.push_back({std::move(id), std::nullopt});
      continue;
    }
    ranked.push_back({std::move(id), ranking_key(it->second, cfg)});
  }
  sort_ranked(ranked);
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(std::move(r.id));
  return out;
}

std::vector<std::string> select(const Pool& pool, const PredictionTable& preds, const StrategyConfig& cfg,
                                std::size_t budget, const EmbeddingTable* embeddings) {
  if (budget == 0 || pool.unlabeled().empty()) return {};
  if (cfg.strategy == Strategy::lc_cluster) {
    if (embeddings == nullptr) throw ArgumentError("lc_cluster sampling needs question embeddings");
    return select_lc_cluster(pool, preds, *embeddings, cfg, budget);
  }
  std::vector<std::string> ranked = rank_unlabeled(pool, preds, cfg);
  ranked.resize(std::min(budget, ranked.size()));
  return ranked;
}

std::vector<std::string> select_lc_cluster(const Pool& pool, const PredictionTable& preds,
                                           const EmbeddingTable& embeddings, const StrategyConfig& cfg,
                                           std::size_t budget) {
  if (budget == 0 || pool.unlabeled().empty()) return {};
  StrategyConfig lc_cfg = cfg;
  lc_cfg.strategy = Strategy::lc;
  std::vector<std::string> candidates = rank_unlabeled(pool, preds, lc_cfg);
  const std::size_t preselect = std::min(candidates.size(), budget * static_cast<std::size_t>(cfg.oversample_factor));
  candidates.resize(preselect);
  budget = std::min(budget, candidates.size());

  const auto n = static_cast<Index>(candidates.size());
  Matrix<double> points(n, std::max<Index>(embeddings.dimension(), 0));
  for (Index i = 0; i < n; ++i) {
    const auto& id = candidates[static_cast<std::size_t>(i)];
    const Vector<double>* vec = embeddings.find(id);
    if (vec == nullptr) throw ArgumentError("no embedding for candidate " + id);
    points.row(i) = vec->transpose();
  }

  const Index k = std::min<Index>(cfg.k_clusters, n);
  const auto clustering = kmeans(points, k, cfg.seed);

  // Members of each cluster, kept in least-confidence rank order.
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
  for (Index i = 0; i < n; ++i) members[static_cast<std::size_t>(clustering.assignments[static_cast<std::size_t>(i)])].push_back(i);
  std::vector<std::size_t> sizes;
  for (const auto& m : members) sizes.push_back(m.size());
  const std::vector<std::size_t> quotas = largest_remainder(sizes, budget);

  std::vector<Index> picked;
  for (std::size_t c = 0; c < members.size(); ++c)
    for (std::size_t r = 0; r < quotas[c]; ++r) picked.push_back(members[c][r]);
  std::sort(picked.begin(), picked.end());

  std::vector<std::string> out;
  out.reserve(picked.size());
  for (Index i : picked) out.push_back(candidates[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace qakd
