#include "qakd/simulation.hpp"

#include <algorithm>
#include <set>

#include "qakd/bootstrap.hpp"
#include "qakd/errors.hpp"
#include "qakd/log.hpp"
#include "qakd/rng.hpp"

namespace qakd {
namespace {

std::vector<double> checked_schedule(const SimulationConfig& cfg) {
  if (cfg.schedule.empty()) throw ArgumentError("simulation schedule is empty");
  std::vector<double> schedule = cfg.schedule;
  for (std::size_t c = 0; c < schedule.size(); ++c) {
    if (!(schedule[c] > 0.0)) throw ArgumentError("schedule fractions must be positive");
    if (cfg.mode == BudgetMode::cumulative && c > 0 && !(schedule[c] > schedule[c - 1]))
      throw ArgumentError("cumulative schedule must be strictly increasing");
    if (schedule[c] > 1.0) {
      log::warn("schedule_clipped", {{"cycle", c}, {"fraction", schedule[c]}});
      schedule[c] = 1.0;
    }
  }
  return schedule;
}

}  // namespace

std::vector<CycleRecord> run_simulation(std::span<const std::string> ids, const SimulationConfig& cfg,
                                        const PredictionSource& predictions, const EmbeddingTable* embeddings) {
  cfg.strategy.validate();
  const std::vector<double> schedule = checked_schedule(cfg);
  const std::set<std::string> all(ids.begin(), ids.end());
  const std::size_t total = all.size();

  Pool pool(ids);
  std::vector<CycleRecord> history;

  auto record = [&](int cycle, std::vector<std::string> selected) {
    pool.label(selected);
    pool.set_cycle(cycle);
    if (!pool.partitions(all)) throw ContractViolation("pool partition invariant broken");
    CycleRecord rec;
    rec.cycle = cycle;
    rec.labeled_percent = total == 0 ? 100.0 : 100.0 * static_cast<double>(pool.labeled().size()) / static_cast<double>(total);
    rec.selected = std::move(selected);
    rec.pool = pool;
    history.push_back(std::move(rec));
  };

  StrategyConfig seed_cfg = cfg.strategy;
  seed_cfg.strategy = Strategy::random;
  seed_cfg.seed = derive_seed(cfg.strategy.seed, 0);
  record(0, select(pool, {}, seed_cfg, std::max<std::size_t>(1, fraction_count(schedule[0], total))));

  for (int cycle = 1; cycle < cfg.max_cycles && !pool.unlabeled().empty(); ++cycle) {
    std::size_t budget = 0;
    if (cfg.mode == BudgetMode::cumulative) {
      if (static_cast<std::size_t>(cycle) >= schedule.size()) break;
      const std::size_t target = fraction_count(schedule[static_cast<std::size_t>(cycle)], total);
      budget = target > pool.labeled().size() ? target - pool.labeled().size() : 0;
    } else {
      const double step = schedule.size() > 1 ? schedule[1] : 0.1;
      budget = fraction_count(step, pool.unlabeled().size());
    }
    budget = std::max<std::size_t>(budget, 1);

    StrategyConfig cycle_cfg = cfg.strategy;
    cycle_cfg.seed = derive_seed(cfg.strategy.seed, static_cast<std::uint64_t>(cycle));
    const PredictionTable preds = cfg.strategy.strategy == Strategy::random ? PredictionTable{} : predictions(cycle);
    record(cycle, select(pool, preds, cycle_cfg, budget, embeddings));
  }
  return history;
}

}  // namespace qakd
