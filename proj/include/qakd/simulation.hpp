#ifndef QAKD_SIMULATION_HPP
#define QAKD_SIMULATION_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qakd/active_select.hpp"

namespace qakd {

enum class BudgetMode {
  /// schedule[c] is the cumulative labeled fraction of the whole pool after cycle c.
  cumulative,
  /// schedule[0] seeds the pool; every later cycle labels schedule[1] (default 0.1)
  /// of whatever is still unlabeled, until nothing is left.
  fraction_of_remaining,
};

struct SimulationConfig {
  std::vector<double> schedule{0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  BudgetMode mode = BudgetMode::cumulative;
  StrategyConfig strategy;
  int max_cycles = 1000;
};

struct CycleRecord {
  int cycle = 0;
  double labeled_percent = 0.0;
  std::vector<std::string> selected;
  Pool pool;  ///< snapshot after this cycle's labels were added
};

/// Supplies the predictions of the model trained on the labeled set of the previous cycle.
using PredictionSource = std::function<PredictionTable(int cycle)>;

/// Replays the pool-based loop: cycle 0 labels a seeded random sample of
/// schedule[0]; each later cycle asks `predictions(cycle)` and selects enough
/// unlabeled ids to meet the schedule. Seeds per cycle are derive_seed(seed, cycle).
std::vector<CycleRecord> run_simulation(std::span<const std::string> ids, const SimulationConfig& cfg,
                                        const PredictionSource& predictions,
                                        const EmbeddingTable* embeddings = nullptr);

}  // namespace qakd

#endif  // QAKD_SIMULATION_HPP
