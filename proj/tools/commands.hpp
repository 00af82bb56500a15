#ifndef QAKD_TOOLS_COMMANDS_HPP
#define QAKD_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qakd/active_select.hpp"
#include "qakd/distill_loss.hpp"
#include "qakd/simulation.hpp"

namespace qakd::cli {

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool lenient = false;
  std::string output;  ///< empty: stdout
  int threads = 1;
};

struct AlignOptionsCli {
  std::string tokens;
  std::string teacher_logits;
  std::size_t max_len = 384;
};

struct ResampleOptionsCli {
  std::string logits;
  std::string like;
  long target_len = 0;
  InterpolationMethod method = InterpolationMethod::cubic;
};

struct LossOptionsCli {
  std::string student;
  std::string teacher;
  std::string tokens;
  std::string gold;
  std::size_t max_len = 384;
  DistillConfig distill;
};

struct EvaluateOptionsCli {
  std::string dataset;
  std::string predictions;
  bool per_example = false;
};

struct SelectOptionsCli {
  std::string pool;
  std::string preds;
  std::string embeddings;
  std::optional<std::size_t> budget;
  std::vector<double> schedule;
  StrategyConfig strategy;
};

struct SimulateOptionsCli {
  std::string dataset;
  std::string ids;
  std::string preds_dir;
  std::string embeddings;
  std::string snapshots;
  SimulationConfig sim;
};

struct BootstrapOptionsCli {
  std::string a;
  std::string b;
  std::string metric = "em";
  double fraction = 0.1;
  std::uint64_t resamples = 100000;
  double alpha = 0.05;
};

struct ValidateOptionsCli {
  std::string kind;
  std::string file;
};

// Each returns the document to emit (without trailing newline).
std::string run_align(const GlobalOptions& g, const AlignOptionsCli& o);
std::string run_resample(const GlobalOptions& g, const ResampleOptionsCli& o);
std::string run_loss(const GlobalOptions& g, const LossOptionsCli& o);
std::string run_evaluate(const GlobalOptions& g, const EvaluateOptionsCli& o);
std::string run_select(const GlobalOptions& g, const SelectOptionsCli& o);
std::string run_simulate(const GlobalOptions& g, const SimulateOptionsCli& o);
std::string run_bootstrap(const GlobalOptions& g, const BootstrapOptionsCli& o);
std::string run_validate(const GlobalOptions& g, const ValidateOptionsCli& o);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace qakd::cli

#endif  // QAKD_TOOLS_COMMANDS_HPP
