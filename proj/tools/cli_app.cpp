#include <filesystem>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "json_config.hpp"
#include "qakd/errors.hpp"
#include "qakd/formats.hpp"
#include "qakd/log.hpp"

namespace qakd::cli {
namespace {

const std::map<std::string, InterpolationMethod> kMethods{{"linear", InterpolationMethod::linear},
                                                          {"cubic", InterpolationMethod::cubic}};

const std::map<std::string, Strategy> kStrategies{{"random", Strategy::random},
                                                  {"lc", Strategy::lc},
                                                  {"margin", Strategy::margin},
                                                  {"entropy", Strategy::entropy},
                                                  {"lc_cluster", Strategy::lc_cluster}};

const std::map<std::string, MarginMode> kMarginModes{{"paper_literal", MarginMode::paper_literal},
                                                     {"uncertainty", MarginMode::uncertainty}};

const std::map<std::string, BudgetMode> kBudgetModes{{"cumulative", BudgetMode::cumulative},
                                                     {"remaining", BudgetMode::fraction_of_remaining}};

template <typename Enum>
std::vector<std::string> names_of(const std::map<std::string, Enum>& table) {
  std::vector<std::string> out;
  for (const auto& [name, value] : table) out.push_back(name);
  return out;
}

template <typename Enum>
std::string name_of(const std::map<std::string, Enum>& table, Enum value) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "";
}

/// Binds an enum-valued option by name; help shows the names and the current default.
template <typename Enum>
CLI::Option* add_enum_option(CLI::App* app, const std::string& flag, Enum& target,
                             const std::map<std::string, Enum>& table, const std::string& description) {
  return app
      ->add_option_function<std::string>(
          flag, [&target, &table](const std::string& v) { target = table.at(v); }, description)
      ->check(CLI::IsMember(names_of(table)))
      ->default_str(name_of(table, target))
      ->type_name("ENUM");
}

void add_strategy_options(CLI::App* sub, StrategyConfig& s) {
  add_enum_option(sub, "--strategy", s.strategy, kStrategies, "Acquisition strategy");
  sub->add_option("--top-n", s.top_n, "Candidates used by entropy sampling")->check(CLI::PositiveNumber);
  sub->add_option("--k-clusters", s.k_clusters, "Clusters for lc_cluster")->check(CLI::PositiveNumber);
  sub->add_option("--oversample", s.oversample_factor, "Least-confidence preselection factor for lc_cluster")
      ->check(CLI::PositiveNumber);
  add_enum_option(sub, "--margin-mode", s.margin_mode, kMarginModes,
                  "paper_literal: largest margin first; uncertainty: smallest first");
  sub->add_flag("--renormalize", s.renormalize_entropy, "Renormalize top-n probabilities before the entropy");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Knowledge-distillation and active-learning toolkit for span-extraction QA", "qakd"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON file mirroring the command-line flags");

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random draw");
  auto* lenient = app.add_flag("--lenient", g.lenient, "Skip or zero-score incomplete records instead of failing");
  app.add_flag("--strict", "Fail on incomplete records (default)")->excludes(lenient);
  app.add_option("-o,--output", g.output, "Write the result here (atomically) instead of stdout");
  app.add_option("--threads", g.threads, "Workers for per-record stages")->check(CLI::PositiveNumber);

  AlignOptionsCli align_o;
  auto* align_cmd = app.add_subcommand("align", "Align student and teacher tokenizations; optionally project teacher logits");
  align_cmd->add_option("--tokens", align_o.tokens, "tokens.jsonl with student and teacher records")->required();
  align_cmd->add_option("--teacher-logits", align_o.teacher_logits, "Teacher logits.jsonl to project onto student positions");
  align_cmd->add_option("--max-len", align_o.max_len, "Maximum teacher tokens (0 disables)");

  ResampleOptionsCli resample_o;
  auto* resample_cmd = app.add_subcommand("resample", "Resample logit vectors to a new length");
  resample_cmd->add_option("--logits", resample_o.logits, "logits.jsonl to resample")->required();
  resample_cmd->add_option("--target-len", resample_o.target_len, "Output length for every record");
  resample_cmd->add_option("--like", resample_o.like, "logits.jsonl whose per-id lengths are the targets");
  add_enum_option(resample_cmd, "--method", resample_o.method, kMethods, "Interpolation method");

  LossOptionsCli loss_o;
  auto* loss_cmd = app.add_subcommand("loss", "Distillation loss per record and batch means");
  loss_cmd->add_option("--student", loss_o.student, "Student logits.jsonl")->required();
  loss_cmd->add_option("--teacher", loss_o.teacher, "Teacher logits.jsonl")->required();
  loss_cmd->add_option("--tokens", loss_o.tokens, "tokens.jsonl pairing both tokenizations")->required();
  loss_cmd->add_option("--gold", loss_o.gold, "Gold spans jsonl {id, start, end}")->required();
  loss_cmd->add_option("--rho", loss_o.distill.rho, "Weight of the soft term")->check(CLI::Range(0.0, 1.0));
  loss_cmd->add_option("--temperature", loss_o.distill.temperature, "Softmax temperature")->check(CLI::PositiveNumber);
  loss_cmd->add_option("--mse-weight", loss_o.distill.mse_weight, "Weight of the interpolation MSE term")
      ->check(CLI::NonNegativeNumber);
  loss_cmd->add_flag("--interpolate", loss_o.distill.use_interpolation, "Add the MSE term on resampled student logits");
  add_enum_option(loss_cmd, "--method", loss_o.distill.method, kMethods, "Interpolation method");
  loss_cmd->add_flag("--soft-on-interpolated", loss_o.distill.soft_on_interpolated,
                     "Compute the soft term on resampled student vs full teacher");
  loss_cmd->add_option("--max-len", loss_o.max_len, "Maximum teacher tokens (0 disables)");

  EvaluateOptionsCli eval_o;
  auto* eval_cmd = app.add_subcommand("evaluate", "Exact match and F1 against a SQuAD v1.1 file");
  eval_cmd->add_option("--dataset", eval_o.dataset, "SQuAD v1.1 JSON")->required();
  eval_cmd->add_option("--predictions", eval_o.predictions, "{id: text} JSON, or ranked predictions .jsonl")->required();
  eval_cmd->add_flag("--per-example", eval_o.per_example, "Include per-question scores");

  SelectOptionsCli select_o;
  auto* select_cmd = app.add_subcommand("select", "Pick the next ids to label from a pool snapshot");
  select_cmd->add_option("--pool", select_o.pool, "Pool snapshot JSON")->required();
  select_cmd->add_option("--preds", select_o.preds, "predictions.jsonl for the unlabeled ids");
  select_cmd->add_option("--embeddings", select_o.embeddings, "embeddings.jsonl (lc_cluster)");
  select_cmd->add_option("--budget", select_o.budget, "Number of ids to select");
  select_cmd->add_option("--schedule", select_o.schedule, "Cumulative fractions; selects up to the next one")
      ->delimiter(',');
  add_strategy_options(select_cmd, select_o.strategy);

  SimulateOptionsCli sim_o;
  auto* sim_cmd = app.add_subcommand("simulate", "Replay the pool-based loop from per-cycle prediction files");
  sim_cmd->add_option("--dataset", sim_o.dataset, "SQuAD v1.1 JSON supplying the question ids");
  sim_cmd->add_option("--ids", sim_o.ids, "JSON array of question ids");
  sim_cmd->add_option("--preds-dir", sim_o.preds_dir, "Directory of cycle_<n>.jsonl prediction files");
  sim_cmd->add_option("--embeddings", sim_o.embeddings, "embeddings.jsonl (lc_cluster)");
  sim_cmd->add_option("--snapshots", sim_o.snapshots, "Directory for pool_<n>.json snapshots");
  sim_cmd->add_option("--schedule", sim_o.sim.schedule, "Cumulative fractions, or seed,step in remaining mode")
      ->delimiter(',');
  add_enum_option(sim_cmd, "--mode", sim_o.sim.mode, kBudgetModes,
                  "cumulative: schedule gives total labeled fractions; remaining: seed,step of what is left");
  sim_cmd->add_option("--max-cycles", sim_o.sim.max_cycles, "Upper bound on cycles")->check(CLI::PositiveNumber);
  add_strategy_options(sim_cmd, sim_o.sim.strategy);

  BootstrapOptionsCli boot_o;
  auto* boot_cmd = app.add_subcommand("bootstrap", "Paired bootstrap test of system A over system B");
  boot_cmd->add_option("--a", boot_o.a, "Scores of system A: {id: score} or an evaluate --per-example report")->required();
  boot_cmd->add_option("--b", boot_o.b, "Scores of system B, same format")->required();
  boot_cmd->add_option("--metric", boot_o.metric, "em or f1 (for per-example reports)")->check(CLI::IsMember({"em", "f1"}));
  boot_cmd->add_option("--fraction", boot_o.fraction, "Share of questions sampled for the test")
      ->check(CLI::Range(0.0, 1.0));
  boot_cmd->add_option("--B", boot_o.resamples, "Number of bootstrap resamples")->check(CLI::PositiveNumber);
  boot_cmd->add_option("--alpha", boot_o.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));

  ValidateOptionsCli val_o;
  auto* val_cmd = app.add_subcommand("validate", "Check a file against its schema");
  val_cmd->add_option("--kind", val_o.kind, "tokens, logits, predictions, embeddings, gold, pool or squad")
      ->required()
      ->check(CLI::IsMember({"tokens", "logits", "predictions", "embeddings", "gold", "pool", "squad"}));
  val_cmd->add_option("file", val_o.file, "File to check")->required();

  const std::string globals =
      "\nGlobal options (accepted before or after the subcommand):\n"
      "  --seed UINT [0]        Seed for every random draw\n"
      "  --lenient / --strict   Incomplete records are skipped or zero-scored / fail (default strict)\n"
      "  -o, --output TEXT      Write the result here (atomically) instead of stdout\n"
      "  --threads INT [1]      Workers for per-record stages\n"
      "  --config TEXT          JSON file mirroring the flags; a subcommand's flags go in an object named after it";
  for (auto* sub : app.get_subcommands({})) sub->footer(globals);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    if (dynamic_cast<const CLI::FileError*>(&e) != nullptr) return 2;
    return 1;
  }

  try {
    log::info("resolved_config", nlohmann::json::parse(app.config_to_str(true, false)));
    std::string doc;
    if (*align_cmd) doc = run_align(g, align_o);
    else if (*resample_cmd) doc = run_resample(g, resample_o);
    else if (*loss_cmd) doc = run_loss(g, loss_o);
    else if (*eval_cmd) doc = run_evaluate(g, eval_o);
    else if (*select_cmd) doc = run_select(g, select_o);
    else if (*sim_cmd) doc = run_simulate(g, sim_o);
    else if (*boot_cmd) doc = run_bootstrap(g, boot_o);
    else if (*val_cmd) doc = run_validate(g, val_o);
    doc += '\n';
    if (g.output.empty()) {
      std::cout << doc << std::flush;
    } else {
      write_atomic(g.output, doc);
    }
  } catch (const IoError& e) {
    log::emit("error", "io_error", {{"message", e.what()}});
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    log::emit("error", "io_error", {{"message", e.what()}});
    return 2;
  } catch (const std::exception& e) {
    log::emit("error", "failed", {{"message", e.what()}});
    return 1;
  }
  return 0;
}

}  // namespace qakd::cli
