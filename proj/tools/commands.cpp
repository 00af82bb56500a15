#include "commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qakd/bootstrap.hpp"
#include "qakd/errors.hpp"
#include "qakd/formats.hpp"
#include "qakd/log.hpp"
#include "qakd/metrics.hpp"
#include "qakd/qa_data.hpp"
#include "qakd/resample.hpp"
#include "qakd/rng.hpp"
#include "qakd/tokenizer_align.hpp"

namespace qakd::cli {
namespace {

using nlohmann::json;

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written by
// index, so output order never depends on scheduling; the lowest-index
// failure is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string jsonl(const std::vector<json>& rows) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += '\n';
    out += rows[i].dump();
  }
  return out;
}

json vector_json(const LogitVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

const char* method_name(InterpolationMethod m) { return m == InterpolationMethod::linear ? "linear" : "cubic"; }

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::lc: return "lc";
    case Strategy::margin: return "margin";
    case Strategy::entropy: return "entropy";
    case Strategy::lc_cluster: return "lc_cluster";
  }
  return "?";
}

template <typename T>
const T* find_or_report(const std::map<std::string, T>& table, const std::string& id, const char* what, bool lenient) {
  auto it = table.find(id);
  if (it != table.end()) return &it->second;
  if (!lenient) throw ValidationError(std::string("no ") + what + " for record " + id);
  log::warn("record_skipped", {{"id", id}, {"missing", what}});
  return nullptr;
}

std::vector<std::string> read_id_list(const std::string& path) {
  const json doc = parse_json(read_file(path), path);
  if (!doc.is_array()) throw ValidationError(path + ": expected a JSON array of ids");
  std::vector<std::string> ids;
  for (const json& v : doc) {
    if (!v.is_string()) throw ValidationError(path + ": ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

/// id -> score from either a {id: number} map or an evaluate report with per_example.
std::map<std::string, double> read_scores(const std::string& path, const std::string& metric) {
  const json doc = parse_json(read_file(path), path);
  if (!doc.is_object()) throw ValidationError(path + ": scores must be a JSON object");
  std::map<std::string, double> out;
  if (auto it = doc.find("per_example"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError(path + ": per_example must be an object");
    for (const auto& [id, entry] : it->items()) {
      if (!entry.is_object() || !entry.contains(metric) || !entry.at(metric).is_number())
        throw ValidationError(path + ": per_example entry " + id + " lacks numeric \"" + metric + "\"");
      out.emplace(id, entry.at(metric).get<double>());
    }
    return out;
  }
  for (const auto& [id, v] : doc.items()) {
    if (!v.is_number()) throw ValidationError(path + ": score for " + id + " is not a number");
    out.emplace(id, v.get<double>());
  }
  return out;
}

}  // namespace

std::string run_align(const GlobalOptions& g, const AlignOptionsCli& o) {
  const std::vector<TokenPair> pairs = read_tokens(o.tokens);
  std::map<std::string, SpanLogits> teacher;
  if (!o.teacher_logits.empty())
    for (auto& rec : read_logits(o.teacher_logits)) teacher.emplace(rec.id, std::move(rec.logits));

  std::vector<json> rows(pairs.size());
  std::vector<char> keep(pairs.size(), 1);
  parallel_for(pairs.size(), g.threads, [&](std::size_t i) {
    const TokenPair& pair = pairs[i];
    json row = {{"id", pair.id}};
    try {
      const AlignmentMap map = align(pair.student, pair.teacher, AlignOptions{o.max_len});
      row["mapping"] = map.mapping;
      row["leader"] = map.leader;
      row["teacher_len"] = map.teacher_length;
      if (!o.teacher_logits.empty()) {
        const SpanLogits* t = find_or_report(teacher, pair.id, "teacher logits", g.lenient);
        if (t == nullptr) {
          keep[i] = 0;
          return;
        }
        if (t->size() != static_cast<Index>(map.teacher_length))
          throw ValidationError("teacher logits for " + pair.id + " have length " + std::to_string(t->size()) +
                                " but the teacher tokenization has " + std::to_string(map.teacher_length));
        const SpanLogits projected = project_teacher_logits(map, *t);
        row["start"] = vector_json(projected.start);
        row["end"] = vector_json(projected.end);
      }
    } catch (const AlignmentError& e) {
      if (!g.lenient) throw AlignmentError("record " + pair.id + ": " + e.what(), e.student_position(), e.teacher_position());
      log::warn("alignment_failed", {{"id", pair.id}, {"student_pos", e.student_position()},
                                     {"teacher_pos", e.teacher_position()}, {"message", e.what()}});
      keep[i] = 0;
      return;
    }
    rows[i] = std::move(row);
  });

  std::vector<json> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (keep[i]) out.push_back(std::move(rows[i]));
  return jsonl(out);
}

std::string run_resample(const GlobalOptions& g, const ResampleOptionsCli& o) {
  if (o.like.empty() == (o.target_len <= 0))
    throw ArgumentError("resample needs exactly one of --target-len or --like");
  std::map<std::string, Index> lengths;
  if (!o.like.empty())
    for (const auto& rec : read_logits(o.like)) lengths.emplace(rec.id, rec.logits.size());

  std::vector<json> out;
  for (const auto& rec : read_logits(o.logits)) {
    Index target = o.target_len;
    if (!o.like.empty()) {
      const Index* len = find_or_report(lengths, rec.id, "target length", g.lenient);
      if (len == nullptr) continue;
      target = *len;
    }
    LogitRecord resampled{rec.id, {resample(rec.logits.start, target, o.method), resample(rec.logits.end, target, o.method)}};
    out.push_back(to_json(resampled));
  }
  return jsonl(out);
}

std::string run_loss(const GlobalOptions& g, const LossOptionsCli& o) {
  o.distill.validate();
  const std::vector<LogitRecord> student = read_logits(o.student);
  std::map<std::string, SpanLogits> teacher;
  for (auto& rec : read_logits(o.teacher)) teacher.emplace(rec.id, std::move(rec.logits));
  std::map<std::string, TokenPair> tokens;
  for (auto& pair : read_tokens(o.tokens)) tokens.emplace(pair.id, std::move(pair));
  const std::map<std::string, GoldSpan> gold = read_gold_spans(o.gold);

  std::vector<std::optional<LossBreakdown>> results(student.size());
  parallel_for(student.size(), g.threads, [&](std::size_t i) {
    const LogitRecord& rec = student[i];
    const SpanLogits* t = find_or_report(teacher, rec.id, "teacher logits", g.lenient);
    const TokenPair* tok = find_or_report(tokens, rec.id, "tokens", g.lenient);
    const GoldSpan* span = find_or_report(gold, rec.id, "gold span", g.lenient);
    if (t == nullptr || tok == nullptr || span == nullptr) return;
    if (static_cast<Index>(tok->student.size()) != rec.logits.size() ||
        static_cast<Index>(tok->teacher.size()) != t->size())
      throw ValidationError("record " + rec.id + ": logit lengths do not match the token sequences");
    const AlignmentMap map = align(tok->student, tok->teacher, AlignOptions{o.max_len});
    const SpanLogits aligned = project_teacher_logits(map, *t);
    results[i] = combined_loss(rec.logits, aligned, *t, *span, o.distill);
  });

  json records = json::array();
  LossBreakdown sum;
  std::size_t count = 0;
  for (std::size_t i = 0; i < student.size(); ++i) {
    if (!results[i]) continue;
    const LossBreakdown& b = *results[i];
    records.push_back({{"id", student[i].id}, {"hard", b.hard}, {"soft", b.soft}, {"mse", b.mse}, {"total", b.total}});
    sum.hard += b.hard;
    sum.soft += b.soft;
    sum.mse += b.mse;
    sum.total += b.total;
    ++count;
  }
  const double denom = count ? static_cast<double>(count) : 1.0;
  json out = {
      {"records", std::move(records)},
      {"count", count},
      {"mean", {{"hard", sum.hard / denom}, {"soft", sum.soft / denom}, {"mse", sum.mse / denom}, {"total", sum.total / denom}}},
      {"config",
       {{"rho", o.distill.rho},
        {"temperature", o.distill.temperature},
        {"mse_weight", o.distill.mse_weight},
        {"interpolate", o.distill.use_interpolation},
        {"method", method_name(o.distill.method)},
        {"soft_on_interpolated", o.distill.soft_on_interpolated}}}};
  return out.dump();
}

std::string run_evaluate(const GlobalOptions& g, const EvaluateOptionsCli& o) {
  const QADataset dataset = load_squad(o.dataset);
  const PredictionMap predictions = read_prediction_map(o.predictions);
  const EvalReport report = evaluate(dataset, predictions, g.lenient ? MissingPolicy::zero : MissingPolicy::error);
  std::ostringstream human;
  human.setf(std::ios::fixed);
  human.precision(2);
  human << "EM " << report.exact_match << " F1 " << report.f1;
  log::info("evaluate_summary", {{"count", report.count}, {"summary", human.str()}});
  return to_json(report, o.per_example).dump();
}

namespace {

std::size_t schedule_budget(const std::vector<double>& schedule, const Pool& pool) {
  const std::size_t total = pool.size();
  std::size_t prev = 0;
  for (double f : schedule) {
    if (!(f > 0.0) || f > 1.0) throw ArgumentError("schedule fractions must lie in (0, 1]");
    const std::size_t target = fraction_count(f, total);
    if (target < prev) throw ArgumentError("schedule must be increasing");
    prev = target;
    if (target > pool.labeled().size()) return target - pool.labeled().size();
  }
  return 0;
}

}  // namespace

std::string run_select(const GlobalOptions& g, const SelectOptionsCli& o) {
  if (o.budget.has_value() == !o.schedule.empty()) throw ArgumentError("select needs exactly one of --budget or --schedule");
  Pool pool = pool_from_json(parse_json(read_file(o.pool), o.pool));
  StrategyConfig cfg = o.strategy;
  cfg.seed = g.seed;
  cfg.lenient = g.lenient;
  cfg.validate();

  PredictionTable preds;
  if (cfg.strategy != Strategy::random) {
    if (o.preds.empty()) throw ArgumentError(std::string("--preds is required for strategy ") + strategy_name(cfg.strategy));
    preds = read_prediction_records(o.preds);
  }
  std::optional<EmbeddingTable> embeddings;
  if (!o.embeddings.empty()) embeddings = read_embeddings(o.embeddings);
  if (cfg.strategy == Strategy::lc_cluster && !embeddings) throw ArgumentError("--embeddings is required for lc_cluster");

  const std::size_t budget = o.budget ? *o.budget : schedule_budget(o.schedule, pool);
  const std::vector<std::string> selected = select(pool, preds, cfg, budget, embeddings ? &*embeddings : nullptr);
  pool.label(selected);
  pool.set_cycle(pool.cycle() + 1);

  json out = to_json(pool);
  out["selected"] = selected;
  out["strategy"] = strategy_name(cfg.strategy);
  out["budget"] = budget;
  return out.dump();
}

std::string run_simulate(const GlobalOptions& g, const SimulateOptionsCli& o) {
  if (o.dataset.empty() == o.ids.empty()) throw ArgumentError("simulate needs exactly one of --dataset or --ids");
  const std::vector<std::string> ids = o.dataset.empty() ? read_id_list(o.ids) : load_squad(o.dataset).question_ids();
  SimulationConfig cfg = o.sim;
  cfg.strategy.seed = g.seed;
  cfg.strategy.lenient = g.lenient;

  std::optional<EmbeddingTable> embeddings;
  if (!o.embeddings.empty()) embeddings = read_embeddings(o.embeddings);
  if (cfg.strategy.strategy == Strategy::lc_cluster && !embeddings)
    throw ArgumentError("--embeddings is required for lc_cluster");

  const PredictionSource source = [&](int cycle) {
    if (o.preds_dir.empty()) throw ArgumentError("--preds-dir is required for strategy " + std::string(strategy_name(cfg.strategy.strategy)));
    const std::filesystem::path file = std::filesystem::path(o.preds_dir) / ("cycle_" + std::to_string(cycle) + ".jsonl");
    if (!std::filesystem::exists(file)) throw IoError("missing predictions for cycle " + std::to_string(cycle) + ": " + file.string());
    return read_prediction_records(file);
  };

  const std::vector<CycleRecord> history = run_simulation(ids, cfg, source, embeddings ? &*embeddings : nullptr);

  json cycles = json::array();
  for (const auto& rec : history) {
    cycles.push_back({{"cycle", rec.cycle},
                      {"labeled_percent", rec.labeled_percent},
                      {"labeled_count", rec.pool.labeled().size()},
                      {"unlabeled_count", rec.pool.unlabeled().size()},
                      {"selected", rec.selected}});
    if (!o.snapshots.empty()) {
      std::filesystem::create_directories(o.snapshots);
      write_atomic(std::filesystem::path(o.snapshots) / ("pool_" + std::to_string(rec.cycle) + ".json"),
                   to_json(rec.pool).dump() + "\n");
    }
  }
  return json{{"strategy", strategy_name(cfg.strategy.strategy)}, {"total", ids.size()}, {"history", std::move(cycles)}}.dump();
}

std::string run_bootstrap(const GlobalOptions& g, const BootstrapOptionsCli& o) {
  if (o.metric != "em" && o.metric != "f1") throw ArgumentError("--metric must be em or f1");
  const auto a = read_scores(o.a, o.metric);
  const auto b = read_scores(o.b, o.metric);

  std::vector<std::string> common;
  for (const auto& [id, score] : a)
    if (b.contains(id)) common.push_back(id);
  if (common.size() != a.size() || common.size() != b.size()) {
    if (!g.lenient) throw ValidationError("score files cover different question ids");
    log::warn("score_ids_differ", {{"a", a.size()}, {"b", b.size()}, {"common", common.size()}});
  }
  if (common.empty()) throw ValidationError("score files share no question ids");

  const std::vector<std::string> subset = sample_eval_subset(common, o.fraction, derive_seed(g.seed, 0));
  Vector<double> delta(static_cast<Index>(subset.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) delta(static_cast<Index>(i)) = a.at(subset[i]) - b.at(subset[i]);

  const BootstrapResult r = paired_bootstrap(delta, o.resamples, derive_seed(g.seed, 1), o.alpha);
  return json{{"p_value", r.p_value},
              {"reject", r.reject},
              {"B", r.resamples},
              {"alpha", r.alpha},
              {"seed", g.seed},
              {"metric", o.metric},
              {"fraction", o.fraction},
              {"k", r.sample_size},
              {"mean_delta", r.observed_mean}}
      .dump();
}

std::string run_validate(const GlobalOptions&, const ValidateOptionsCli& o) {
  std::size_t records = 0;
  if (o.kind == "tokens") {
    records = read_tokens(o.file).size();
  } else if (o.kind == "logits") {
    records = read_logits(o.file).size();
  } else if (o.kind == "predictions") {
    records = read_prediction_records(o.file).size();
  } else if (o.kind == "embeddings") {
    records = read_embeddings(o.file).size();
  } else if (o.kind == "gold") {
    records = read_gold_spans(o.file).size();
  } else if (o.kind == "pool") {
    records = pool_from_json(parse_json(read_file(o.file), o.file)).size();
  } else if (o.kind == "squad") {
    records = load_squad(o.file).num_questions();
  } else {
    throw ArgumentError("unknown file kind " + o.kind);
  }
  return json{{"valid", true}, {"kind", o.kind}, {"records", records}}.dump();
}

}  // namespace qakd::cli
