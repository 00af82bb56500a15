// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzz_corpus.hpp"
#include "mp_oracle.hpp"
#include "pool_fixtures.hpp"
#include "qakd/bootstrap.hpp"
#include "qakd/distill_loss.hpp"
#include "qakd/formats.hpp"
#include "qakd/kmeans.hpp"
#include "qakd/metrics.hpp"
#include "qakd/qa_data.hpp"
#include "qakd/resample.hpp"
#include "qakd/simulation.hpp"
#include "qakd/tokenizer_align.hpp"
#include "reference_oracles.hpp"
#include "spline_oracle.hpp"
#include "test_support.hpp"

using namespace qakd;

namespace {

/// Collects failures of one criterion; `ok()` is true when none were recorded.
class Checks {
 public:
  void expect(bool cond, const std::string& what) {
    ++total_;
    if (!cond && failures_.size() < 5) failures_.push_back(what);
    failed_ += !cond;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << total_ - failed_ << "/" << total_ << " checks";
    for (const auto& f : failures_) s << "; " << f;
    return s.str();
  }

 private:
  std::size_t total_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Criterion {
  std::string name;
  double time_limit;  // seconds, 0 = none
  std::function<void(Checks&)> body;
};

Vector<double> random_vector(Rng& rng, Index n, double scale) {
  Vector<double> v(n);
  for (Index i = 0; i < n; ++i) v(i) = scale * (2.0 * uniform_unit(rng) - 1.0);
  return v;
}

TokenSequence seq(std::initializer_list<const char*> texts, TokenSource source) {
  TokenSequence s;
  s.source = source;
  for (const char* t : texts) s.tokens.push_back(Token::from_wordpiece(t));
  return s;
}

void alignment(Checks& c) {
  using V = std::vector<std::size_t>;
  c.expect(align(seq({"nuclear", "astrophysics", "."}, TokenSource::student),
                 seq({"nuclear", "astro", "##physics", "."}, TokenSource::teacher))
                   .mapping == V{0, 1, 3},
           "Nuclear Astrophysics");
  c.expect(align(seq({"can", "not", "understand"}, TokenSource::student),
                 seq({"cannot", "understand"}, TokenSource::teacher))
                   .mapping == V{0, 0, 1},
           "cannot understand");
  c.expect(align(seq({"Accommodation"}, TokenSource::student), seq({"acc", "##ommo", "##dation"}, TokenSource::teacher))
                   .mapping == V{0},
           "Accommodation");
  Rng rng(1001);
  for (int k = 0; k < 200; ++k) {
    const auto ctx = test::make_fuzz_context(rng);
    std::string why;
    try {
      c.expect(test::alignment_is_sound(ctx, align(ctx.student, ctx.teacher), &why), "fuzz context " + std::to_string(k) + ": " + why);
    } catch (const std::exception& e) {
      c.expect(false, "fuzz context " + std::to_string(k) + " threw: " + e.what());
    }
  }
}

void resampling(Checks& c) {
  Rng rng(2002);
  for (int k = 0; k < 1000; ++k) {
    const Index n = 1 + static_cast<Index>(uniform_index(rng, 64));
    const auto v = random_vector(rng, n, 10.0);
    for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
      const auto same = resample(v, n, m);
      c.expect(same.size() == n && std::memcmp(same.data(), v.data(), sizeof(double) * static_cast<std::size_t>(n)) == 0,
               "identity");
    }
    // Linear data a*i + b at n >= 2 nodes.
    const Index nodes = 2 + static_cast<Index>(uniform_index(rng, 63));
    const Index target = 1 + static_cast<Index>(uniform_index(rng, 128));
    const double a = 2.0 * uniform_unit(rng) - 1.0, b = 10.0 * uniform_unit(rng) - 5.0;
    Vector<double> lin(nodes);
    for (Index i = 0; i < nodes; ++i) lin(i) = a * static_cast<double>(i) + b;
    for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
      const auto out = resample(lin, target, m);
      double err = 0;
      for (Index j = 0; j < target; ++j) {
        const double t = target == 1 ? 0.0 : static_cast<double>(j) * static_cast<double>(nodes - 1) / static_cast<double>(target - 1);
        err = std::max(err, std::abs(out(j) - (a * t + b)));
      }
      c.expect(err <= 1e-9, "linear reproduction error " + std::to_string(err));
    }
  }
  for (int k = 0; k < 100; ++k) {
    const Index n = 3 + static_cast<Index>(uniform_index(rng, 62));
    const Index target = 1 + static_cast<Index>(uniform_index(rng, 128));
    const auto v = random_vector(rng, n, 10.0);
    const auto out = resample(v, target, InterpolationMethod::cubic);
    const auto ref = test::gsl_resample({v.data(), v.data() + n}, static_cast<std::size_t>(target), true);
    double err = 0;
    for (Index j = 0; j < target; ++j) err = std::max(err, std::abs(out(j) - ref[static_cast<std::size_t>(j)]));
    c.expect(err <= 1e-9, "spline oracle error " + std::to_string(err));
  }
}

void loss_stack(Checks& c) {
  Rng rng(3003);
  for (int k = 0; k < 10000; ++k) {
    const Index n = 1 + static_cast<Index>(uniform_index(rng, 64));
    const auto v = random_vector(rng, n, 30.0);
    const double temp = 0.05 + 20.0 * uniform_unit(rng);
    const double shift = 500.0 * (2.0 * uniform_unit(rng) - 1.0);
    const auto p = tempered_softmax(v, temp);
    const auto q = tempered_softmax(Vector<double>(v.array() + shift), temp);
    c.expect(std::abs(p.sum() - 1.0) <= 1e-12 && (p.array() >= 0.0).all(), "normalization");
    c.expect((p - q).cwiseAbs().maxCoeff() <= 1e-12, "shift invariance");
  }
  for (int k = 0; k < 100; ++k) {
    const Index n = 2 + static_cast<Index>(uniform_index(rng, 40));
    const Index m = n + static_cast<Index>(uniform_index(rng, 20));
    const SpanLogits student{random_vector(rng, n, 6.0), random_vector(rng, n, 6.0)};
    const SpanLogits aligned{random_vector(rng, n, 6.0), random_vector(rng, n, 6.0)};
    const SpanLogits full{random_vector(rng, m, 6.0), random_vector(rng, m, 6.0)};
    const Index a = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const GoldSpan gold{a, a + static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n - a)))};
    DistillConfig cfg;
    cfg.use_interpolation = true;
    cfg.method = k % 2 ? InterpolationMethod::linear : InterpolationMethod::cubic;

    // Affinity in rho.
    DistillConfig c0 = cfg, c1 = cfg, ch = cfg;
    c0.rho = 0.0;
    c1.rho = 1.0;
    ch.rho = 0.5;
    const double l0 = combined_loss(student, aligned, full, gold, c0).total;
    const double l1 = combined_loss(student, aligned, full, gold, c1).total;
    const double lh = combined_loss(student, aligned, full, gold, ch).total;
    c.expect(std::abs(lh - 0.5 * (l0 + l1)) <= 1e-9, "midpoint identity");

    // Zero iff equal.
    c.expect(soft_loss(student, student, cfg.temperature) == 0.0, "soft loss of identical logits");
    c.expect(soft_loss(student, aligned, cfg.temperature) > 0.0, "soft loss of different logits");

    // Term by term against 50-digit arithmetic and GSL resampling.
    const auto br = combined_loss(student, aligned, full, gold, cfg);
    const bool cubic = cfg.method == InterpolationMethod::cubic;
    const test::Real hard = test::mp_hard(student.start, student.end, gold.start, gold.end);
    const test::Real soft = test::mp_soft(student.start, student.end, aligned.start, aligned.end, test::Real(10));
    const auto rs = test::gsl_resample({student.start.data(), student.start.data() + n}, static_cast<std::size_t>(m), cubic);
    const auto re = test::gsl_resample({student.end.data(), student.end.data() + n}, static_cast<std::size_t>(m), cubic);
    const test::Real mse_term = test::mp_mse(rs, full.start) + test::mp_mse(re, full.end);
    const test::Real total = test::Real(0.3) * hard + test::Real(0.7) * soft + mse_term;
    c.expect(std::abs(br.hard - hard.convert_to<double>()) <= 1e-9, "hard term");
    c.expect(std::abs(br.soft - soft.convert_to<double>()) <= 1e-9, "soft term");
    c.expect(std::abs(br.mse - mse_term.convert_to<double>()) <= 1e-9, "mse term");
    c.expect(std::abs(br.total - total.convert_to<double>()) <= 1e-9, "total");
  }
}

void metrics(Checks& c) {
  test::CapturedLog quiet;
  const QADataset ds = load_squad(test::fixture("squad_eval200.json"));
  const auto preds = read_prediction_map(test::fixture("preds_eval200.json"));
  const auto expected = nlohmann::json::parse(test::read_text(test::fixture("expected_eval200.json")));
  const auto r = evaluate(ds, preds, MissingPolicy::zero);
  c.expect(r.count == 200, "count");
  c.expect(std::abs(r.exact_match - expected["exact_match"].get<double>()) <= 1e-6, "exact match");
  c.expect(std::abs(r.f1 - expected["f1"].get<double>()) <= 1e-6, "f1");
}

void active_learning(Checks& c) {
  test::CapturedLog quiet;
  Rng rng(5005);

  // Ten selection cycles on a 1000-question pool, every strategy.
  auto big = test::make_pool_fixture(rng, 1000, 0);
  const std::set<std::string> all(big.ids.begin(), big.ids.end());
  for (auto s : {Strategy::random, Strategy::lc, Strategy::margin, Strategy::entropy, Strategy::lc_cluster}) {
    SimulationConfig cfg;
    cfg.strategy.strategy = s;
    cfg.strategy.seed = 77;
    const auto ids = big.ids;
    const auto history = run_simulation(
        ids, cfg,
        [&ids](int cycle) {
          Rng r(derive_seed(123, static_cast<std::uint64_t>(cycle)));
          PredictionTable t;
          for (const auto& id : ids) t[id] = test::random_record(r, id);
          return t;
        },
        &big.embeddings);
    c.expect(history.size() == 11, "eleven snapshots (seed + ten cycles)");
    std::size_t labeled = 0;
    std::set<std::string> picked;
    for (const auto& rec : history) {
      c.expect(rec.pool.partitions(all), "partition");
      c.expect(rec.pool.labeled().size() > labeled, "labeled set grows");
      labeled = rec.pool.labeled().size();
      for (const auto& id : rec.selected) c.expect(picked.insert(id).second, "distinct picks");
    }
    c.expect(history.back().pool.unlabeled().empty(), "pool exhausted");
  }

  // Exhaustive-sort oracles on 50-question fixtures.
  for (int k = 0; k < 50; ++k) {
    auto f = test::make_pool_fixture(rng, 50, uniform_index(rng, 10));
    const std::size_t budget = 1 + uniform_index(rng, 25);
    StrategyConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(k);
    cfg.strategy = Strategy::lc;
    c.expect(select(f.pool, f.preds, cfg, budget) == test::oracle_select(f.pool, f.preds, Strategy::lc, budget), "lc");
    cfg.strategy = Strategy::margin;
    c.expect(select(f.pool, f.preds, cfg, budget) == test::oracle_select(f.pool, f.preds, Strategy::margin, budget), "margin");
    cfg.strategy = Strategy::entropy;
    c.expect(select(f.pool, f.preds, cfg, budget) == test::oracle_select(f.pool, f.preds, Strategy::entropy, budget), "entropy");
    cfg.strategy = Strategy::lc_cluster;
    c.expect(select(f.pool, f.preds, cfg, budget, &f.embeddings) ==
                 test::oracle_lc_cluster(f.pool, f.preds, f.embeddings, 10, 3, cfg.seed, budget),
             "lc_cluster");
  }

  // Largest remainder on 500 size vectors.
  for (int k = 0; k < 500; ++k) {
    std::vector<std::size_t> sizes(1 + uniform_index(rng, 15));
    std::size_t total = 0;
    for (auto& s : sizes) total += (s = uniform_index(rng, 60));
    const std::size_t budget = uniform_index(rng, total + 1);
    const auto q = largest_remainder(sizes, budget);
    std::size_t sum = 0;
    bool capped = true;
    for (std::size_t i = 0; i < q.size(); ++i) {
      sum += q[i];
      capped &= q[i] <= sizes[i];
    }
    c.expect(sum == budget && capped, "quota sum / cap");
  }

  // k-means objective never increases (relative slack for rounding only).
  for (int k = 0; k < 200; ++k) {
    const Index n = 5 + static_cast<Index>(uniform_index(rng, 150));
    const Index kk = 1 + static_cast<Index>(uniform_index(rng, std::min<std::uint64_t>(10, static_cast<std::uint64_t>(n))));
    Matrix<double> pts(n, 6);
    for (Index i = 0; i < n; ++i)
      for (Index d = 0; d < 6; ++d) pts(i, d) = static_cast<double>(uniform_index(rng, 4)) * 3.0 + uniform_unit(rng);
    const auto r = kmeans(pts, kk, static_cast<std::uint64_t>(k));
    for (std::size_t i = 1; i < r.objective_history.size(); ++i)
      c.expect(r.objective_history[i] <= r.objective_history[i - 1] * (1.0 + 1e-12), "k-means objective");
  }
}

void bootstrap(Checks& c) {
  c.expect(paired_bootstrap(Vector<double>::Ones(50), 100000, 1).p_value == 0.0, "all positive gives p = 0");
  c.expect(paired_bootstrap(Vector<double>::Constant(50, -1.0), 100000, 1).p_value == 1.0, "all negative gives p = 1");

  std::vector<double> mixed;
  for (int i = 0; i < 20; ++i) mixed.push_back(1.0);
  for (int i = 0; i < 10; ++i) mixed.push_back(-1.0);
  for (int i = 0; i < 30; ++i) mixed.push_back(0.0);
  const Vector<double> delta = Eigen::Map<const Vector<double>>(mixed.data(), 60);
  const auto start = std::chrono::steady_clock::now();
  const auto r = paired_bootstrap(delta, 100000, 20240611);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(r.p_value == test::oracle_bootstrap_p(mixed, 100000, 20240611), "oracle match at B = 100000");
  c.expect(secs < 5.0, "B = 100000 run took " + std::to_string(secs) + " s");

  Rng rng(6006);
  for (int k = 0; k < 1000; ++k) {
    const Index n = 1 + static_cast<Index>(uniform_index(rng, 100));
    const auto d = random_vector(rng, n, 1.0);
    const double p = paired_bootstrap(d, 200, static_cast<std::uint64_t>(k)).p_value;
    c.expect(p >= 0.0 && p <= 1.0, "p in [0, 1]");
  }
}

void determinism(Checks& c) {
  auto fx = [](const std::string& name) { return "\"" + test::fixture(name).string() + "\""; };
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"align", "align --tokens " + fx("cli/tokens.jsonl") + " --teacher-logits " + fx("cli/teacher_logits.jsonl")},
      {"resample", "resample --method cubic --logits " + fx("cli/student_logits.jsonl") + " --like " + fx("cli/teacher_logits.jsonl")},
      {"loss", "loss --interpolate --student " + fx("cli/student_logits.jsonl") + " --teacher " + fx("cli/teacher_logits.jsonl") +
                   " --tokens " + fx("cli/tokens.jsonl") + " --gold " + fx("cli/gold.jsonl")},
      {"evaluate", "--lenient evaluate --per-example --dataset " + fx("squad_eval200.json") + " --predictions " + fx("preds_eval200.json")},
      {"select", "--seed 7 select --strategy lc_cluster --budget 6 --pool " + fx("cli/pool.json") + " --preds " +
                     fx("cli/preds.jsonl") + " --embeddings " + fx("cli/embeddings.jsonl")},
      {"simulate", "--seed 3 simulate --strategy entropy --ids " + fx("cli/ids.json") + " --preds-dir " + fx("cli/preds_cycles")},
      {"bootstrap", "--seed 5 bootstrap --a " + fx("cli/scores_a.json") + " --b " + fx("cli/scores_b.json") + " --fraction 0.5"},
      {"validate", "validate --kind predictions " + fx("cli/preds.jsonl")},
  };
  for (const auto& [name, args] : runs) {
    const auto a = test::run_cli(args);
    const auto b = test::run_cli(args);
    c.expect(a.exit_code == 0 && !a.out.empty(), name + " ran");
    c.expect(a.out == b.out, name + " byte-identical");
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"alignment: three worked examples + soundness on 200 fuzz contexts (< 5 s)", 5.0, alignment},
      {"resampling: identity, linear reproduction on 1000 vectors, 100 spline-oracle cases at 1e-9 (< 10 s)", 10.0, resampling},
      {"loss: softmax on 10000 vectors at 1e-12, rho midpoint, zero iff equal, 100 oracle fixtures at 1e-9 (< 30 s)", 30.0, loss_stack},
      {"metrics: 200-question fixture equals the official evaluator to 1e-6", 0.0, metrics},
      {"active learning: 10-cycle pool invariants, 50-question oracles, 500 quota vectors, monotone k-means", 0.0, active_learning},
      {"bootstrap: exact endpoints, B=100000 oracle match (< 5 s), p in [0,1] on 1000 vectors", 0.0, bootstrap},
      {"determinism: every CLI subcommand byte-identical across two runs", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& crit : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (crit.time_limit > 0) checks.expect(secs < crit.time_limit, "runtime " + std::to_string(secs) + " s");
    const bool ok = checks.ok();
    failures += !ok;
    std::printf("%s  %s  [%s, %.2f s]\n", ok ? "PASS" : "FAIL", crit.name.c_str(), checks.summary().c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
