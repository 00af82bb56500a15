#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "qakd/errors.hpp"
#include "qakd/formats.hpp"
#include "qakd/metrics.hpp"
#include "qakd/qa_data.hpp"
#include "qakd/rng.hpp"
#include "test_support.hpp"

using namespace qakd;

namespace {
using Golds = std::vector<std::string>;
}

TEST_CASE("exact match") {
  CHECK(exact_match("Denver Broncos", Golds{"Denver Broncos"}) == 1);
  CHECK(exact_match("the Denver Broncos", Golds{"Denver Broncos"}) == 1);
  CHECK(exact_match("Carolina Panthers", Golds{"Denver Broncos"}) == 0);
  CHECK(exact_match("denver broncos!", Golds{"Carolina", "Denver Broncos"}) == 1);
  CHECK_THROWS_AS(exact_match("x", Golds{}), ArgumentError);
}

TEST_CASE("f1") {
  CHECK(f1_score("Denver Broncos", Golds{"Denver Broncos"}) == 1.0);
  CHECK(std::abs(f1_score("cat sat", Golds{"the cat sat down"}) - 0.8) <= 1e-15);
  CHECK(f1_score("", Golds{"x"}) == 0.0);
  CHECK(f1_score("x", Golds{""}) == 0.0);
  CHECK(f1_score("the", Golds{"a"}) == 1.0);
  CHECK(std::abs(f1_score("cat cat", Golds{"cat"}) - 2.0 / 3.0) <= 1e-15);
  CHECK(std::abs(f1_score("cat sat", Golds{"dog", "cat", "sat on mat"}) - 2.0 / 3.0) <= 1e-15);
  CHECK(f1_score("x y", Golds{"z"}) == 0.0);
  CHECK_THROWS_AS(f1_score("x", Golds{}), ArgumentError);
}

TEST_CASE("metric properties on random strings") {
  const std::vector<std::string> words = {"the", "cat", "sat", "a", "mat", "Cat", "dog!", "on", "an", "sat."};
  Rng rng(31);
  auto phrase = [&] {
    std::string s;
    const auto n = uniform_index(rng, 6);
    for (std::uint64_t i = 0; i < n; ++i) s += (i ? " " : "") + words[uniform_index(rng, words.size())];
    return s;
  };
  for (int t = 0; t < 2000; ++t) {
    const std::string p = phrase(), g = phrase();
    const double f = f1_score(p, g);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f == f1_score(g, p));
    if (exact_match(p, Golds{g}) == 1) CHECK(f == 1.0);
  }
}

TEST_CASE("evaluate matches the reference evaluator on the 200-question fixture") {
  test::CapturedLog log;
  const QADataset ds = load_squad(test::fixture("squad_eval200.json"));
  const PredictionMap preds = read_prediction_map(test::fixture("preds_eval200.json"));
  const auto expected = nlohmann::json::parse(test::read_text(test::fixture("expected_eval200.json")));

  const EvalReport r = evaluate(ds, preds, MissingPolicy::zero);
  CHECK(r.count == 200);
  CHECK(std::abs(r.exact_match - expected["exact_match"].get<double>()) <= 1e-6);
  CHECK(std::abs(r.f1 - expected["f1"].get<double>()) <= 1e-6);
  REQUIRE(r.per_example.size() == 200);
  double em_sum = 0, f1_sum = 0;
  for (const auto& ex : r.per_example) {
    const auto& e = expected["per_example"][ex.id];
    CHECK_MESSAGE(ex.exact_match == e["em"].get<int>(), ex.id);
    CHECK_MESSAGE(std::abs(ex.f1 - e["f1"].get<double>()) <= 1e-12, ex.id);
    em_sum += ex.exact_match;
    f1_sum += ex.f1;
  }
  CHECK(std::abs(r.exact_match - 100.0 * em_sum / 200.0) <= 1e-12);
  CHECK(std::abs(r.f1 - 100.0 * f1_sum / 200.0) <= 1e-12);
  CHECK(r.unknown_ids == std::vector<std::string>{"unknown-1", "unknown-2"});
  CHECK(log.count("unknown_prediction_id") == 2);
  CHECK(log.count("missing_prediction") == 200 - (preds.size() - 2));

  CHECK_THROWS_AS(evaluate(ds, preds, MissingPolicy::error), ArgumentError);
}

TEST_CASE("evaluate edge cases") {
  test::CapturedLog log;
  const QADataset ds = load_squad(test::fixture("squad_mini.json"));
  PredictionMap perfect;
  for (const auto& a : ds.articles)
    for (const auto& p : a.paragraphs)
      for (const auto& q : p.qas) perfect[q.id] = q.answers.front().text;
  const EvalReport all = evaluate(ds, perfect, MissingPolicy::error);
  CHECK(all.exact_match == 100.0);
  CHECK(all.f1 == 100.0);

  const EvalReport none = evaluate(ds, {}, MissingPolicy::zero);
  CHECK(none.exact_match == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.count == 5);

  const EvalReport empty = evaluate(load_squad(test::fixture("squad_empty.json")), {}, MissingPolicy::error);
  CHECK(empty.count == 0);
  CHECK(empty.exact_match == 0.0);
}
