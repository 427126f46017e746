#include <cmath>
#include <set>

#include "doctest.h"
#include "optdes/exchange.hpp"
#include "optdes/rng.hpp"

using namespace optdes;

TEST_CASE("random_start is deterministic per seed and seed-sensitive") {
  const ModelSpec spec(2, 6);
  const Design a = random_start(spec, 42);
  const Design b = random_start(spec, 42);
  CHECK((a.points.array() == b.points.array()).all());

  const Design c = random_start(spec, 43);
  CHECK_FALSE((a.points.array() == c.points.array()).all());
}

TEST_CASE("random_start draws open-interval uniforms") {
  const ModelSpec spec(4, 25000);  // 10^5 entries
  const Design d = random_start(spec, 7);
  double sum = 0.0;
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.k; ++j) {
      const double v = d.points(i, j);
      CHECK(v > -1.0);
      CHECK(v < 1.0);
      sum += v;
    }
  CHECK(std::abs(sum / (spec.n * spec.k)) < 0.01);
}

TEST_CASE("cexch keeps an already optimal design and certifies it") {
  const ModelSpec spec(1, 3);
  Eigen::MatrixXd pts(3, 1);
  pts << -1.0, 0.0, 1.0;
  const SearchResult r = cexch_element_from(Design{pts}, spec, Criterion::D,
                                            ExchangeSettings{});
  CHECK(r.passes == 1);
  CHECK(r.converged);
  CHECK((r.design.points.array() == pts.array()).all());
  CHECK(r.score.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.score.value <= r.start_score.value);
}

TEST_CASE("exchange runs are monotone, terminating and deterministic") {
  const ExchangeSettings settings;
  for (const Criterion crit : {Criterion::D, Criterion::I}) {
    const ModelSpec spec(2, 7);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      std::vector<double> trace;
      const SearchResult r =
          cexch_element_from(random_start(spec, seed), spec, crit, settings,
                             &trace);
      REQUIRE(r.score.valid);
      if (r.start_score.valid) CHECK(r.score.value <= r.start_score.value);
      CHECK(r.converged);
      CHECK(r.passes <= settings.max_passes);
      CHECK(static_cast<int>(trace.size()) == r.passes);
      for (std::size_t t = 1; t < trace.size(); ++t)
        CHECK(trace[t] <= trace[t - 1] + 1e-12);

      const SearchResult again = cexch_element(spec, crit, settings, seed);
      CHECK(again.score.value == r.score.value);
      CHECK(again.passes == r.passes);
      CHECK((again.design.points.array() == r.design.points.array()).all());
    }
  }
}

TEST_CASE("row exchange matches the same contract") {
  const ExchangeSettings settings;
  const ModelSpec spec(3, 11);
  for (std::uint64_t seed = 11; seed <= 14; ++seed) {
    const SearchResult r = exch_row(spec, Criterion::D, settings, seed);
    REQUIRE(r.score.valid);
    if (r.start_score.valid) CHECK(r.score.value <= r.start_score.value);
    CHECK(r.converged);
    const SearchResult again = exch_row(spec, Criterion::D, settings, seed);
    CHECK(again.score.value == r.score.value);
    CHECK(again.evals == r.evals);
  }
}

TEST_CASE("termination certificate: no coordinate improves at the end") {
  const ModelSpec spec(2, 6);
  const ExchangeSettings settings;
  const SearchResult r = cexch_element(spec, Criterion::D, settings, 3);
  REQUIRE(r.converged);

  CriterionEvaluator eval(spec, Criterion::D);
  Eigen::MatrixXd x = r.design.points;
  const double obj = score_objective(eval.evaluate(x));
  const double margin = std::log1p(-settings.improvement_tol);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.k; ++j) {
      const double incumbent = x(i, j);
      auto conditional = [&](double t) {
        x(i, j) = t;
        return eval.objective(x);
      };
      const ScalarSolveResult s =
          minimize_scalar(conditional, -1.0, 1.0, settings.solver, incumbent);
      x(i, j) = incumbent;
      CHECK(s.f >= obj + margin);
    }
}

TEST_CASE("for one factor the two exchange variants coincide in quality") {
  const ExchangeSettings settings;
  for (const int n : {3, 5}) {
    const ModelSpec spec(1, n);
    double best_elem = 1e300, best_row = 1e300;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SearchResult a = cexch_element(spec, Criterion::D, settings, seed);
      const SearchResult b = exch_row(spec, Criterion::D, settings, seed);
      if (a.score.valid) best_elem = std::min(best_elem, a.score.value);
      if (b.score.valid) best_row = std::min(best_row, b.score.value);
    }
    CHECK(std::abs(best_elem - best_row) / best_elem < 1e-8);
  }
}

TEST_CASE("best-of-100 coordinate exchange reaches the known optimum") {
  const ModelSpec spec(1, 3);
  double best = 1e300;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SearchResult r =
        cexch_element(spec, Criterion::D, ExchangeSettings{}, seed);
    if (r.score.valid) best = std::min(best, r.score.value);
  }
  CHECK(std::abs(best - 0.25) / 0.25 < 1e-6);
}

TEST_CASE("element and row exchange agree on a two-factor problem") {
  const ModelSpec spec(2, 6);
  const ExchangeSettings settings;
  double best_elem = 1e300, best_row = 1e300;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SearchResult a = cexch_element(spec, Criterion::D, settings, seed);
    const SearchResult b = exch_row(spec, Criterion::D, settings, seed);
    if (a.score.valid) best_elem = std::min(best_elem, a.score.value);
    if (b.score.valid) best_row = std::min(best_row, b.score.value);
  }
  CHECK(std::abs(best_elem - best_row) / best_elem < 1e-3);
}
