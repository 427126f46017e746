#include <cmath>

#include "doctest.h"
#include "optdes/swarm.hpp"

using namespace optdes;

TEST_CASE("pso keeps every evaluated position inside the box") {
  bool in_bounds = true;
  const auto f = [&in_bounds](const Eigen::VectorXd& x) {
    for (int j = 0; j < x.size(); ++j)
      if (x[j] < -1.0 || x[j] > 1.0) in_bounds = false;
    return (x.array() - 0.7).square().sum();
  };
  PsoSettings s;
  s.swarm_size = 10;
  s.iterations = 200;
  const PsoSolveResult r =
      pso_minimize(f, BoxBounds::symmetric(3), s, 99, nullptr);
  CHECK(in_bounds);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(r.x[j] - 0.7) < 1e-3);
}

TEST_CASE("pso gbest trace is monotone and dominates the initial swarm") {
  const auto f = [](const Eigen::VectorXd& x) {
    return std::sin(3.0 * x[0]) + x.squaredNorm();
  };
  PsoSettings s;
  s.swarm_size = 8;
  s.iterations = 150;
  PsoTrace trace;
  const PsoSolveResult r =
      pso_minimize(f, BoxBounds::symmetric(2), s, 5, &trace);
  REQUIRE(static_cast<int>(trace.gbest_objective.size()) == s.iterations);
  for (std::size_t t = 1; t < trace.gbest_objective.size(); ++t)
    CHECK(trace.gbest_objective[t] <= trace.gbest_objective[t - 1]);
  CHECK(r.f <= r.start_f);
  CHECK(r.f == trace.gbest_objective.back());
}

TEST_CASE("pso is deterministic per seed") {
  const auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  PsoSettings s;
  s.swarm_size = 6;
  s.iterations = 80;
  const PsoSolveResult a = pso_minimize(f, BoxBounds::symmetric(4), s, 3);
  const PsoSolveResult b = pso_minimize(f, BoxBounds::symmetric(4), s, 3);
  CHECK(a.f == b.f);
  CHECK((a.x.array() == b.x.array()).all());
  CHECK(a.evals == b.evals);
  CHECK(a.evals == static_cast<std::uint64_t>(s.swarm_size) * (s.iterations + 1));
}

TEST_CASE("pso settings are validated") {
  const auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  PsoSettings s;
  s.swarm_size = 1;
  CHECK_THROWS_AS(pso_minimize(f, BoxBounds::symmetric(2), s, 1),
                  std::invalid_argument);
  s = PsoSettings{};
  s.vmax_fraction = 0.0;
  CHECK_THROWS_AS(pso_minimize(f, BoxBounds::symmetric(2), s, 1),
                  std::invalid_argument);
}

TEST_CASE("pso search recovers the known one-factor optimum") {
  const ModelSpec spec(1, 3);
  int hits = 0;
  double best = 1e300;
  for (std::uint64_t seed = 0; seed < 140; ++seed) {
    const SearchResult r = pso_search(spec, Criterion::D, PsoSettings{}, seed);
    REQUIRE(r.score.valid);
    CHECK(r.score.value <= r.start_score.value);
    best = std::min(best, r.score.value);
    if (std::abs(r.score.value - 0.25) / 0.25 < 1e-4) ++hits;
  }
  CHECK(std::abs(best - 0.25) / 0.25 < 1e-4);
  CHECK(hits >= 133);  // at least 95% of 140 runs
}

TEST_CASE("pso search result is a valid in-bounds design") {
  const ModelSpec spec(2, 6);
  PsoSettings s;
  s.iterations = 300;
  const SearchResult r = pso_search(spec, Criterion::I, s, 12345);
  CHECK_NOTHROW(validate_design(r.design, spec));
  CHECK(r.passes == s.iterations);
  CHECK(r.seed == 12345);
}
