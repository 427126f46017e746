#include <cmath>
#include <limits>

#include "doctest.h"
#include "optdes/localsolve.hpp"

using namespace optdes;

TEST_CASE("scalar solver finds an interior quadratic minimum") {
  const auto f = [](double x) { return (x - 0.3) * (x - 0.3); };
  const SolveSettings s;
  for (const double x0 : {-1.0, -0.2, 0.0, 0.31, 0.9, 1.0}) {
    const ScalarSolveResult r = minimize_scalar(f, -1.0, 1.0, s, x0);
    CHECK(std::abs(r.x - 0.3) <= 1e-6);
    CHECK(r.f <= f(x0));
    CHECK(r.evals <= 200);
  }
}

TEST_CASE("scalar solver pins boundary minima exactly") {
  const auto f = [](double x) { return (x + 2.0) * (x + 2.0); };
  const ScalarSolveResult r =
      minimize_scalar(f, -1.0, 1.0, SolveSettings{}, 0.4);
  CHECK(r.x == -1.0);
  CHECK(r.f == f(-1.0));
}

TEST_CASE("scalar solver returns the incumbent on a constant objective") {
  const auto f = [](double) { return 5.0; };
  const ScalarSolveResult r =
      minimize_scalar(f, -1.0, 1.0, SolveSettings{}, 0.123);
  CHECK(r.x == 0.123);
  CHECK(r.f == 5.0);
}

TEST_CASE("scalar solver validates its start point") {
  const auto f = [](double x) { return x * x; };
  CHECK_THROWS_AS(minimize_scalar(f, -1.0, 1.0, SolveSettings{}, 2.0),
                  std::invalid_argument);
  const auto bad = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(minimize_scalar(bad, -1.0, 1.0, SolveSettings{}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("scalar solver is deterministic and budget-bounded") {
  const auto f = [](double x) { return std::sin(5.0 * x) + 0.3 * x * x; };
  SolveSettings s;
  s.max_evals = 37;
  const ScalarSolveResult a = minimize_scalar(f, -1.0, 1.0, s, 0.5);
  const ScalarSolveResult b = minimize_scalar(f, -1.0, 1.0, s, 0.5);
  CHECK(a.x == b.x);
  CHECK(a.f == b.f);
  CHECK(a.evals == b.evals);
  CHECK(a.evals <= 37);
}

TEST_CASE("box solver finds a separable quadratic minimum") {
  const auto f = [](const Eigen::VectorXd& x) {
    const double dx = x[0] - 0.25, dy = x[1] + 0.5;
    return dx * dx + dy * dy;
  };
  const BoxBounds box = BoxBounds::symmetric(2);
  Eigen::VectorXd x0(2);
  x0 << -0.8, 0.9;
  const VectorSolveResult r = minimize_box(f, box, SolveSettings{}, x0);
  CHECK(std::abs(r.x[0] - 0.25) <= 1e-5);
  CHECK(std::abs(r.x[1] + 0.5) <= 1e-5);
  CHECK(r.f <= f(x0));
}

TEST_CASE("box solver pins all-active bounds exactly") {
  const auto f = [](const Eigen::VectorXd& x) {
    return (x.array() + 2.0).square().sum();
  };
  const BoxBounds box = BoxBounds::symmetric(3);
  const VectorSolveResult r =
      minimize_box(f, box, SolveSettings{}, Eigen::VectorXd::Zero(3));
  for (int j = 0; j < 3; ++j) CHECK(r.x[j] == -1.0);
}

TEST_CASE("box solver returns the incumbent on a constant objective") {
  const auto f = [](const Eigen::VectorXd&) { return 7.5; };
  const BoxBounds box = BoxBounds::symmetric(2);
  Eigen::VectorXd x0(2);
  x0 << 0.4, -0.6;
  const VectorSolveResult r = minimize_box(f, box, SolveSettings{}, x0);
  CHECK(r.x[0] == 0.4);
  CHECK(r.x[1] == -0.6);
  CHECK(r.f == 7.5);
}

TEST_CASE("box solver keeps iterates inside the box") {
  // Strong pull toward a minimum far outside the box.
  const auto f = [](const Eigen::VectorXd& x) {
    return (x.array() - 10.0).square().sum();
  };
  const BoxBounds box = BoxBounds::symmetric(2);
  Eigen::VectorXd x0(2);
  x0 << 0.0, 0.0;
  const VectorSolveResult r = minimize_box(f, box, SolveSettings{}, x0);
  for (int j = 0; j < 2; ++j) {
    CHECK(r.x[j] >= -1.0);
    CHECK(r.x[j] <= 1.0);
    CHECK(r.x[j] == 1.0);  // bound-active optimum, exactly on the bound
  }
}

TEST_CASE("box solver respects its evaluation budget") {
  int calls = 0;
  const auto f = [&calls](const Eigen::VectorXd& x) {
    ++calls;
    return x.squaredNorm();
  };
  SolveSettings s;
  s.max_evals = 25;
  const BoxBounds box = BoxBounds::symmetric(4);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(4, 0.9);
  const VectorSolveResult r = minimize_box(f, box, s, x0);
  CHECK(calls <= 25);
  CHECK(r.evals == calls);
  CHECK(r.f <= f(x0));  // still never worse than the incumbent
}
