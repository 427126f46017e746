#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "optdes/exchange.hpp"
#include "optdes/localsolve.hpp"

namespace optdes {

/// Global-best particle swarm parameters. All values are recorded in
/// output metadata; alternate parametrizations are a config change.
struct PsoSettings {
  int swarm_size = 30;
  int iterations = 2000;
  double inertia_start = 0.9;  // linear schedule across iterations
  double inertia_end = 0.4;
  double cognitive = 1.49618;
  double social = 1.49618;
  double vmax_fraction = 0.5;  // speed cap per dimension, fraction of box width
};

struct PsoTrace {
  std::vector<double> gbest_objective;  // one entry per iteration
};

struct PsoSolveResult {
  Eigen::VectorXd x;
  double f = 0.0;
  std::uint64_t evals = 0;
  Eigen::VectorXd start_x;  // best member of the initial swarm
  double start_f = 0.0;
};

/// Generic global-best PSO over a box. Velocity update
///   v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)
/// with per-component speed cap; positions are clamped to the box and the
/// velocity of a clamped component zeroed. Initial positions i.i.d.
/// uniform in the box, initial velocities zero. gbest is selected after
/// all evaluations of an iteration, lowest particle index winning ties.
/// Deterministic per seed.
PsoSolveResult pso_minimize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const BoxBounds& bounds, const PsoSettings& settings, std::uint64_t seed,
    PsoTrace* trace = nullptr);

/// PSO over the flattened n*k design space (row-major layout, matching
/// random_start) under a design criterion. The least greedy optimizer in
/// this library: every move reconsiders the whole design at once.
SearchResult pso_search(const ModelSpec& spec, Criterion criterion,
                        const PsoSettings& settings, std::uint64_t seed,
                        PsoTrace* trace = nullptr);

}  // namespace optdes
