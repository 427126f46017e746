#include "optdes/swarm.hpp"

#include <stdexcept>
#include <vector>

#include "optdes/rng.hpp"

namespace optdes {

namespace {

void validate(const PsoSettings& s) {
  if (s.swarm_size < 2)
    throw std::invalid_argument("pso: swarm_size must be >= 2");
  if (s.iterations < 1)
    throw std::invalid_argument("pso: iterations must be >= 1");
  if (s.cognitive < 0.0 || s.social < 0.0 || s.inertia_start < 0.0 ||
      s.inertia_end < 0.0)
    throw std::invalid_argument("pso: coefficients must be >= 0");
  if (!(s.vmax_fraction > 0.0 && s.vmax_fraction <= 1.0))
    throw std::invalid_argument("pso: vmax_fraction must be in (0,1]");
}

}  // namespace

PsoSolveResult pso_minimize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const BoxBounds& bounds, const PsoSettings& settings, std::uint64_t seed,
    PsoTrace* trace) {
  validate(settings);
  const int dim = static_cast<int>(bounds.lower.size());
  if (bounds.upper.size() != dim || dim < 1)
    throw std::invalid_argument("pso: bad bounds");

  const int swarm = settings.swarm_size;
  const int iters = settings.iterations;
  rng::Engine eng(seed);

  std::vector<Eigen::VectorXd> pos(swarm), vel(swarm), pbest(swarm);
  std::vector<double> pbest_f(swarm);
  const Eigen::VectorXd vmax =
      settings.vmax_fraction * (bounds.upper - bounds.lower);

  // Positions i.i.d. uniform in the box (same start law as random_start),
  // velocities zero.
  std::uint64_t evals = 0;
  for (int s = 0; s < swarm; ++s) {
    pos[s].resize(dim);
    for (int c = 0; c < dim; ++c)
      pos[s][c] = bounds.lower[c] +
                  (bounds.upper[c] - bounds.lower[c]) * rng::uniform01(eng);
    vel[s] = Eigen::VectorXd::Zero(dim);
    pbest[s] = pos[s];
    pbest_f[s] = objective(pos[s]);
    ++evals;
  }

  int gbest_idx = 0;
  for (int s = 1; s < swarm; ++s)
    if (pbest_f[s] < pbest_f[gbest_idx]) gbest_idx = s;
  Eigen::VectorXd gbest = pbest[gbest_idx];
  double gbest_f = pbest_f[gbest_idx];
  const Eigen::VectorXd start_x = gbest;
  const double start_f = gbest_f;

  for (int t = 0; t < iters; ++t) {
    const double w =
        iters > 1 ? settings.inertia_start +
                        (settings.inertia_end - settings.inertia_start) *
                            (static_cast<double>(t) / (iters - 1))
                  : settings.inertia_start;

    for (int s = 0; s < swarm; ++s) {
      for (int c = 0; c < dim; ++c) {
        const double r1 = rng::uniform01(eng);
        const double r2 = rng::uniform01(eng);
        double v = w * vel[s][c] +
                   settings.cognitive * r1 * (pbest[s][c] - pos[s][c]) +
                   settings.social * r2 * (gbest[c] - pos[s][c]);
        if (v > vmax[c])
          v = vmax[c];
        else if (v < -vmax[c])
          v = -vmax[c];
        double xc = pos[s][c] + v;
        if (xc < bounds.lower[c]) {
          xc = bounds.lower[c];
          v = 0.0;
        } else if (xc > bounds.upper[c]) {
          xc = bounds.upper[c];
          v = 0.0;
        }
        vel[s][c] = v;
        pos[s][c] = xc;
      }
      const double f = objective(pos[s]);
      ++evals;
      if (f < pbest_f[s]) {
        pbest_f[s] = f;
        pbest[s] = pos[s];
      }
    }

    // gbest selection after the whole iteration; lowest index wins ties.
    for (int s = 0; s < swarm; ++s)
      if (pbest_f[s] < gbest_f) {
        gbest_f = pbest_f[s];
        gbest = pbest[s];
      }
    if (trace) trace->gbest_objective.push_back(gbest_f);
  }

  PsoSolveResult out;
  out.x = gbest;
  out.f = gbest_f;
  out.evals = evals;
  out.start_x = start_x;
  out.start_f = start_f;
  return out;
}

SearchResult pso_search(const ModelSpec& spec, Criterion criterion,
                        const PsoSettings& settings, std::uint64_t seed,
                        PsoTrace* trace) {
  CriterionEvaluator eval(spec, criterion);
  const int dim = spec.n * spec.k;
  Eigen::MatrixXd pts(spec.n, spec.k);

  // Row-major flattening: component i*k + j is design entry (i,j).
  auto unflatten = [&](const Eigen::VectorXd& x) {
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.k; ++j) pts(i, j) = x[i * spec.k + j];
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    unflatten(x);
    return eval.objective(pts);
  };

  const PsoSolveResult r = pso_minimize(
      objective, BoxBounds::symmetric(dim), settings, seed, trace);

  SearchResult out;
  unflatten(r.start_x);
  out.start_score = eval.evaluate(pts);
  unflatten(r.x);
  out.score = eval.evaluate(pts);
  out.design = Design{pts};
  out.passes = settings.iterations;
  out.evals = eval.evals();
  out.seed = seed;
  return out;
}

}  // namespace optdes
