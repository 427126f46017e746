#include "optdes/exchange.hpp"

#include <cmath>
#include <utility>

#include "optdes/rng.hpp"

namespace optdes {

Design random_start(const ModelSpec& spec, std::uint64_t seed) {
  rng::Engine eng(seed);
  Eigen::MatrixXd pts(spec.n, spec.k);
  for (int i = 0; i < spec.n; ++i)       // row-major fill order
    for (int j = 0; j < spec.k; ++j) pts(i, j) = rng::uniform_pm1(eng);
  return Design{std::move(pts)};
}

namespace {

enum class SweepKind { element, row };

// Shared sweep loop for both exchange variants. Proposals start from the
// incumbent coordinate/row, so a sweep can only keep or improve the
// objective; a full sweep with no accepted exchange certifies local
// optimality under the inner solver and terminates the search.
SearchResult exchange_search(Design start, const ModelSpec& spec,
                             Criterion criterion,
                             const ExchangeSettings& settings,
                             SweepKind kind,
                             std::vector<double>* pass_objectives) {
  validate_design(start, spec);
  if (settings.max_passes < 1)
    throw std::invalid_argument("exchange: max_passes must be >= 1");

  CriterionEvaluator eval(spec, criterion);
  Eigen::MatrixXd& x = start.points;

  SearchResult result;
  result.start_score = eval.evaluate(x);
  double obj = score_objective(result.start_score);

  // Acceptance threshold in log space: a relative criterion decrease of
  // improvement_tol corresponds to an additive log1p(-tol) margin.
  const double log_margin = std::log1p(-settings.improvement_tol);
  const BoxBounds row_box = BoxBounds::symmetric(spec.k);
  Eigen::VectorXd incumbent_row(spec.k);

  bool converged = false;
  int passes = 0;
  for (int pass = 1; pass <= settings.max_passes; ++pass) {
    passes = pass;
    bool accepted_any = false;

    if (kind == SweepKind::element) {
      for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.k; ++j) {
          const double incumbent = x(i, j);
          auto conditional = [&](double t) {
            x(i, j) = t;
            return eval.objective(x);
          };
          const ScalarSolveResult r = minimize_scalar(
              conditional, -1.0, 1.0, settings.solver, incumbent);
          if (r.f < obj + log_margin) {
            x(i, j) = r.x;
            obj = r.f;
            accepted_any = true;
          } else {
            x(i, j) = incumbent;
          }
        }
    } else {
      for (int i = 0; i < spec.n; ++i) {
        incumbent_row = x.row(i);
        auto conditional = [&](const Eigen::VectorXd& t) {
          x.row(i) = t;
          return eval.objective(x);
        };
        const VectorSolveResult r = minimize_box(
            conditional, row_box, settings.solver, incumbent_row);
        if (r.f < obj + log_margin) {
          x.row(i) = r.x;
          obj = r.f;
          accepted_any = true;
        } else {
          x.row(i) = incumbent_row;
        }
      }
    }

    if (pass_objectives) pass_objectives->push_back(obj);
    if (!accepted_any) {
      converged = true;
      break;
    }
  }

  result.score = eval.evaluate(x);
  result.design = std::move(start);
  result.passes = passes;
  result.converged = converged;
  result.evals = eval.evals();
  return result;
}

}  // namespace

SearchResult cexch_element_from(Design start, const ModelSpec& spec,
                                Criterion criterion,
                                const ExchangeSettings& settings,
                                std::vector<double>* pass_objectives) {
  return exchange_search(std::move(start), spec, criterion, settings,
                         SweepKind::element, pass_objectives);
}

SearchResult exch_row_from(Design start, const ModelSpec& spec,
                           Criterion criterion,
                           const ExchangeSettings& settings,
                           std::vector<double>* pass_objectives) {
  return exchange_search(std::move(start), spec, criterion, settings,
                         SweepKind::row, pass_objectives);
}

SearchResult cexch_element(const ModelSpec& spec, Criterion criterion,
                           const ExchangeSettings& settings,
                           std::uint64_t seed) {
  SearchResult r = cexch_element_from(random_start(spec, seed), spec,
                                      criterion, settings);
  r.seed = seed;
  return r;
}

SearchResult exch_row(const ModelSpec& spec, Criterion criterion,
                      const ExchangeSettings& settings, std::uint64_t seed) {
  SearchResult r =
      exch_row_from(random_start(spec, seed), spec, criterion, settings);
  r.seed = seed;
  return r;
}

}  // namespace optdes
