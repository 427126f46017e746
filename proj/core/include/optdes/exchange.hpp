#pragma once

#include <cstdint>
#include <vector>

#include "optdes/criteria.hpp"
#include "optdes/localsolve.hpp"
#include "optdes/model.hpp"

namespace optdes {

/// Loop control for the exchange algorithms. An exchange is accepted only
/// when it improves the criterion value by more than improvement_tol in
/// relative terms; ties and sub-tolerance changes keep the incumbent, which
/// rules out floating-point limit cycles.
struct ExchangeSettings {
  double improvement_tol = 1e-10;
  int max_passes = 100;
  SolveSettings solver;
};

/// Outcome of one search run (exchange or swarm).
struct SearchResult {
  Design design;
  CriterionScore score;
  int passes = 0;            // full sweeps (exchange) or iterations (swarm)
  std::uint64_t evals = 0;   // criterion evaluations consumed
  std::uint64_t seed = 0;
  CriterionScore start_score;
  bool converged = false;  // final sweep accepted no exchange
};

/// n x k design with i.i.d. Uniform(-1,1) entries, filled row-major from
/// the seeded generator described in rng.hpp. Deterministic per seed.
Design random_start(const ModelSpec& spec, std::uint64_t seed);

/// Element-wise coordinate exchange: sweeps coordinates row-major and
/// re-optimizes each one in isolation with the bounded scalar solver,
/// accepting improvements immediately. Stops after a full sweep with no
/// accepted exchange, or at max_passes.
SearchResult cexch_element(const ModelSpec& spec, Criterion criterion,
                           const ExchangeSettings& settings,
                           std::uint64_t seed);

/// Row-wise exchange: sweeps design rows and re-optimizes each full row
/// with the bounded multivariate solver. Same acceptance and termination
/// rules as cexch_element.
SearchResult exch_row(const ModelSpec& spec, Criterion criterion,
                      const ExchangeSettings& settings, std::uint64_t seed);

// Deterministic cores starting from an explicit design; the seeded
// entry points above wrap these around random_start. pass_objectives,
// when given, receives the objective value after every completed sweep.
SearchResult cexch_element_from(Design start, const ModelSpec& spec,
                                Criterion criterion,
                                const ExchangeSettings& settings,
                                std::vector<double>* pass_objectives = nullptr);
SearchResult exch_row_from(Design start, const ModelSpec& spec,
                           Criterion criterion,
                           const ExchangeSettings& settings,
                           std::vector<double>* pass_objectives = nullptr);

}  // namespace optdes
