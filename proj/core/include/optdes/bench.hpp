#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "optdes/criteria.hpp"
#include "optdes/exchange.hpp"
#include "optdes/swarm.hpp"

namespace optdes {

enum class Algorithm { cexch_element, exch_row, pso };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);  // accepts cexch/rexch/pso aliases

/// One design problem: factor count, run count and the criterion to
/// optimize. The standard grid is k=1 with n in 3..9, k=2 with n in 6..12,
/// k=3 with n in 10..16; anything else is allowed but non-standard.
struct Scenario {
  int k = 0;
  int n = 0;
  Criterion criterion = Criterion::D;

  bool is_standard() const;
  ModelSpec spec() const { return ModelSpec(k, n); }
};

bool operator==(const Scenario& a, const Scenario& b);
bool operator<(const Scenario& a, const Scenario& b);

/// The 21 standard (k,n) scenarios under one criterion, ordered k
/// ascending then n ascending.
std::vector<Scenario> standard_scenarios(Criterion criterion);

/// Best-known design and score for one scenario, with free-text
/// provenance (source, date, settings hash).
struct CatalogEntry {
  Scenario scenario;
  double best_score = 0.0;
  Design best_design;
  std::string provenance;
};

/// Best-known catalog keyed by scenario. Loading re-scores every entry
/// and rejects the file if a stored score drifts beyond 1e-9 relative.
class Catalog {
 public:
  static Catalog load(const std::string& path);
  void save(const std::string& path) const;

  const CatalogEntry* find(const Scenario& s) const;
  void upsert(CatalogEntry entry);
  std::size_t size() const { return entries_.size(); }
  const std::map<Scenario, CatalogEntry>& entries() const { return entries_; }

  /// Re-scores every entry; returns human-readable problem descriptions,
  /// empty when all entries check out within 1e-9 relative.
  std::vector<std::string> verify() const;

 private:
  std::map<Scenario, CatalogEntry> entries_;
};

/// Result of a single benchmark run. The final design is kept in memory
/// for catalog maintenance but is not part of the CSV record schema.
struct RunRecord {
  Scenario scenario;
  Algorithm algorithm = Algorithm::cexch_element;
  std::uint64_t seed = 0;
  double final_score = 0.0;
  bool score_valid = false;
  std::optional<double> efficiency;  // empty when no catalog entry exists
  int passes_or_iters = 0;
  std::uint64_t evals = 0;
  double wall_time_s = 0.0;
  Design final_design;
};

/// Aggregates for one (scenario, algorithm) cell. p95 counts runs with
/// efficiency >= 0.95, p100 those with efficiency >= 0.9999 (the stand-in
/// for "found the best-known design" with continuous coordinates); both
/// are NaN when the catalog had no entry for the cell.
struct BenchmarkSummary {
  Scenario scenario;
  Algorithm algorithm = Algorithm::cexch_element;
  int n_run = 0;
  double p95_hat = 0.0;
  double p100_hat = 0.0;
  double best_found = 0.0;
  double mean_wall_time_s = 0.0;
  double median_wall_time_s = 0.0;
};

inline constexpr double kP95Threshold = 0.95;
inline constexpr double kP100Threshold = 0.9999;

struct BenchmarkConfig {
  int n_run = 500;
  std::uint64_t master_seed = 0;
  ExchangeSettings exchange;
  PsoSettings pso;
  int threads = 0;           // 0 = hardware concurrency
  bool measure_time = true;  // false writes 0 wall times (byte-stable output)
};

struct BenchmarkResult {
  std::vector<RunRecord> records;
  std::vector<BenchmarkSummary> summaries;
};

/// Executes n_run independent runs for every (scenario, algorithm) cell on
/// a worker pool. Per-run seeds come from derive_run_seed, so records are
/// identical for any thread count. Missing catalog entries downgrade the
/// affected cells to efficiency-unavailable rather than failing.
BenchmarkResult run_benchmark(const std::vector<Scenario>& scenarios,
                              const std::vector<Algorithm>& algorithms,
                              const BenchmarkConfig& config,
                              const Catalog* catalog);

/// Pure aggregation of records into per-cell summaries (cells ordered as
/// first encountered in the record list). Recomputing from a persisted
/// record set reproduces the summaries exactly.
std::vector<BenchmarkSummary> summarize(const std::vector<RunRecord>& records);

/// Executes one run: derives the seed, dispatches on the algorithm and
/// scores the outcome against the catalog entry (if any).
RunRecord execute_run(const Scenario& scenario, Algorithm algorithm,
                      std::uint64_t run_index, const BenchmarkConfig& config,
                      const CatalogEntry* best);

/// Best-of-n_run multistart. Ties break toward the lower run index, so the
/// result is independent of the worker count. Returns the best run's
/// record (with design) plus the number of runs whose score was valid.
std::pair<RunRecord, int> multistart_best(const Scenario& scenario,
                                          Algorithm algorithm,
                                          const BenchmarkConfig& config);

struct CatalogImprovement {
  Scenario scenario;
  double old_score = 0.0;
  double new_score = 0.0;
  bool inserted = false;  // true when the scenario had no entry before
  std::string description;
};

/// Folds run records into the catalog: an entry is replaced when a record
/// beats it by more than 1e-9 relative (improvements are surfaced, never
/// clamped), and created when the scenario has no entry yet. Every
/// replacement re-verifies the record's design before committing; a design
/// that fails re-verification aborts with a diagnostic.
std::vector<CatalogImprovement> update_catalog(
    const std::vector<RunRecord>& records, Catalog& catalog,
    const std::string& provenance_note);

/// CSV with header k,n,criterion,algorithm,seed,final_score,efficiency,
/// passes,evals,wall_time_s. Unavailable efficiencies and invalid scores
/// serialize as nan.
void write_records_csv(const std::string& path,
                       const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::string& path);

/// CSV with header k,n,criterion,algorithm,n_run,p95,p100,best_found,
/// mean_wall_time_s.
void write_summary_csv(const std::string& path,
                       const std::vector<BenchmarkSummary>& summaries);

/// FNV-1a over the canonical JSON of the algorithmic configuration
/// (solver, exchange and swarm settings, rng version, efficiency
/// convention); 16 hex digits. Ties records, summaries and catalog
/// provenance to the exact configuration that produced them.
std::string settings_hash(const ExchangeSettings& exchange,
                          const PsoSettings& pso);

/// Canonical JSON echo of the full effective configuration; what the hash
/// is computed over, plus run-level fields (seed, n_run, threads, ...).
std::string settings_json(const ExchangeSettings& exchange,
                          const PsoSettings& pso);

}  // namespace optdes
