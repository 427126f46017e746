#include "optdes/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "optdes/io.hpp"
#include "optdes/rng.hpp"

namespace optdes {

namespace {

using json = nlohmann::json;

constexpr double kCatalogRelTol = 1e-9;

int criterion_id(Criterion c) { return c == Criterion::D ? 0 : 1; }

int algorithm_id(Algorithm a) {
  switch (a) {
    case Algorithm::cexch_element: return 0;
    case Algorithm::exch_row: return 1;
    case Algorithm::pso: return 2;
  }
  return -1;
}

// First exception thrown by any worker wins; the rest of the tasks still
// drain so joins stay simple.
void parallel_for(std::size_t n_tasks, int threads,
                  const std::function<void(std::size_t)>& fn) {
  int t = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (n_tasks < static_cast<std::size_t>(t)) t = static_cast<int>(n_tasks);

  if (t <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double rescore(const Scenario& s, const Design& d) {
  CriterionEvaluator eval(s.spec(), s.criterion);
  const CriterionScore score = eval.evaluate(d);
  if (!score.valid)
    throw std::runtime_error("design for k=" + std::to_string(s.k) +
                             " n=" + std::to_string(s.n) + " " +
                             to_string(s.criterion) +
                             " has a singular information matrix");
  return score.value;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

json settings_to_json(const ExchangeSettings& exchange,
                      const PsoSettings& pso) {
  return json{
      {"efficiency_convention", kEfficiencyConvention},
      {"rng", rng::kRngVersion},
      {"seed_derivation", rng::kSeedDerivationVersion},
      {"exchange",
       {{"improvement_tol", exchange.improvement_tol},
        {"max_passes", exchange.max_passes},
        {"solver",
         {{"x_tol", exchange.solver.x_tol},
          {"f_tol", exchange.solver.f_tol},
          {"max_evals", exchange.solver.max_evals}}}}},
      {"pso",
       {{"swarm_size", pso.swarm_size},
        {"iterations", pso.iterations},
        {"inertia_start", pso.inertia_start},
        {"inertia_end", pso.inertia_end},
        {"cognitive", pso.cognitive},
        {"social", pso.social},
        {"vmax_fraction", pso.vmax_fraction}}}};
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::cexch_element: return "cexch_element";
    case Algorithm::exch_row: return "exch_row";
    case Algorithm::pso: return "pso";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "cexch" || s == "cexch_element") return Algorithm::cexch_element;
  if (s == "rexch" || s == "exch_row") return Algorithm::exch_row;
  if (s == "pso") return Algorithm::pso;
  throw std::invalid_argument("unknown algorithm '" + s +
                              "' (expected cexch, rexch or pso)");
}

bool Scenario::is_standard() const {
  if (k == 1) return n >= 3 && n <= 9;
  if (k == 2) return n >= 6 && n <= 12;
  if (k == 3) return n >= 10 && n <= 16;
  return false;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.k == b.k && a.n == b.n && a.criterion == b.criterion;
}

bool operator<(const Scenario& a, const Scenario& b) {
  if (a.k != b.k) return a.k < b.k;
  if (a.n != b.n) return a.n < b.n;
  return criterion_id(a.criterion) < criterion_id(b.criterion);
}

std::vector<Scenario> standard_scenarios(Criterion criterion) {
  std::vector<Scenario> out;
  out.reserve(21);
  for (int n = 3; n <= 9; ++n) out.push_back({1, n, criterion});
  for (int n = 6; n <= 12; ++n) out.push_back({2, n, criterion});
  for (int n = 10; n <= 16; ++n) out.push_back({3, n, criterion});
  return out;
}

Catalog Catalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("catalog '" + path + "': " + e.what());
  }
  if (!doc.is_array())
    throw std::runtime_error("catalog '" + path + "': expected a JSON array");

  Catalog cat;
  for (const auto& item : doc) {
    CatalogEntry entry;
    entry.scenario.k = item.at("k").get<int>();
    entry.scenario.n = item.at("n").get<int>();
    entry.scenario.criterion =
        parse_criterion(item.at("criterion").get<std::string>());
    entry.best_score = item.at("score").get<double>();
    entry.provenance = item.at("provenance").get<std::string>();

    const auto& rows = item.at("design");
    Eigen::MatrixXd pts(entry.scenario.n, entry.scenario.k);
    if (static_cast<int>(rows.size()) != entry.scenario.n)
      throw std::runtime_error("catalog '" + path + "': design row count " +
                               std::to_string(rows.size()) + " != n");
    for (int i = 0; i < entry.scenario.n; ++i) {
      if (static_cast<int>(rows[i].size()) != entry.scenario.k)
        throw std::runtime_error("catalog '" + path +
                                 "': design column count mismatch");
      for (int j = 0; j < entry.scenario.k; ++j)
        pts(i, j) = rows[i][j].get<double>();
    }
    entry.best_design = Design{std::move(pts)};
    validate_design(entry.best_design, entry.scenario.spec());

    // Stored scores are re-verified on every load.
    const double actual = rescore(entry.scenario, entry.best_design);
    if (std::abs(actual - entry.best_score) >
        kCatalogRelTol * std::abs(entry.best_score))
      throw std::runtime_error(
          "catalog '" + path + "': entry k=" + std::to_string(entry.scenario.k) +
          " n=" + std::to_string(entry.scenario.n) + " " +
          to_string(entry.scenario.criterion) + " stores score " +
          format_double(entry.best_score) + " but re-scores to " +
          format_double(actual));

    cat.entries_[entry.scenario] = std::move(entry);
  }
  return cat;
}

void Catalog::save(const std::string& path) const {
  json doc = json::array();
  for (const auto& [scenario, entry] : entries_) {
    json rows = json::array();
    for (int i = 0; i < entry.best_design.runs(); ++i) {
      json row = json::array();
      for (int j = 0; j < entry.best_design.factors(); ++j)
        row.push_back(entry.best_design.points(i, j));
      rows.push_back(std::move(row));
    }
    doc.push_back(json{{"k", scenario.k},
                       {"n", scenario.n},
                       {"criterion", to_string(scenario.criterion)},
                       {"score", entry.best_score},
                       {"design", std::move(rows)},
                       {"provenance", entry.provenance}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write catalog '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for catalog '" + path + "'");
}

const CatalogEntry* Catalog::find(const Scenario& s) const {
  const auto it = entries_.find(s);
  return it == entries_.end() ? nullptr : &it->second;
}

void Catalog::upsert(CatalogEntry entry) {
  entries_[entry.scenario] = std::move(entry);
}

std::vector<std::string> Catalog::verify() const {
  std::vector<std::string> problems;
  for (const auto& [scenario, entry] : entries_) {
    double actual;
    try {
      actual = rescore(scenario, entry.best_design);
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
      continue;
    }
    if (std::abs(actual - entry.best_score) >
        kCatalogRelTol * std::abs(entry.best_score))
      problems.push_back("entry k=" + std::to_string(scenario.k) +
                         " n=" + std::to_string(scenario.n) + " " +
                         to_string(scenario.criterion) + ": stored " +
                         format_double(entry.best_score) + ", re-scored " +
                         format_double(actual));
  }
  return problems;
}

RunRecord execute_run(const Scenario& scenario, Algorithm algorithm,
                      std::uint64_t run_index, const BenchmarkConfig& config,
                      const CatalogEntry* best) {
  const ModelSpec spec = scenario.spec();
  const std::uint64_t seed = rng::derive_run_seed(
      config.master_seed, scenario.k, scenario.n,
      criterion_id(scenario.criterion), algorithm_id(algorithm), run_index);

  const auto t0 = std::chrono::steady_clock::now();
  SearchResult sr;
  switch (algorithm) {
    case Algorithm::cexch_element:
      sr = cexch_element(spec, scenario.criterion, config.exchange, seed);
      break;
    case Algorithm::exch_row:
      sr = exch_row(spec, scenario.criterion, config.exchange, seed);
      break;
    case Algorithm::pso:
      sr = pso_search(spec, scenario.criterion, config.pso, seed);
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.scenario = scenario;
  rec.algorithm = algorithm;
  rec.seed = seed;
  rec.score_valid = sr.score.valid;
  rec.final_score = sr.score.valid
                        ? sr.score.value
                        : std::numeric_limits<double>::quiet_NaN();
  if (best != nullptr && sr.score.valid) {
    const CriterionScore best_score{best->best_score, true, 0.0};
    rec.efficiency =
        efficiency(sr.score, best_score, scenario.criterion, spec);
  }
  rec.passes_or_iters = sr.passes;
  rec.evals = sr.evals;
  rec.wall_time_s =
      config.measure_time
          ? std::chrono::duration<double>(t1 - t0).count()
          : 0.0;
  rec.final_design = std::move(sr.design);
  return rec;
}

BenchmarkResult run_benchmark(const std::vector<Scenario>& scenarios,
                              const std::vector<Algorithm>& algorithms,
                              const BenchmarkConfig& config,
                              const Catalog* catalog) {
  if (config.n_run < 1)
    throw std::invalid_argument("run_benchmark: n_run must be >= 1");
  if (scenarios.empty() || algorithms.empty())
    throw std::invalid_argument(
        "run_benchmark: need at least one scenario and one algorithm");

  struct Cell {
    Scenario scenario;
    Algorithm algorithm;
    const CatalogEntry* best;
  };
  std::vector<Cell> cells;
  cells.reserve(scenarios.size() * algorithms.size());
  for (const auto& s : scenarios)
    for (const auto& a : algorithms)
      cells.push_back({s, a, catalog ? catalog->find(s) : nullptr});

  const std::size_t n_run = static_cast<std::size_t>(config.n_run);
  BenchmarkResult result;
  result.records.resize(cells.size() * n_run);

  parallel_for(result.records.size(), config.threads, [&](std::size_t idx) {
    const Cell& cell = cells[idx / n_run];
    const std::uint64_t run_index = idx % n_run;
    result.records[idx] = execute_run(cell.scenario, cell.algorithm,
                                      run_index, config, cell.best);
  });

  result.summaries = summarize(result.records);
  return result;
}

std::vector<BenchmarkSummary> summarize(const std::vector<RunRecord>& records) {
  std::vector<BenchmarkSummary> out;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].scenario == records[i].scenario &&
           records[j].algorithm == records[i].algorithm)
      ++j;

    BenchmarkSummary s;
    s.scenario = records[i].scenario;
    s.algorithm = records[i].algorithm;
    s.n_run = static_cast<int>(j - i);

    int have_eff = 0, n95 = 0, n100 = 0, have_score = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> times;
    times.reserve(j - i);
    double time_sum = 0.0;
    for (std::size_t r = i; r < j; ++r) {
      const RunRecord& rec = records[r];
      if (rec.efficiency.has_value()) {
        ++have_eff;
        if (*rec.efficiency >= kP95Threshold) ++n95;
        if (*rec.efficiency >= kP100Threshold) ++n100;
      }
      if (rec.score_valid) {
        ++have_score;
        best = std::min(best, rec.final_score);
      }
      times.push_back(rec.wall_time_s);
      time_sum += rec.wall_time_s;
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    // A cell missing any efficiency value (no catalog entry) is flagged
    // with NaN estimates rather than a misleading count.
    s.p95_hat = have_eff == s.n_run ? static_cast<double>(n95) / s.n_run : nan;
    s.p100_hat =
        have_eff == s.n_run ? static_cast<double>(n100) / s.n_run : nan;
    s.best_found = have_score > 0 ? best : nan;
    s.mean_wall_time_s = time_sum / s.n_run;
    std::sort(times.begin(), times.end());
    s.median_wall_time_s = times.size() % 2 == 1
                               ? times[times.size() / 2]
                               : 0.5 * (times[times.size() / 2 - 1] +
                                        times[times.size() / 2]);
    out.push_back(std::move(s));
    i = j;
  }
  return out;
}

std::pair<RunRecord, int> multistart_best(const Scenario& scenario,
                                          Algorithm algorithm,
                                          const BenchmarkConfig& config) {
  if (config.n_run < 1)
    throw std::invalid_argument("multistart_best: n_run must be >= 1");

  std::mutex mutex;
  RunRecord best;
  std::uint64_t best_index = 0;
  bool have_best = false;
  int valid_runs = 0;

  parallel_for(static_cast<std::size_t>(config.n_run), config.threads,
               [&](std::size_t run_index) {
                 RunRecord rec = execute_run(scenario, algorithm, run_index,
                                             config, nullptr);
                 std::lock_guard<std::mutex> lock(mutex);
                 if (rec.score_valid) ++valid_runs;
                 // Total order: valid before invalid, then score, then run
                 // index; min over a set, so worker count cannot matter.
                 const bool better =
                     !have_best ||
                     (rec.score_valid && !best.score_valid) ||
                     (rec.score_valid == best.score_valid &&
                      (rec.final_score < best.final_score ||
                       (rec.final_score == best.final_score &&
                        run_index < best_index)));
                 if (better) {
                   best = std::move(rec);
                   best_index = run_index;
                   have_best = true;
                 }
               });
  return {std::move(best), valid_runs};
}

std::vector<CatalogImprovement> update_catalog(
    const std::vector<RunRecord>& records, Catalog& catalog,
    const std::string& provenance_note) {
  std::vector<CatalogImprovement> events;
  for (const RunRecord& rec : records) {
    if (!rec.score_valid || rec.final_design.points.size() == 0) continue;
    const CatalogEntry* current = catalog.find(rec.scenario);
    const bool beats =
        current == nullptr ||
        rec.final_score < current->best_score * (1.0 - kCatalogRelTol);
    if (!beats) continue;

    // Never store a claimed score without re-deriving it from the design.
    const double actual = rescore(rec.scenario, rec.final_design);
    if (std::abs(actual - rec.final_score) >
        kCatalogRelTol * std::abs(rec.final_score))
      throw std::runtime_error(
          "update_catalog: record for k=" + std::to_string(rec.scenario.k) +
          " n=" + std::to_string(rec.scenario.n) + " " +
          to_string(rec.scenario.criterion) + " claims score " +
          format_double(rec.final_score) + " but its design re-scores to " +
          format_double(actual) + "; record rejected");

    CatalogImprovement ev;
    ev.scenario = rec.scenario;
    ev.new_score = rec.final_score;
    ev.inserted = current == nullptr;
    ev.old_score = current ? current->best_score
                           : std::numeric_limits<double>::quiet_NaN();

    CatalogEntry entry;
    entry.scenario = rec.scenario;
    entry.best_score = rec.final_score;
    entry.best_design = rec.final_design;
    entry.provenance =
        current ? current->provenance + " | " + provenance_note
                : provenance_note;
    catalog.upsert(std::move(entry));

    ev.description = std::string(ev.inserted ? "new entry" : "improved") +
                     " k=" + std::to_string(rec.scenario.k) +
                     " n=" + std::to_string(rec.scenario.n) + " " +
                     to_string(rec.scenario.criterion) + ": " +
                     (ev.inserted ? std::string("none")
                                  : format_double(ev.old_score)) +
                     " -> " + format_double(ev.new_score) + " (" +
                     to_string(rec.algorithm) + ", seed " +
                     std::to_string(rec.seed) + ")";
    events.push_back(std::move(ev));
  }
  return events;
}

void write_records_csv(const std::string& path,
                       const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "k,n,criterion,algorithm,seed,final_score,efficiency,passes,evals,"
         "wall_time_s\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const RunRecord& r : records) {
    out << r.scenario.k << ',' << r.scenario.n << ','
        << to_string(r.scenario.criterion) << ',' << to_string(r.algorithm)
        << ',' << r.seed << ',' << format_double(r.final_score) << ','
        << format_double(r.efficiency.value_or(nan)) << ','
        << r.passes_or_iters << ',' << r.evals << ','
        << format_double(r.wall_time_s) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty records file");

  std::vector<RunRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> f;
    std::string tok;
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 10)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected 10 fields, found " +
                               std::to_string(f.size()));
    RunRecord r;
    r.scenario.k = static_cast<int>(parse_double(f[0]));
    r.scenario.n = static_cast<int>(parse_double(f[1]));
    r.scenario.criterion = parse_criterion(f[2]);
    r.algorithm = parse_algorithm(f[3]);
    r.seed = std::stoull(f[4]);
    r.final_score = parse_double(f[5]);
    r.score_valid = std::isfinite(r.final_score);
    const double eff = parse_double(f[6]);
    if (std::isfinite(eff)) r.efficiency = eff;
    r.passes_or_iters = static_cast<int>(parse_double(f[7]));
    r.evals = std::stoull(f[8]);
    r.wall_time_s = parse_double(f[9]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_summary_csv(const std::string& path,
                       const std::vector<BenchmarkSummary>& summaries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "k,n,criterion,algorithm,n_run,p95,p100,best_found,mean_wall_time_s\n";
  for (const BenchmarkSummary& s : summaries) {
    out << s.scenario.k << ',' << s.scenario.n << ','
        << to_string(s.scenario.criterion) << ',' << to_string(s.algorithm)
        << ',' << s.n_run << ',' << format_double(s.p95_hat) << ','
        << format_double(s.p100_hat) << ',' << format_double(s.best_found)
        << ',' << format_double(s.mean_wall_time_s) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string settings_json(const ExchangeSettings& exchange,
                          const PsoSettings& pso) {
  return settings_to_json(exchange, pso).dump(2);
}

std::string settings_hash(const ExchangeSettings& exchange,
                          const PsoSettings& pso) {
  const std::uint64_t h = fnv1a(settings_to_json(exchange, pso).dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace optdes
