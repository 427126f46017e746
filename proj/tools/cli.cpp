#include "cli.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "optdes/bench.hpp"
#include "optdes/io.hpp"
#include "optdes/rng.hpp"

namespace optdes::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct SharedFlags {
  ExchangeSettings exchange;
  PsoSettings pso;
  int threads = 0;
};

void attach_settings_flags(CLI::App* cmd, SharedFlags& s) {
  cmd->add_option("--threads", s.threads,
                  "Worker threads (0 = hardware concurrency); results do not "
                  "depend on this value")
      ->capture_default_str();
  cmd->add_option("--x-tol", s.exchange.solver.x_tol,
                  "Inner solver step tolerance")
      ->capture_default_str();
  cmd->add_option("--f-tol", s.exchange.solver.f_tol,
                  "Inner solver relative objective tolerance (0 = off)")
      ->capture_default_str();
  cmd->add_option("--max-evals", s.exchange.solver.max_evals,
                  "Inner solver evaluation budget (0 = 200 per dimension)")
      ->capture_default_str();
  cmd->add_option("--improvement-tol", s.exchange.improvement_tol,
                  "Relative decrease that counts as an accepted exchange")
      ->capture_default_str();
  cmd->add_option("--max-passes", s.exchange.max_passes,
                  "Cap on full exchange sweeps")
      ->capture_default_str();
  cmd->add_option("--swarm-size", s.pso.swarm_size, "PSO swarm size")
      ->capture_default_str();
  cmd->add_option("--iterations", s.pso.iterations, "PSO iterations")
      ->capture_default_str();
  cmd->add_option("--inertia-start", s.pso.inertia_start,
                  "PSO inertia at the first iteration")
      ->capture_default_str();
  cmd->add_option("--inertia-end", s.pso.inertia_end,
                  "PSO inertia at the last iteration")
      ->capture_default_str();
  cmd->add_option("--cognitive", s.pso.cognitive, "PSO cognitive coefficient")
      ->capture_default_str();
  cmd->add_option("--social", s.pso.social, "PSO social coefficient")
      ->capture_default_str();
  cmd->add_option("--vmax-fraction", s.pso.vmax_fraction,
                  "PSO speed cap as a fraction of the box width")
      ->capture_default_str();
}

json settings_echo(const SharedFlags& s) {
  return json::parse(settings_json(s.exchange, s.pso));
}

std::vector<Criterion> parse_criteria_list(const std::vector<std::string>& in) {
  std::vector<Criterion> out;
  for (const auto& tok : in) out.push_back(parse_criterion(tok));
  if (out.empty()) throw std::runtime_error("no criteria given");
  return out;
}

std::vector<Algorithm> parse_algorithm_list(
    const std::vector<std::string>& in) {
  std::vector<Algorithm> out;
  for (const auto& tok : in) out.push_back(parse_algorithm(tok));
  if (out.empty()) throw std::runtime_error("no algorithms given");
  return out;
}

// --scenarios accepts "standard" or a path to a JSON array of
// {"k":int,"n":int,"criterion":"D"|"I"} objects.
std::vector<Scenario> resolve_scenarios(const std::string& source,
                                        const std::vector<Criterion>& criteria) {
  std::vector<Scenario> out;
  if (source == "standard") {
    for (const Criterion c : criteria) {
      const auto scen = standard_scenarios(c);
      out.insert(out.end(), scen.begin(), scen.end());
    }
    return out;
  }
  std::ifstream in(source);
  if (!in)
    throw std::runtime_error("cannot open scenario file '" + source + "'");
  json doc;
  in >> doc;
  if (!doc.is_array())
    throw std::runtime_error("scenario file '" + source +
                             "': expected a JSON array");
  for (const auto& item : doc) {
    Scenario s;
    s.k = item.at("k").get<int>();
    s.n = item.at("n").get<int>();
    s.criterion = parse_criterion(item.at("criterion").get<std::string>());
    (void)s.spec();  // validates k and n
    if (!s.is_standard())
      std::fprintf(stderr,
                   "note: scenario k=%d n=%d %s is outside the standard grid\n",
                   s.k, s.n, to_string(s.criterion));
    out.push_back(s);
  }
  if (out.empty()) throw std::runtime_error("scenario file is empty");
  return out;
}

std::string sidecar_path(const std::string& out) {
  const fs::path p(out);
  if (p.extension() == ".csv") {
    fs::path q = p;
    q.replace_extension(".json");
    return q.string();
  }
  return out + ".json";
}

std::string utc_date() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%d", &tm);
  return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  int k = 0, n = 0;
  std::string criterion, algorithm = "cexch", out;
  int restarts = 100;
  std::uint64_t seed = 0;
  SharedFlags shared;
};

int cmd_generate(const GenerateArgs& args) {
  const Scenario scenario{args.k, args.n, parse_criterion(args.criterion)};
  const Algorithm algorithm = parse_algorithm(args.algorithm);

  BenchmarkConfig config;
  config.n_run = args.restarts;
  config.master_seed = args.seed;
  config.exchange = args.shared.exchange;
  config.pso = args.shared.pso;
  config.threads = args.shared.threads;

  const auto [best, valid_runs] = multistart_best(scenario, algorithm, config);
  if (!best.score_valid) {
    std::fprintf(stderr,
                 "error: all %d restarts produced singular designs for "
                 "k=%d n=%d %s\n",
                 args.restarts, args.k, args.n, to_string(scenario.criterion));
    return 1;
  }

  write_design_csv(args.out, best.final_design);

  const json sidecar{
      {"algorithm", to_string(algorithm)},
      {"best_run_seed", best.seed},
      {"criterion", to_string(scenario.criterion)},
      {"design_file", fs::path(args.out).filename().string()},
      {"efficiency_convention", kEfficiencyConvention},
      {"k", args.k},
      {"n", args.n},
      {"master_seed", args.seed},
      {"restarts", args.restarts},
      {"valid_restarts", valid_runs},
      {"score", best.final_score},
      {"passes_or_iters", best.passes_or_iters},
      {"evals", best.evals},
      {"settings", settings_echo(args.shared)},
      {"settings_hash", settings_hash(args.shared.exchange, args.shared.pso)},
      {"tool_version", kVersion}};
  std::ofstream side(sidecar_path(args.out));
  if (!side)
    throw std::runtime_error("cannot write '" + sidecar_path(args.out) + "'");
  side << sidecar.dump(2) << '\n';

  std::printf("k=%d n=%d %s %s: best score %s over %d restarts -> %s\n",
              args.k, args.n, to_string(scenario.criterion),
              to_string(algorithm), format_double(best.final_score).c_str(),
              args.restarts, args.out.c_str());
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string design_path;
  int k = 0;
  std::string criterion;
  std::string catalog_path;
};

int cmd_eval(const EvalArgs& args) {
  const Criterion criterion = parse_criterion(args.criterion);
  const Design d = read_design_csv(args.design_path, args.k);
  const ModelSpec spec(args.k, d.runs());

  CriterionScore score;
  if (criterion == Criterion::D) {
    score = d_score(d, spec);
  } else {
    score = i_score(d, spec, moments_matrix(spec));
  }

  json out{{"design_file", args.design_path},
           {"k", args.k},
           {"n", d.runs()},
           {"criterion", to_string(criterion)},
           {"valid", score.valid},
           {"efficiency_convention", kEfficiencyConvention}};
  if (score.valid) {
    out["score"] = score.value;
    out["log_det_m"] = score.log_det_m;
  } else {
    out["score"] = nullptr;
    out["log_det_m"] = nullptr;
  }

  if (!args.catalog_path.empty()) {
    const Catalog catalog = Catalog::load(args.catalog_path);
    const CatalogEntry* entry =
        catalog.find({args.k, d.runs(), criterion});
    if (entry == nullptr) {
      std::fprintf(stderr,
                   "warning: catalog has no entry for k=%d n=%d %s\n", args.k,
                   d.runs(), to_string(criterion));
      out["efficiency"] = nullptr;
    } else if (score.valid) {
      const CriterionScore best{entry->best_score, true, 0.0};
      const double eff = efficiency(score, best, criterion, spec);
      out["efficiency"] = eff;
      if (eff > 1.0)
        std::fprintf(stderr,
                     "note: design beats the catalog entry (efficiency %s)\n",
                     format_double(eff).c_str());
    } else {
      out["efficiency"] = nullptr;
    }
  }

  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkArgs {
  std::string scenarios = "standard";
  std::vector<std::string> algorithms{"cexch", "rexch", "pso"};
  std::vector<std::string> criteria{"D", "I"};
  int nrun = 500;
  std::uint64_t seed = 0;
  std::string catalog_path;
  std::string out_dir;
  std::string timing = "wall";
  SharedFlags shared;
};

int cmd_benchmark(const BenchmarkArgs& args) {
  const auto criteria = parse_criteria_list(args.criteria);
  const auto algorithms = parse_algorithm_list(args.algorithms);
  const auto scenarios = resolve_scenarios(args.scenarios, criteria);

  std::optional<Catalog> catalog;
  if (!args.catalog_path.empty()) catalog = Catalog::load(args.catalog_path);

  BenchmarkConfig config;
  config.n_run = args.nrun;
  config.master_seed = args.seed;
  config.exchange = args.shared.exchange;
  config.pso = args.shared.pso;
  config.threads = args.shared.threads;
  config.measure_time = args.timing != "none";

  const BenchmarkResult result = run_benchmark(
      scenarios, algorithms, config, catalog ? &*catalog : nullptr);

  for (const auto& s : result.summaries)
    if (std::isnan(s.p95_hat))
      std::fprintf(stderr,
                   "warning: no catalog entry for k=%d n=%d %s; efficiency "
                   "unavailable\n",
                   s.scenario.k, s.scenario.n, to_string(s.scenario.criterion));

  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);
  write_records_csv((dir / "records.csv").string(), result.records);
  write_summary_csv((dir / "summary.csv").string(), result.summaries);

  json cells = json::array();
  for (const auto& s : result.summaries)
    cells.push_back(json{{"k", s.scenario.k},
                         {"n", s.scenario.n},
                         {"criterion", to_string(s.scenario.criterion)},
                         {"algorithm", to_string(s.algorithm)},
                         {"median_wall_time_s", s.median_wall_time_s},
                         {"mean_wall_time_s", s.mean_wall_time_s}});
  const json metadata{{"command", "benchmark"},
                      {"tool_version", kVersion},
                      {"master_seed", args.seed},
                      {"n_run", args.nrun},
                      {"threads", args.shared.threads},
                      {"timing", args.timing},
                      {"algorithms", args.algorithms},
                      {"criteria", args.criteria},
                      {"scenarios", args.scenarios},
                      {"catalog", args.catalog_path.empty()
                                      ? json(nullptr)
                                      : json(args.catalog_path)},
                      {"settings", settings_echo(args.shared)},
                      {"settings_hash",
                       settings_hash(args.shared.exchange, args.shared.pso)},
                      {"wall_times", cells},
                      {"records_file", "records.csv"},
                      {"summary_file", "summary.csv"}};
  std::ofstream meta(dir / "metadata.json");
  if (!meta) throw std::runtime_error("cannot write metadata.json");
  meta << metadata.dump(2) << '\n';

  std::printf("wrote %zu records and %zu summary rows to %s\n",
              result.records.size(), result.summaries.size(),
              args.out_dir.c_str());
  return 0;
}

// ----------------------------------------------------------------- catalog

struct CatalogVerifyArgs {
  std::string catalog_path;
};

int cmd_catalog_verify(const CatalogVerifyArgs& args) {
  Catalog catalog;
  try {
    catalog = Catalog::load(args.catalog_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "catalog verification failed: %s\n", e.what());
    return 1;
  }
  const auto problems = catalog.verify();
  for (const auto& p : problems)
    std::fprintf(stderr, "catalog problem: %s\n", p.c_str());
  if (!problems.empty()) return 1;

  for (const auto& [scenario, entry] : catalog.entries())
    std::printf("ok k=%d n=%d %s score=%s\n", scenario.k, scenario.n,
                to_string(scenario.criterion),
                format_double(entry.best_score).c_str());
  std::printf("catalog ok: %zu entries verified\n", catalog.size());
  return 0;
}

struct CatalogUpdateArgs {
  std::string catalog_path;
  std::string scenarios = "standard";
  std::vector<std::string> algorithms{"cexch", "rexch", "pso"};
  std::vector<std::string> criteria{"D", "I"};
  int restarts = 1000;
  int pso_restarts = 140;
  std::uint64_t seed = 0;
  std::string note;
  SharedFlags shared;
};

int cmd_catalog_update(const CatalogUpdateArgs& args) {
  const auto criteria = parse_criteria_list(args.criteria);
  const auto algorithms = parse_algorithm_list(args.algorithms);
  const auto scenarios = resolve_scenarios(args.scenarios, criteria);

  Catalog catalog;
  if (fs::exists(args.catalog_path)) catalog = Catalog::load(args.catalog_path);

  const std::string hash =
      settings_hash(args.shared.exchange, args.shared.pso);

  int improvements = 0;
  for (const Scenario& scenario : scenarios) {
    for (const Algorithm algorithm : algorithms) {
      BenchmarkConfig config;
      config.n_run =
          algorithm == Algorithm::pso ? args.pso_restarts : args.restarts;
      if (config.n_run <= 0) continue;
      config.master_seed = args.seed;
      config.exchange = args.shared.exchange;
      config.pso = args.shared.pso;
      config.threads = args.shared.threads;

      const auto [best, valid_runs] =
          multistart_best(scenario, algorithm, config);
      if (!best.score_valid) {
        std::fprintf(stderr,
                     "warning: no valid run for k=%d n=%d %s under %s\n",
                     scenario.k, scenario.n, to_string(scenario.criterion),
                     to_string(algorithm));
        continue;
      }

      std::string provenance =
          "optdes catalog update " + utc_date() + ": " + to_string(algorithm) +
          " x" + std::to_string(config.n_run) + ", master seed " +
          std::to_string(args.seed) + ", settings " + hash +
          ", eff-convention {" + kEfficiencyConvention + "}";
      if (!args.note.empty()) provenance += ", note: " + args.note;

      const auto events = update_catalog({best}, catalog, provenance);
      for (const auto& ev : events) {
        std::printf("%s\n", ev.description.c_str());
        ++improvements;
      }
    }
    std::fflush(stdout);
  }

  catalog.save(args.catalog_path);
  std::printf("catalog now has %zu entries (%d improvements); saved to %s\n",
              catalog.size(), improvements, args.catalog_path.c_str());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "optdes: exact optimal experimental designs for the full second-order "
      "model on the hypercube (D- and I-criterion; coordinate exchange, row "
      "exchange and particle swarm), plus a multistart benchmark harness"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Multistart search for a good design");
  generate->add_option("--k", gen.k, "Number of factors")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--n", gen.n, "Number of runs")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--criterion", gen.criterion, "D or I")
      ->required()
      ->check(CLI::IsMember({"D", "I", "d", "i"}));
  generate
      ->add_option("--algorithm", gen.algorithm,
                   "cexch (element exchange), rexch (row exchange) or pso")
      ->check(CLI::IsMember({"cexch", "rexch", "pso", "cexch_element",
                             "exch_row"}))
      ->capture_default_str();
  generate->add_option("--restarts", gen.restarts, "Independent starts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--seed", gen.seed, "Master seed")
      ->capture_default_str();
  generate->add_option("--out", gen.out, "Output design CSV path")->required();
  attach_settings_flags(generate, gen.shared);

  EvalArgs ev;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Score a design file under a criterion");
  eval_cmd->add_option("--design", ev.design_path, "Design CSV path")
      ->required();
  eval_cmd->add_option("--k", ev.k, "Number of factors")
      ->required()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--criterion", ev.criterion, "D or I")
      ->required()
      ->check(CLI::IsMember({"D", "I", "d", "i"}));
  eval_cmd->add_option("--catalog", ev.catalog_path,
                       "Catalog JSON for efficiency reporting");

  BenchmarkArgs bench;
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Estimate success probabilities over repeated runs");
  benchmark->add_option("--scenarios", bench.scenarios,
                        "'standard' or a scenario JSON file")
      ->capture_default_str();
  benchmark
      ->add_option("--algorithms", bench.algorithms,
                   "Comma-separated list from cexch,rexch,pso")
      ->delimiter(',')
      ->capture_default_str();
  benchmark
      ->add_option("--criteria", bench.criteria,
                   "Comma-separated list from D,I (standard scenarios only)")
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--nrun", bench.nrun, "Runs per scenario/algorithm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  benchmark->add_option("--seed", bench.seed, "Master seed")
      ->capture_default_str();
  benchmark->add_option("--catalog", bench.catalog_path,
                        "Catalog JSON used as the efficiency reference");
  benchmark->add_option("--out-dir", bench.out_dir, "Output directory")
      ->required();
  benchmark
      ->add_option("--timing", bench.timing,
                   "'wall' measures per-run wall time; 'none' writes zeros "
                   "for byte-stable output")
      ->check(CLI::IsMember({"wall", "none"}))
      ->capture_default_str();
  attach_settings_flags(benchmark, bench.shared);

  CLI::App* catalog_cmd =
      app.add_subcommand("catalog", "Best-known catalog maintenance");
  catalog_cmd->require_subcommand(1);

  CatalogVerifyArgs cver;
  CLI::App* verify = catalog_cmd->add_subcommand(
      "verify", "Re-score every entry against its stored score");
  verify->add_option("--catalog", cver.catalog_path, "Catalog JSON path")
      ->required();

  CatalogUpdateArgs cupd;
  CLI::App* update = catalog_cmd->add_subcommand(
      "update", "Run multistarts and fold improvements into the catalog");
  update->add_option("--catalog", cupd.catalog_path, "Catalog JSON path")
      ->required();
  update->add_option("--scenarios", cupd.scenarios,
                     "'standard' or a scenario JSON file")
      ->capture_default_str();
  update
      ->add_option("--algorithms", cupd.algorithms,
                   "Comma-separated list from cexch,rexch,pso")
      ->delimiter(',')
      ->capture_default_str();
  update
      ->add_option("--criteria", cupd.criteria,
                   "Comma-separated list from D,I (standard scenarios only)")
      ->delimiter(',')
      ->capture_default_str();
  update
      ->add_option("--restarts", cupd.restarts,
                   "Independent starts per exchange algorithm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  update
      ->add_option("--pso-restarts", cupd.pso_restarts,
                   "Independent starts for pso (0 skips pso)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  update->add_option("--seed", cupd.seed, "Master seed")->capture_default_str();
  update->add_option("--note", cupd.note, "Extra provenance text");
  attach_settings_flags(update, cupd.shared);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (eval_cmd->parsed()) return cmd_eval(ev);
    if (benchmark->parsed()) return cmd_benchmark(bench);
    if (catalog_cmd->parsed()) {
      if (verify->parsed()) return cmd_catalog_verify(cver);
      if (update->parsed()) return cmd_catalog_update(cupd);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace optdes::cli
