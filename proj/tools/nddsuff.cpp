// Data-sufficiency analysis for longitudinal driving logs: estimates how
// many samples are needed before the per-variable densities stop changing,
// generates synthetic car-following data, and sweeps the convergence
// threshold. Exit status: 0 converged, 2 not converged, 1 error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ndd/csv.hpp"
#include "ndd/events.hpp"
#include "ndd/ghr.hpp"
#include "ndd/report.hpp"
#include "ndd/sufficiency.hpp"

namespace {

struct AnalyzeOpts {
  std::vector<std::string> inputs;
  std::vector<std::string> variables{"v_e", "a_e", "delta_v", "delta_d"};
  std::string mode = "univariate";
  std::string out_dir = ".";
  double epsilon = 1e-4;
  long long block_size = 2000;
  double rate_hz = 10.0;
  int grid_points = 256;
  int grid_points_per_dim = 15;
  double pad_factor = 4.0;
  double max_distance = 120.0;
  double min_speed = 5.0;
  double min_duration = 30.0;
  int min_events = 300;
  bool pool_drivers = false;
};

void add_analysis_flags(CLI::App* cmd, AnalyzeOpts& opts) {
  cmd->add_option("input", opts.inputs, "input CSV log file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--block-size", opts.block_size,
                  "samples added per density re-estimation");
  cmd->add_option("--rate-hz", opts.rate_hz, "sample rate of the logs");
  cmd->add_option("--grid-points", opts.grid_points,
                  "grid resolution, univariate mode");
  cmd->add_option("--grid-points-per-dim", opts.grid_points_per_dim,
                  "per-axis grid resolution, multivariate mode");
  cmd->add_option("--pad-factor", opts.pad_factor,
                  "grid padding in bandwidths beyond the data range");
  cmd->add_option("--mode", opts.mode, "univariate or multivariate")
      ->check(CLI::IsMember({"univariate", "multivariate"}));
  cmd->add_option("--variables", opts.variables,
                  "subset of v_e,a_e,delta_v,delta_d")
      ->delimiter(',');
  cmd->add_option("--max-distance", opts.max_distance,
                  "car-following distance ceiling, m");
  cmd->add_option("--min-speed", opts.min_speed,
                  "minimum ego speed, m/s (strict)");
  cmd->add_option("--min-duration", opts.min_duration,
                  "minimum event duration, s");
  cmd->add_option("--min-events", opts.min_events,
                  "events per driver below which a warning is issued");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_flag("--pool-drivers", opts.pool_drivers,
                "analyze all drivers as one dataset");
}

ndd::sufficiency::SufficiencyConfig to_config(const AnalyzeOpts& opts) {
  ndd::sufficiency::SufficiencyConfig cfg;
  cfg.epsilon = opts.epsilon;
  cfg.block_size = opts.block_size;
  cfg.sample_rate_hz = opts.rate_hz;
  cfg.grid_points = opts.grid_points;
  cfg.grid_points_per_dim = opts.grid_points_per_dim;
  cfg.pad_factor = opts.pad_factor;
  cfg.mode = opts.mode == "multivariate"
                 ? ndd::sufficiency::Mode::MultivariateJoint
                 : ndd::sufficiency::Mode::Univariate;
  cfg.variables.clear();
  for (const auto& name : opts.variables) {
    cfg.variables.push_back(ndd::variable_from_name(name));
  }
  return cfg;
}

ndd::events::ScenarioRules to_rules(const AnalyzeOpts& opts) {
  ndd::events::ScenarioRules rules;
  rules.max_distance_m = opts.max_distance;
  rules.min_speed_mps = opts.min_speed;
  rules.min_duration_s = opts.min_duration;
  rules.min_events_per_driver = opts.min_events;
  rules.sample_rate_hz = opts.rate_hz;
  return rules;
}

struct LoadedData {
  ndd::report::Report base;  // config echo, extraction stats, warnings
  // Events per analysis unit: driver id, or "pooled".
  std::map<std::string, std::vector<ndd::CarFollowingEvent>> units;
};

LoadedData load_and_extract(const AnalyzeOpts& opts) {
  std::vector<ndd::SampleRecord> records;
  LoadedData data;
  data.base.config = to_config(opts);
  data.base.rules = to_rules(opts);
  data.base.pooled = opts.pool_drivers;

  for (const auto& path : opts.inputs) {
    ndd::csv::ParseResult parsed = ndd::csv::parse_log_file(path);
    for (const auto& err : parsed.row_errors) {
      std::cerr << path << ":" << err.line << ": " << err.message << "\n";
    }
    data.base.rows_total += parsed.rows_total;
    data.base.row_errors += static_cast<long long>(parsed.row_errors.size());
    records.insert(records.end(), parsed.records.begin(),
                   parsed.records.end());
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const ndd::SampleRecord& a, const ndd::SampleRecord& b) {
                     if (a.driver_id != b.driver_id)
                       return a.driver_id < b.driver_id;
                     if (a.trip_id != b.trip_id) return a.trip_id < b.trip_id;
                     return a.timestamp < b.timestamp;
                   });

  ndd::events::ExtractionResult extracted =
      ndd::events::extract_events(records, data.base.rules);
  data.base.per_driver = extracted.per_driver;
  data.base.warnings = extracted.warnings;
  if (data.base.row_errors > 0) {
    data.base.warnings.push_back(std::to_string(data.base.row_errors) +
                                 " malformed row(s) skipped, see stderr");
  }

  if (opts.pool_drivers) {
    data.units["pooled"] = std::move(extracted.events);
  } else {
    for (auto& ev : extracted.events) {
      data.units[ev.driver_id].push_back(std::move(ev));
    }
  }
  return data;
}

int cmd_analyze(const AnalyzeOpts& opts) {
  LoadedData data = load_and_extract(opts);
  for (auto& [unit_id, events] : data.units) {
    ndd::report::UnitReport unit;
    unit.unit_id = unit_id;
    unit.result = ndd::sufficiency::analyze(events, data.base.config);
    data.base.units.push_back(std::move(unit));
  }
  for (const auto& path : ndd::report::write_report(data.base, opts.out_dir)) {
    std::cout << "wrote " << path << "\n";
  }
  return data.base.all_converged() ? 0 : 2;
}

int cmd_sweep(const AnalyzeOpts& opts, const std::vector<double>& epsilons) {
  LoadedData data = load_and_extract(opts);
  ndd::report::SweepReport sweep;
  std::map<double, std::size_t> row_of;
  for (auto& [unit_id, events] : data.units) {
    auto rows = ndd::sufficiency::epsilon_sweep(events, data.base.config,
                                                epsilons);
    for (auto& [eps, result] : rows) {
      if (!row_of.count(eps)) {
        row_of[eps] = sweep.rows.size();
        sweep.rows.push_back({eps, {}});
      }
      sweep.rows[row_of[eps]].units.push_back({unit_id, std::move(result)});
    }
  }
  sweep.base = std::move(data.base);
  for (const auto& path : ndd::report::write_sweep(sweep, opts.out_dir)) {
    std::cout << "wrote " << path << "\n";
  }
  bool all = !sweep.rows.empty();
  for (const auto& row : sweep.rows) {
    for (const auto& unit : row.units) all = all && unit.result.converged;
  }
  return all ? 0 : 2;
}

int cmd_generate(const std::string& scenario_path, std::uint64_t seed,
                 const std::string& out_path) {
  ndd::ghr::Scenario scenario = scenario_path.empty()
                                    ? ndd::ghr::stationary_scenario()
                                    : ndd::ghr::load_scenario(scenario_path);
  const std::string csv = ndd::ghr::generate_dataset(scenario, seed);

  namespace fs = std::filesystem;
  const fs::path target(out_path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = out_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ndd::ConfigError("cannot write " + out_path);
    out << csv;
  }
  fs::rename(tmp, target);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"naturalistic-driving data sufficiency analyzer"};
  app.require_subcommand(1);

  AnalyzeOpts analyze_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "extract car-following events and find the minimal "
                 "sufficient data amount per variable");
  add_analysis_flags(analyze, analyze_opts);
  analyze->add_option("--epsilon", analyze_opts.epsilon,
                      "convergence threshold on consecutive KL values");

  AnalyzeOpts sweep_opts;
  std::vector<double> sweep_epsilons;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "analyze once, then report n* for several thresholds");
  add_analysis_flags(sweep, sweep_opts);
  sweep->add_option("--epsilon", sweep_epsilons,
                    "thresholds to sweep (repeat or comma-separate)")
      ->required()
      ->delimiter(',');

  std::string scenario_path;
  std::string generate_out = "dataset.csv";
  std::uint64_t seed = 1;
  CLI::App* generate = app.add_subcommand(
      "generate", "write a synthetic car-following dataset");
  generate->add_option("--scenario", scenario_path,
                       "scenario JSON (omit for the built-in one)")
      ->check(CLI::ExistingFile);
  generate->add_option("--seed", seed, "random seed");
  generate->add_option("--out", generate_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(analyze_opts);
    if (app.got_subcommand(sweep)) return cmd_sweep(sweep_opts, sweep_epsilons);
    return cmd_generate(scenario_path, seed, generate_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
