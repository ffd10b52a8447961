#pragma once

#include <map>
#include <string>
#include <vector>

#include "ndd/csv.hpp"
#include "ndd/events.hpp"
#include "ndd/sufficiency.hpp"

namespace ndd::report {

// One analysis unit: a single driver, or the pooled dataset.
struct UnitReport {
  std::string unit_id;  // driver id, or "pooled"
  sufficiency::SufficiencyResult result;
};

struct Report {
  int schema_version = 1;
  sufficiency::SufficiencyConfig config;
  events::ScenarioRules rules;
  bool pooled = false;
  long long rows_total = 0;
  long long row_errors = 0;
  std::map<std::string, events::DriverStats> per_driver;
  std::vector<std::string> warnings;
  std::vector<UnitReport> units;

  bool all_converged() const;
};

std::string to_json(const Report& report);

// report.json plus one plot table per trace (variable,n,t_minutes,kl with
// kl at six significant digits). Trace files are named
// trace_<variable>.csv, prefixed with the unit id when several units are
// present. Files are written to a temp name and renamed into place.
// Returns the paths written.
std::vector<std::string> write_report(const Report& report,
                                      const std::string& out_dir);

struct SweepRow {
  double epsilon = 0.0;
  std::vector<UnitReport> units;
};

struct SweepReport {
  Report base;  // config, extraction stats, warnings
  std::vector<SweepRow> rows;
};

std::string to_json(const SweepReport& report);

// sweep.json plus sweep.csv (epsilon, per-variable and overall n*/minutes).
std::vector<std::string> write_sweep(const SweepReport& report,
                                     const std::string& out_dir);

}  // namespace ndd::report
