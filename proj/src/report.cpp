#include "ndd/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ndd::report {

namespace {

using json = nlohmann::ordered_json;

std::string mode_name(sufficiency::Mode mode) {
  return mode == sufficiency::Mode::Univariate ? "univariate" : "multivariate";
}

json config_json(const sufficiency::SufficiencyConfig& cfg) {
  json j;
  j["epsilon"] = cfg.epsilon;
  j["block_size"] = cfg.block_size;
  j["rate_hz"] = cfg.sample_rate_hz;
  j["grid_points"] = cfg.grid_points;
  j["grid_points_per_dim"] = cfg.grid_points_per_dim;
  j["pad_factor"] = cfg.pad_factor;
  j["mode"] = mode_name(cfg.mode);
  json vars = json::array();
  for (Variable v : cfg.variables) vars.push_back(variable_name(v));
  j["variables"] = vars;
  return j;
}

json rules_json(const events::ScenarioRules& rules) {
  json j;
  j["max_distance_m"] = rules.max_distance_m;
  j["min_speed_mps"] = rules.min_speed_mps;
  j["min_duration_s"] = rules.min_duration_s;
  j["min_events_per_driver"] = rules.min_events_per_driver;
  j["sample_rate_hz"] = rules.sample_rate_hz;
  return j;
}

json unit_json(const UnitReport& unit) {
  const auto& res = unit.result;
  json j;
  j["unit"] = unit.unit_id;
  j["converged"] = res.converged;
  if (res.converged) {
    j["overall"] = {{"n_star", res.overall_n_star},
                    {"t_star_min", res.overall_t_star_min}};
  } else {
    j["overall"] = {{"n_star", nullptr}, {"t_star_min", nullptr}};
    j["failed_variables"] = res.failed_variables;
  }
  json vars;
  for (const auto& [name, vr] : res.per_variable) {
    json v;
    v["converged"] = vr.converged;
    if (vr.converged) {
      v["n_star"] = vr.n_star;
      v["t_star_min"] = vr.t_star_min;
    } else {
      v["n_star"] = nullptr;
      v["t_star_min"] = nullptr;
    }
    json trace = json::array();
    for (const auto& e : vr.trace) {
      trace.push_back(
          {{"n", e.n},
           {"t_min", sufficiency::samples_to_minutes(
                         e.n, res.config.sample_rate_hz)},
           {"kl", e.kl}});
    }
    v["trace"] = std::move(trace);
    vars[name] = std::move(v);
  }
  j["variables"] = std::move(vars);
  return j;
}

json base_json(const Report& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["config"] = config_json(report.config);
  j["rules"] = rules_json(report.rules);
  j["pooled"] = report.pooled;
  j["input"] = {{"rows_total", report.rows_total},
                {"row_errors", report.row_errors}};
  json drivers;
  for (const auto& [id, stats] : report.per_driver) {
    drivers[id] = {{"events", stats.n_events},
                   {"samples", stats.n_samples},
                   {"few_events_warning", stats.few_events_warning}};
  }
  j["extraction"] = {{"drivers", std::move(drivers)}};
  j["warnings"] = report.warnings;
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

std::string trace_csv(const std::string& variable,
                      const sufficiency::VariableResult& vr,
                      double sample_rate_hz) {
  std::ostringstream out;
  out << "variable,n,t_minutes,kl\n";
  char buf[64];
  for (const auto& e : vr.trace) {
    out << variable << ',' << e.n << ',';
    std::snprintf(buf, sizeof(buf), "%.6g",
                  sufficiency::samples_to_minutes(e.n, sample_rate_hz));
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", e.kl);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace

bool Report::all_converged() const {
  for (const auto& u : units) {
    if (!u.result.converged) return false;
  }
  return !units.empty();
}

std::string to_json(const Report& report) {
  json j = base_json(report);
  json results = json::array();
  for (const auto& unit : report.units) results.push_back(unit_json(unit));
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

std::vector<std::string> write_report(const Report& report,
                                      const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<std::string> written;
  const std::string report_path = (fs::path(out_dir) / "report.json").string();
  write_atomic(report_path, to_json(report));
  written.push_back(report_path);

  for (const auto& unit : report.units) {
    for (const auto& [name, vr] : unit.result.per_variable) {
      const std::string file =
          report.units.size() == 1
              ? "trace_" + name + ".csv"
              : "trace_" + unit.unit_id + "_" + name + ".csv";
      const std::string path = (fs::path(out_dir) / file).string();
      write_atomic(path,
                   trace_csv(name, vr, unit.result.config.sample_rate_hz));
      written.push_back(path);
    }
  }
  return written;
}

std::string to_json(const SweepReport& report) {
  json j = base_json(report.base);
  json sweep = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["epsilon"] = row.epsilon;
    json results = json::array();
    for (const auto& unit : row.units) results.push_back(unit_json(unit));
    r["results"] = std::move(results);
    sweep.push_back(std::move(r));
  }
  j["sweep"] = std::move(sweep);
  return j.dump(2) + "\n";
}

std::vector<std::string> write_sweep(const SweepReport& report,
                                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<std::string> written;
  const std::string json_path = (fs::path(out_dir) / "sweep.json").string();
  write_atomic(json_path, to_json(report));
  written.push_back(json_path);

  std::ostringstream csv;
  csv << "epsilon,unit,variable,converged,n_star,t_star_min\n";
  char buf[64];
  auto row = [&](double eps, const std::string& unit, const std::string& var,
                 bool conv, long long n_star, double t_star) {
    std::snprintf(buf, sizeof(buf), "%.6g", eps);
    csv << buf << ',' << unit << ',' << var << ',' << (conv ? 1 : 0) << ',';
    if (conv) {
      csv << n_star << ',';
      std::snprintf(buf, sizeof(buf), "%.6g", t_star);
      csv << buf << '\n';
    } else {
      csv << ",\n";
    }
  };
  for (const auto& r : report.rows) {
    for (const auto& unit : r.units) {
      for (const auto& [name, vr] : unit.result.per_variable) {
        row(r.epsilon, unit.unit_id, name, vr.converged, vr.n_star,
            vr.t_star_min);
      }
      row(r.epsilon, unit.unit_id, "overall", unit.result.converged,
          unit.result.overall_n_star, unit.result.overall_t_star_min);
    }
  }
  const std::string csv_path = (fs::path(out_dir) / "sweep.csv").string();
  write_atomic(csv_path, csv.str());
  written.push_back(csv_path);
  return written;
}

}  // namespace ndd::report
