#include "ndd/sufficiency.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace ndd::sufficiency {

namespace {

KLTrace trace_univariate(std::span<const double> samples,
                         const SufficiencyConfig& cfg) {
  const long long n_total = static_cast<long long>(samples.size());
  const long long m = cfg.block_size;
  if (n_total < 3 * m) {
    throw InsufficientDataError(
        "insufficient data for analysis: need at least " +
            std::to_string(3 * m) + " samples (3 blocks of " +
            std::to_string(m) + "), got " + std::to_string(n_total),
        3 * m);
  }

  // Freeze the grid from the full vector so every prefix pair is compared
  // on identical support.
  const double h_full = kde::silverman_bandwidth(samples);
  const kde::Grid grid =
      kde::build_grid(samples, cfg.grid_points, cfg.pad_factor, h_full);

  const long long blocks = n_total / m;
  KLTrace trace;
  trace.reserve(static_cast<std::size_t>(blocks - 1));

  auto estimate = [&](long long count) {
    auto prefix = samples.subspan(0, static_cast<std::size_t>(count));
    return kde::kde_univariate(prefix, grid, kde::silverman_bandwidth(prefix));
  };

  kde::DensityEstimate prev = estimate(m);
  for (long long k = 1; k + 1 <= blocks; ++k) {
    kde::DensityEstimate next = estimate((k + 1) * m);
    const kl::KLValue v = kl::kl_divergence(next, prev);
    trace.push_back({k * m, v.value});
    prev = std::move(next);
  }
  return trace;
}

KLTrace trace_multivariate(const std::vector<std::vector<double>>& columns,
                           const SufficiencyConfig& cfg) {
  if (columns.empty()) throw ConfigError("joint trace needs sample columns");
  const long long n_total = static_cast<long long>(columns[0].size());
  const long long m = cfg.block_size;
  if (n_total < 3 * m) {
    throw InsufficientDataError(
        "insufficient data for analysis: need at least " +
            std::to_string(3 * m) + " samples (3 blocks of " +
            std::to_string(m) + "), got " + std::to_string(n_total),
        3 * m);
  }

  const std::vector<double> h_full = kde::silverman_bandwidth(columns);
  const kde::Grid grid =
      kde::build_grid(columns, cfg.grid_points_per_dim, cfg.pad_factor, h_full);

  auto estimate = [&](long long count) {
    std::vector<std::vector<double>> prefix(columns.size());
    for (std::size_t d = 0; d < columns.size(); ++d) {
      prefix[d].assign(columns[d].begin(), columns[d].begin() + count);
    }
    return kde::kde_multivariate(prefix, grid,
                                 kde::silverman_bandwidth(prefix));
  };

  const long long blocks = n_total / m;
  KLTrace trace;
  trace.reserve(static_cast<std::size_t>(blocks - 1));

  kde::DensityEstimate prev = estimate(m);
  for (long long k = 1; k + 1 <= blocks; ++k) {
    kde::DensityEstimate next = estimate((k + 1) * m);
    const kl::KLValue v = kl::kl_divergence(next, prev);
    trace.push_back({k * m, v.value});
    prev = std::move(next);
  }
  return trace;
}

// Trace computation is epsilon-independent; analyze and epsilon_sweep share
// this and differ only in how often the crossing scan runs.
std::map<std::string, KLTrace> compute_traces(
    const std::vector<CarFollowingEvent>& events,
    const SufficiencyConfig& cfg) {
  std::map<std::string, KLTrace> traces;
  if (cfg.mode == Mode::MultivariateJoint) {
    std::vector<std::vector<double>> columns;
    columns.reserve(cfg.variables.size());
    for (Variable v : cfg.variables) {
      columns.push_back(events::pool_variable(events, v));
    }
    traces["joint"] = trace_multivariate(columns, cfg);
    return traces;
  }

  std::vector<std::pair<std::string, std::future<KLTrace>>> pending;
  for (Variable v : cfg.variables) {
    pending.emplace_back(
        variable_name(v),
        std::async(std::launch::async, [&events, &cfg, v] {
          const std::vector<double> pooled = events::pool_variable(events, v);
          return trace_univariate(pooled, cfg);
        }));
  }
  for (auto& [name, fut] : pending) traces[name] = fut.get();
  return traces;
}

SufficiencyResult assemble(const SufficiencyConfig& cfg,
                           const std::map<std::string, KLTrace>& traces,
                           double epsilon) {
  SufficiencyResult result;
  result.config = cfg;
  result.config.epsilon = epsilon;
  result.converged = true;
  result.overall_n_star = 0;

  for (const auto& [name, trace] : traces) {
    VariableResult vr;
    vr.trace = trace;
    if (auto n = find_n_star(trace, epsilon)) {
      vr.converged = true;
      vr.n_star = *n;
      vr.t_star_min = samples_to_minutes(*n, cfg.sample_rate_hz);
      result.overall_n_star = std::max(result.overall_n_star, *n);
    } else {
      result.converged = false;
      result.failed_variables.push_back(name);
    }
    result.per_variable[name] = std::move(vr);
  }

  if (result.converged) {
    result.overall_t_star_min =
        samples_to_minutes(result.overall_n_star, cfg.sample_rate_hz);
  } else {
    result.overall_n_star = 0;
    result.overall_t_star_min = 0.0;
  }
  return result;
}

}  // namespace

void SufficiencyConfig::validate() const {
  if (block_size < 1) throw ConfigError("block size must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
  if (grid_points < 2 || grid_points_per_dim < 2) {
    throw ConfigError("grids need at least 2 points per axis");
  }
  if (pad_factor < 0.0) throw ConfigError("pad factor must be >= 0");
  if (variables.empty()) throw ConfigError("no variables selected");
  for (std::size_t i = 0; i < variables.size(); ++i) {
    for (std::size_t j = i + 1; j < variables.size(); ++j) {
      if (variables[i] == variables[j]) {
        throw ConfigError("variable " + variable_name(variables[i]) +
                          " selected twice");
      }
    }
  }
}

KLTrace kl_trace(std::span<const double> samples,
                 const SufficiencyConfig& cfg) {
  cfg.validate();
  return trace_univariate(samples, cfg);
}

KLTrace kl_trace(const std::vector<std::vector<double>>& columns,
                 const SufficiencyConfig& cfg) {
  cfg.validate();
  return trace_multivariate(columns, cfg);
}

std::optional<long long> find_n_star(const KLTrace& trace, double epsilon) {
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    if (std::abs(trace[i].kl - trace[i + 1].kl) <= epsilon) {
      return trace[i].n;
    }
  }
  return std::nullopt;
}

SufficiencyResult analyze(const std::vector<CarFollowingEvent>& events,
                          const SufficiencyConfig& cfg) {
  cfg.validate();
  return assemble(cfg, compute_traces(events, cfg), cfg.epsilon);
}

std::vector<std::pair<double, SufficiencyResult>> epsilon_sweep(
    const std::vector<CarFollowingEvent>& events, const SufficiencyConfig& cfg,
    const std::vector<double>& epsilons) {
  cfg.validate();
  if (epsilons.empty()) throw ConfigError("epsilon sweep needs thresholds");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw ConfigError("sweep thresholds must be positive");
  }
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    for (std::size_t j = i + 1; j < epsilons.size(); ++j) {
      if (epsilons[i] == epsilons[j]) {
        throw ConfigError("sweep thresholds must be distinct");
      }
    }
  }

  const auto traces = compute_traces(events, cfg);
  std::vector<std::pair<double, SufficiencyResult>> rows;
  rows.reserve(epsilons.size());
  for (double e : epsilons) rows.emplace_back(e, assemble(cfg, traces, e));
  return rows;
}

double samples_to_minutes(long long n, double sample_rate_hz) {
  return static_cast<double>(n) / (sample_rate_hz * 60.0);
}

}  // namespace ndd::sufficiency
