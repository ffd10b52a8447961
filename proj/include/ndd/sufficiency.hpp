#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ndd/divergence.hpp"
#include "ndd/events.hpp"
#include "ndd/types.hpp"

namespace ndd::sufficiency {

enum class Mode { Univariate, MultivariateJoint };

struct SufficiencyConfig {
  long long block_size = 2000;    // m, new samples per re-estimation
  double epsilon = 1e-4;          // convergence threshold on |KL_k - KL_{k+1}|
  double sample_rate_hz = 10.0;   // f, converts samples to driving minutes
  int grid_points = 256;          // univariate axis resolution
  int grid_points_per_dim = 15;   // multivariate axis resolution
  double pad_factor = 4.0;        // grid padding in bandwidths
  Mode mode = Mode::Univariate;
  std::vector<Variable> variables{kAllVariables,
                                  kAllVariables + std::size(kAllVariables)};

  void validate() const;  // throws ConfigError
};

struct TraceEntry {
  long long n = 0;  // prefix size; the paired KL compares n+m against n
  double kl = 0.0;
};

using KLTrace = std::vector<TraceEntry>;

struct VariableResult {
  bool converged = false;
  long long n_star = 0;      // valid when converged
  double t_star_min = 0.0;   // n_star/(f*60), valid when converged
  KLTrace trace;
};

struct SufficiencyResult {
  SufficiencyConfig config;
  // Keyed by variable name in univariate mode, "joint" in multivariate mode.
  std::map<std::string, VariableResult> per_variable;
  bool converged = false;
  long long overall_n_star = 0;    // max over per-variable n_star
  double overall_t_star_min = 0.0;
  std::vector<std::string> failed_variables;
};

// Grows the data in blocks of m and records KL(f(.; (k+1)m) || f(.; km))
// at n = km for k = 1, 2, ... Each prefix gets its own Silverman bandwidth;
// the grid is frozen from the full vector so every comparison shares one
// support. Throws InsufficientDataError below 3m samples.
KLTrace kl_trace(std::span<const double> samples, const SufficiencyConfig& cfg);

// Joint variant over equal-length columns, one per dimension.
KLTrace kl_trace(const std::vector<std::vector<double>>& columns,
                 const SufficiencyConfig& cfg);

// Smallest n whose consecutive trace pair satisfies |KL_k - KL_{k+1}| <=
// epsilon; nullopt when no pair qualifies.
std::optional<long long> find_n_star(const KLTrace& trace, double epsilon);

// Full procedure over extracted events: pool, trace, first crossing,
// max rule across variables, time conversion.
SufficiencyResult analyze(const std::vector<CarFollowingEvent>& events,
                          const SufficiencyConfig& cfg);

// One result per epsilon from a single trace computation; only the
// first-crossing scan reruns.
std::vector<std::pair<double, SufficiencyResult>> epsilon_sweep(
    const std::vector<CarFollowingEvent>& events, const SufficiencyConfig& cfg,
    const std::vector<double>& epsilons);

double samples_to_minutes(long long n, double sample_rate_hz);

}  // namespace ndd::sufficiency
