#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndd {

// One 10 Hz observation of the longitudinal driving state. delta_d is empty
// when no preceding vehicle is tracked; that sentinel ends any event.
struct SampleRecord {
  double timestamp = 0.0;  // seconds, strictly increasing within a trip
  std::string driver_id;
  std::string trip_id;
  double v_e = 0.0;      // ego speed, m/s
  double a_e = 0.0;      // ego acceleration, m/s^2
  double delta_v = 0.0;  // preceding minus ego speed, m/s
  std::optional<double> delta_d;  // distance to preceding vehicle, m
  bool lane_change = false;
  bool cut_in = false;
};

// A contiguous run of samples that satisfies the car-following predicates.
struct CarFollowingEvent {
  std::string driver_id;
  std::string trip_id;
  std::vector<SampleRecord> samples;
  double duration = 0.0;  // seconds, counts one sample period per sample
};

enum class Variable { EgoSpeed, EgoAccel, RelSpeed, RelDistance };

inline constexpr Variable kAllVariables[] = {
    Variable::EgoSpeed, Variable::EgoAccel, Variable::RelSpeed,
    Variable::RelDistance};

std::string variable_name(Variable v);

// Throws ConfigError for anything other than v_e, a_e, delta_v, delta_d.
Variable variable_from_name(const std::string& name);

// Bad configuration: unknown column, unknown variable, invalid threshold.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data cannot support the requested analysis.
struct InsufficientDataError : std::runtime_error {
  InsufficientDataError(const std::string& msg, long long min_required_)
      : std::runtime_error(msg), min_required(min_required_) {}
  long long min_required = 0;
};

// Simulated spacing collapsed; the trajectory is physically meaningless.
struct CollisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ndd
