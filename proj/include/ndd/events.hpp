#pragma once

#include <map>
#include <string>
#include <vector>

#include "ndd/types.hpp"

namespace ndd::events {

// Thresholds defining the car-following scenario. A sample belongs to an
// event when delta_d is present and <= max_distance_m, v_e > min_speed_mps
// (strict), and neither interruption flag is set. Runs shorter than
// min_duration_s are discarded. A timestamp gap of two or more sample
// periods ends an event, so a single excluded sample always splits a run
// and re-extraction reproduces the same events.
struct ScenarioRules {
  double max_distance_m = 120.0;
  double min_speed_mps = 5.0;
  double min_duration_s = 30.0;
  int min_events_per_driver = 300;
  double sample_rate_hz = 10.0;
};

struct DriverStats {
  long long n_events = 0;
  long long n_samples = 0;
  bool few_events_warning = false;  // fewer than min_events_per_driver
};

struct ExtractionResult {
  std::vector<CarFollowingEvent> events;
  std::map<std::string, DriverStats> per_driver;
  std::vector<std::string> warnings;
};

// Input must be sorted by (driver_id, trip_id, timestamp). Empty input
// yields an empty result.
ExtractionResult extract_events(const std::vector<SampleRecord>& records,
                                const ScenarioRules& rules = {});

// Concatenates one variable across events in chronological order (events
// sorted by first timestamp, ties broken by driver then trip).
std::vector<double> pool_variable(const std::vector<CarFollowingEvent>& events,
                                  Variable which);

}  // namespace ndd::events
