#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndd/types.hpp"

namespace ndd::ghr {

// Follower acceleration law:
//   a(t) = c * v(t)^r * dv(t - T) / dx(t - T)^l
// T is the driver reaction time and must be an integer multiple of the
// integration step.
struct GhrParams {
  double c = 4.0;
  double r = 0.5;
  double l = 1.0;
  double reaction_time_s = 0.8;
};

// Lead-vehicle speed as piecewise segments, each starting where the
// previous one ended.
struct LeadSegment {
  enum class Kind { Constant, Ramp, Sine };
  Kind kind = Kind::Constant;
  double duration_s = 0.0;
  double to_speed = 0.0;     // Ramp: speed reached at segment end
  double amplitude = 0.0;    // Sine only
  double period_s = 10.0;    // Sine only
};

struct Interruption {
  double time_s = 0.0;
  double duration_s = 0.5;
  bool lane_change = false;  // otherwise cut_in
};

struct LeadProfile {
  double start_speed = 20.0;  // m/s, also the hold value of a leading Constant
  std::vector<LeadSegment> segments;
  std::vector<Interruption> interruptions;

  void validate() const;         // speeds >= 0, durations >= 0
  double speed_at(double t) const;
  double total_duration() const;
};

// Smooth acceleration disturbance: an Ornstein-Uhlenbeck process with
// stationary standard deviation std_mps2 and correlation time tau_s, so the
// sampled noise stays step-size consistent.
struct NoiseSpec {
  double std_mps2 = 0.0;  // zero disables noise
  double tau_s = 0.5;
};

struct SimConfig {
  double dt = 0.01;            // integration step, s
  double output_rate_hz = 10;  // emission rate; 1/(f*dt) must be integral
  double initial_speed = 20.0;
  double initial_spacing = 50.0;
  double duration_s = 60.0;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  std::string driver_id = "d01";
  std::string trip_id = "t01";
};

struct SimOutput {
  std::vector<SampleRecord> samples;
  long long speed_clamps = 0;  // times follower speed was held at zero
};

// Explicit-Euler integration of the follower against the lead profile.
// Throws CollisionError if spacing falls to 0.1 m.
SimOutput simulate(const GhrParams& params, const LeadProfile& lead,
                   const SimConfig& cfg);

struct TripSpec {
  std::string trip_id;
  LeadProfile lead;
  SimConfig sim;  // driver_id/trip_id/seed filled in by generate_dataset
};

struct DriverSpec {
  std::string driver_id;
  GhrParams params;
  std::vector<TripSpec> trips;
};

struct Scenario {
  std::vector<DriverSpec> drivers;
};

// Scenario file is a JSON tree; see README for the schema.
Scenario load_scenario(const std::string& path);

// One driver, many statistically identical trips: per-trip base speed,
// oscillation and spacing are drawn from a fixed recipe, so the pooled
// variables form a stationary stream. total_samples is the 10 Hz target.
Scenario stationary_scenario(long long total_samples = 120000);

// Small fixture with one scripted cut-in per trip at a known timestamp.
Scenario interruption_scenario();

// Renders every trip to the canonical CSV log format. Deterministic for a
// fixed (scenario, seed) pair.
std::string generate_dataset(const Scenario& scenario, std::uint64_t seed);

}  // namespace ndd::ghr
