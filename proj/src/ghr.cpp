#include "ndd/ghr.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "ndd/csv.hpp"
#include "json.hpp"

namespace ndd::ghr {

namespace {

constexpr double kCollisionSpacing = 0.1;  // m; GHR is singular at zero gap

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t trip_seed(std::uint64_t seed, std::size_t driver,
                        std::size_t trip) {
  return splitmix(seed ^ splitmix(driver + 1) ^ splitmix((trip + 1) * 0x9d5ull));
}

// v^r with the speed clamped at zero; negative exponents get a zero factor
// instead of an infinity.
double speed_term(double v, double r) {
  if (v <= 0.0) return r == 0.0 ? 1.0 : 0.0;
  return std::pow(v, r);
}

long long exact_multiple(double value, double dt, const char* what) {
  const double steps = value / dt;
  const long long rounded = std::llround(steps);
  if (rounded < 0 || std::abs(steps - static_cast<double>(rounded)) > 1e-6) {
    throw ConfigError(std::string(what) +
                      " must be a nonnegative integer multiple of dt");
  }
  return rounded;
}

}  // namespace

void LeadProfile::validate() const {
  if (start_speed < 0.0) throw ConfigError("lead start speed must be >= 0");
  double speed = start_speed;
  for (const auto& seg : segments) {
    if (seg.duration_s < 0.0) throw ConfigError("segment duration must be >= 0");
    switch (seg.kind) {
      case LeadSegment::Kind::Constant:
        break;
      case LeadSegment::Kind::Ramp:
        if (seg.to_speed < 0.0) throw ConfigError("ramp target must be >= 0");
        speed = seg.to_speed;
        break;
      case LeadSegment::Kind::Sine:
        if (seg.period_s <= 0.0) throw ConfigError("sine period must be > 0");
        if (speed - std::abs(seg.amplitude) < 0.0) {
          throw ConfigError("sine amplitude drives lead speed negative");
        }
        break;
    }
  }
  for (const auto& itr : interruptions) {
    if (itr.time_s < 0.0 || itr.duration_s < 0.0) {
      throw ConfigError("interruption times must be >= 0");
    }
  }
}

double LeadProfile::speed_at(double t) const {
  double speed = start_speed;
  double t0 = 0.0;
  for (const auto& seg : segments) {
    const double t1 = t0 + seg.duration_s;
    const bool inside = t < t1;
    switch (seg.kind) {
      case LeadSegment::Kind::Constant:
        if (inside) return speed;
        break;
      case LeadSegment::Kind::Ramp:
        if (inside) {
          const double frac = seg.duration_s > 0.0 ? (t - t0) / seg.duration_s : 1.0;
          return speed + frac * (seg.to_speed - speed);
        }
        speed = seg.to_speed;
        break;
      case LeadSegment::Kind::Sine:
        if (inside) {
          return speed + seg.amplitude *
                             std::sin(2.0 * std::numbers::pi * (t - t0) /
                                      seg.period_s);
        }
        break;
    }
    t0 = t1;
  }
  return speed;  // hold beyond the last segment
}

double LeadProfile::total_duration() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration_s;
  return total;
}

SimOutput simulate(const GhrParams& params, const LeadProfile& lead,
                   const SimConfig& cfg) {
  if (!std::isfinite(params.c) || !std::isfinite(params.r) ||
      !std::isfinite(params.l)) {
    throw ConfigError("model constants must be finite");
  }
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.initial_spacing > 0.0)) {
    throw ConfigError("initial spacing must be positive");
  }
  if (!(cfg.duration_s > 0.0)) throw ConfigError("duration must be positive");
  if (!(cfg.output_rate_hz > 0.0)) throw ConfigError("output rate must be > 0");
  lead.validate();

  const long long delay_steps =
      exact_multiple(params.reaction_time_s, cfg.dt, "reaction time");
  const long long out_every =
      exact_multiple(1.0 / cfg.output_rate_hz, cfg.dt, "output period");
  if (out_every == 0) throw ConfigError("output rate exceeds 1/dt");
  const long long steps = exact_multiple(cfg.duration_s, cfg.dt, "duration");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit;
  const bool noisy = cfg.noise.std_mps2 > 0.0;
  const double decay = noisy ? std::exp(-cfg.dt / cfg.noise.tau_s) : 0.0;
  const double kick =
      noisy ? cfg.noise.std_mps2 * std::sqrt(1.0 - decay * decay) : 0.0;
  double eta = noisy ? cfg.noise.std_mps2 * unit(rng) : 0.0;

  double v_f = cfg.initial_speed;
  double spacing = cfg.initial_spacing;

  // Delayed terms come from a history of (dv, dx); before the run starts the
  // state is assumed to have been at its initial values.
  std::vector<double> hist_dv(static_cast<std::size_t>(steps));
  std::vector<double> hist_dx(static_cast<std::size_t>(steps));

  SimOutput out;
  out.samples.reserve(static_cast<std::size_t>(steps / out_every + 1));

  for (long long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    const double v_l = lead.speed_at(t);

    hist_dv[static_cast<std::size_t>(i)] = v_l - v_f;
    hist_dx[static_cast<std::size_t>(i)] = spacing;
    const std::size_t di =
        static_cast<std::size_t>(i >= delay_steps ? i - delay_steps : 0);

    double accel = params.c * speed_term(v_f, params.r) * hist_dv[di] /
                   std::pow(hist_dx[di], params.l);
    if (noisy) {
      accel += eta;
      eta = decay * eta + kick * unit(rng);
    }

    if (i % out_every == 0) {
      SampleRecord rec;
      rec.timestamp =
          static_cast<double>(i / out_every) / cfg.output_rate_hz;
      rec.driver_id = cfg.driver_id;
      rec.trip_id = cfg.trip_id;
      rec.v_e = v_f;
      rec.a_e = accel;
      rec.delta_v = v_l - v_f;
      rec.delta_d = spacing;
      for (const auto& itr : lead.interruptions) {
        if (t >= itr.time_s && t < itr.time_s + itr.duration_s) {
          (itr.lane_change ? rec.lane_change : rec.cut_in) = true;
        }
      }
      out.samples.push_back(std::move(rec));
    }

    // Forward Euler on both vehicles; spacing integrates the closing speed.
    spacing += (v_l - v_f) * cfg.dt;
    v_f += accel * cfg.dt;
    if (v_f < 0.0) {
      v_f = 0.0;
      ++out.speed_clamps;
    }
    if (spacing <= kCollisionSpacing) {
      std::ostringstream msg;
      msg << "collision: spacing reached " << spacing << " m at t=" << t
          << " s (driver " << cfg.driver_id << ", trip " << cfg.trip_id << ")";
      throw CollisionError(msg.str());
    }
  }
  return out;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file " + path + ": " + e.what());
  }

  try {
    Scenario scenario;
    for (const auto& jd : root.at("drivers")) {
      DriverSpec drv;
      drv.driver_id = jd.at("driver_id").get<std::string>();
      if (jd.contains("params")) {
        const auto& jp = jd.at("params");
        drv.params.c = jp.value("c", drv.params.c);
        drv.params.r = jp.value("r", drv.params.r);
        drv.params.l = jp.value("l", drv.params.l);
        drv.params.reaction_time_s =
            jp.value("reaction_time_s", drv.params.reaction_time_s);
      }
      for (const auto& jt : jd.at("trips")) {
        TripSpec trip;
        trip.trip_id = jt.at("trip_id").get<std::string>();
        trip.sim.dt = jt.value("dt", trip.sim.dt);
        trip.sim.output_rate_hz =
            jt.value("output_rate_hz", trip.sim.output_rate_hz);
        trip.sim.duration_s = jt.at("duration_s").get<double>();
        trip.sim.initial_speed = jt.value("initial_speed", 20.0);
        trip.sim.initial_spacing = jt.value("initial_spacing", 50.0);
        if (jt.contains("noise")) {
          trip.sim.noise.std_mps2 = jt.at("noise").value("std_mps2", 0.0);
          trip.sim.noise.tau_s = jt.at("noise").value("tau_s", 0.5);
        }
        const auto& jl = jt.at("lead");
        trip.lead.start_speed = jl.value("start_speed", 20.0);
        if (jl.contains("segments")) {
          for (const auto& js : jl.at("segments")) {
            LeadSegment seg;
            const std::string kind = js.at("kind").get<std::string>();
            if (kind == "constant") {
              seg.kind = LeadSegment::Kind::Constant;
            } else if (kind == "ramp") {
              seg.kind = LeadSegment::Kind::Ramp;
              seg.to_speed = js.at("to_speed").get<double>();
            } else if (kind == "sine") {
              seg.kind = LeadSegment::Kind::Sine;
              seg.amplitude = js.at("amplitude").get<double>();
              seg.period_s = js.at("period_s").get<double>();
            } else {
              throw ConfigError("unknown lead segment kind '" + kind + "'");
            }
            seg.duration_s = js.at("duration_s").get<double>();
            trip.lead.segments.push_back(seg);
          }
        }
        if (jt.contains("interruptions")) {
          for (const auto& ji : jt.at("interruptions")) {
            Interruption itr;
            itr.time_s = ji.at("time_s").get<double>();
            itr.duration_s = ji.value("duration_s", 0.5);
            const std::string flag = ji.value("flag", std::string("cut_in"));
            if (flag == "lane_change") {
              itr.lane_change = true;
            } else if (flag != "cut_in") {
              throw ConfigError("unknown interruption flag '" + flag + "'");
            }
            trip.lead.interruptions.push_back(itr);
          }
        }
        drv.trips.push_back(std::move(trip));
      }
      scenario.drivers.push_back(std::move(drv));
    }
    if (scenario.drivers.empty()) throw ConfigError("scenario has no drivers");
    return scenario;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file " + path + ": " + e.what());
  }
}

Scenario stationary_scenario(long long total_samples) {
  // Statistically identical trips: per-trip levels are drawn from a fixed
  // recipe with a constant generator, so the pooled stream is stationary in
  // trip-sized blocks no matter how many trips are requested. Trip levels
  // overlap heavily; richness comes from the oscillation mix and the
  // acceleration noise rather than from disjoint speed regimes.
  constexpr double kTripSeconds = 200.0;
  constexpr double kRateHz = 10.0;
  const long long per_trip = static_cast<long long>(kTripSeconds * kRateHz);
  const long long n_trips = (total_samples + per_trip - 1) / per_trip;

  std::mt19937_64 recipe(0x5d5f0001ull);
  std::uniform_real_distribution<double> base_speed(19.0, 22.0);
  std::uniform_real_distribution<double> amplitude(0.5, 3.0);
  std::uniform_real_distribution<double> period(15.0, 60.0);
  std::uniform_real_distribution<double> spacing(50.0, 60.0);
  std::uniform_real_distribution<double> sine_len(20.0, 50.0);
  std::uniform_real_distribution<double> brake(2.0, 6.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Scenario scenario;
  DriverSpec drv;
  drv.driver_id = "d01";
  drv.params = {4.0, 0.5, 1.0, 0.8};
  for (long long i = 0; i < n_trips; ++i) {
    TripSpec trip;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "t%03lld", i + 1);
    trip.trip_id = buf;
    trip.sim.duration_s = kTripSeconds;
    trip.sim.output_rate_hz = kRateHz;
    const double v0 = base_speed(recipe);
    trip.sim.initial_speed = v0;
    trip.sim.initial_spacing = spacing(recipe);
    // skewed noise-scale mixture: calm trips are common, rough ones rare
    const double u = unit(recipe);
    trip.sim.noise = {0.15 + 0.6 * u * u, 0.5};
    trip.lead.start_speed = v0;
    auto& segs = trip.lead.segments;
    segs.push_back({LeadSegment::Kind::Constant, 10.0, 0.0, 0.0, 0.0});
    double remaining = kTripSeconds - 10.0;
    while (remaining > 0.0) {
      if (unit(recipe) < 0.3) {
        // braking episode: slow down, hold, recover to the base speed
        const double dip = brake(recipe);
        segs.push_back({LeadSegment::Kind::Ramp, 3.0, v0 - dip, 0.0, 0.0});
        segs.push_back({LeadSegment::Kind::Constant, 2.0, 0.0, 0.0, 0.0});
        segs.push_back({LeadSegment::Kind::Ramp, 4.0, v0, 0.0, 0.0});
        remaining -= 9.0;
      } else {
        const double len = std::min(sine_len(recipe), remaining);
        segs.push_back({LeadSegment::Kind::Sine, len, 0.0, amplitude(recipe),
                        period(recipe)});
        remaining -= len;
      }
    }
    drv.trips.push_back(std::move(trip));
  }
  scenario.drivers.push_back(std::move(drv));
  return scenario;
}

Scenario interruption_scenario() {
  Scenario scenario;
  DriverSpec drv;
  drv.driver_id = "d01";
  drv.params = {4.0, 0.5, 1.0, 0.8};

  TripSpec trip;
  trip.trip_id = "t001";
  trip.sim.duration_s = 100.0;
  trip.sim.initial_speed = 22.0;
  trip.sim.initial_spacing = 55.0;
  trip.lead.start_speed = 22.0;
  trip.lead.segments.push_back(
      {LeadSegment::Kind::Sine, 100.0, 0.0, 1.5, 30.0});
  trip.lead.interruptions.push_back({35.0, 0.5, false});  // cut-in at t=35 s
  drv.trips.push_back(std::move(trip));

  scenario.drivers.push_back(std::move(drv));
  return scenario;
}

std::string generate_dataset(const Scenario& scenario, std::uint64_t seed) {
  std::vector<SampleRecord> all;
  for (std::size_t d = 0; d < scenario.drivers.size(); ++d) {
    const auto& drv = scenario.drivers[d];
    for (std::size_t t = 0; t < drv.trips.size(); ++t) {
      SimConfig cfg = drv.trips[t].sim;
      cfg.driver_id = drv.driver_id;
      cfg.trip_id = drv.trips[t].trip_id;
      cfg.seed = trip_seed(seed, d, t);
      SimOutput sim = simulate(drv.params, drv.trips[t].lead, cfg);
      all.insert(all.end(), sim.samples.begin(), sim.samples.end());
    }
  }
  std::ostringstream out;
  csv::write_log(out, all);
  return out.str();
}

}  // namespace ndd::ghr
