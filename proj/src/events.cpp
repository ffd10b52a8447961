#include "ndd/events.hpp"

#include <algorithm>

namespace ndd::events {

namespace {

bool satisfies(const SampleRecord& r, const ScenarioRules& rules) {
  return r.delta_d.has_value() && *r.delta_d <= rules.max_distance_m &&
         r.v_e > rules.min_speed_mps && !r.lane_change && !r.cut_in;
}

bool same_trip(const SampleRecord& a, const SampleRecord& b) {
  return a.driver_id == b.driver_id && a.trip_id == b.trip_id;
}

}  // namespace

ExtractionResult extract_events(const std::vector<SampleRecord>& records,
                                const ScenarioRules& rules) {
  if (rules.sample_rate_hz <= 0.0) {
    throw ConfigError("sample rate must be positive");
  }
  if (rules.max_distance_m <= 0.0 || rules.min_duration_s < 0.0) {
    throw ConfigError("scenario thresholds must be positive");
  }

  const double period = 1.0 / rules.sample_rate_hz;
  // One missing sample (a two-period step) splits; half a period of slack
  // absorbs timestamp jitter.
  const double max_gap = 1.5 * period;

  ExtractionResult out;
  std::vector<SampleRecord> run;

  auto flush = [&] {
    if (!run.empty()) {
      const double duration =
          run.back().timestamp - run.front().timestamp + period;
      if (duration >= rules.min_duration_s) {
        CarFollowingEvent ev;
        ev.driver_id = run.front().driver_id;
        ev.trip_id = run.front().trip_id;
        ev.duration = duration;
        ev.samples = std::move(run);
        out.events.push_back(std::move(ev));
      }
      run.clear();
    }
  };

  for (const auto& rec : records) {
    out.per_driver[rec.driver_id];  // every driver appears in the stats

    if (!run.empty()) {
      const double dt = rec.timestamp - run.back().timestamp;
      if (!same_trip(run.back(), rec) || dt <= 0.0 || dt > max_gap) flush();
    }
    if (satisfies(rec, rules)) {
      run.push_back(rec);
    } else {
      flush();
    }
  }
  flush();

  for (const auto& ev : out.events) {
    auto& stats = out.per_driver[ev.driver_id];
    stats.n_events += 1;
    stats.n_samples += static_cast<long long>(ev.samples.size());
  }
  for (auto& [driver, stats] : out.per_driver) {
    if (stats.n_events < rules.min_events_per_driver) {
      stats.few_events_warning = true;
      out.warnings.push_back(
          "driver " + driver + " has " + std::to_string(stats.n_events) +
          " car-following events, fewer than the recommended " +
          std::to_string(rules.min_events_per_driver));
    }
  }
  return out;
}

std::vector<double> pool_variable(const std::vector<CarFollowingEvent>& events,
                                  Variable which) {
  std::vector<const CarFollowingEvent*> ordered;
  ordered.reserve(events.size());
  for (const auto& ev : events) {
    if (!ev.samples.empty()) ordered.push_back(&ev);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CarFollowingEvent* a, const CarFollowingEvent* b) {
                     const double ta = a->samples.front().timestamp;
                     const double tb = b->samples.front().timestamp;
                     if (ta != tb) return ta < tb;
                     if (a->driver_id != b->driver_id)
                       return a->driver_id < b->driver_id;
                     return a->trip_id < b->trip_id;
                   });

  std::vector<double> pooled;
  for (const auto* ev : ordered) {
    for (const auto& s : ev->samples) {
      switch (which) {
        case Variable::EgoSpeed:
          pooled.push_back(s.v_e);
          break;
        case Variable::EgoAccel:
          pooled.push_back(s.a_e);
          break;
        case Variable::RelSpeed:
          pooled.push_back(s.delta_v);
          break;
        case Variable::RelDistance:
          pooled.push_back(s.delta_d.value());
          break;
      }
    }
  }
  return pooled;
}

}  // namespace ndd::events
