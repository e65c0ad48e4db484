#include "shadowkin/retarded_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shadowkin/kinematics.hpp"

namespace shadowkin::oracle {

namespace {

void require_positive(const char* field, double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw ValidationError(field,
                          std::string(field) + " must be finite and > 0");
  }
}

/// Grid points 0, dy, 2*dy, ... with the top pinned to exactly `top`.
std::vector<double> pinned_axis(double top, double dy) {
  const std::size_t n = static_cast<std::size_t>(std::floor(top / dy)) + 1;
  std::vector<double> axis;
  axis.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) axis.push_back(static_cast<double>(i) * dy);
  if (axis.back() < top * (1.0 - 1e-12)) {
    axis.push_back(top);
  } else {
    axis.back() = top;
  }
  return axis;
}

/// Grid points 0, dt, 2*dt, ... up to and including the last multiple <= top.
std::vector<double> regular_axis(double top, double dt) {
  const std::size_t n = static_cast<std::size_t>(std::floor(top / dt)) + 1;
  std::vector<double> axis;
  axis.reserve(n);
  for (std::size_t i = 0; i < n; ++i) axis.push_back(static_cast<double>(i) * dt);
  return axis;
}

}  // namespace

GridSpec default_grid(const Scene& scene) {
  GridSpec grid;
  const double S = kinematics::shadow_displacement(scene);
  const double T = kinematics::total_time(scene);
  grid.dy = S / 2000.0;
  grid.dt = T / 4000.0;
  grid.eps = std::max(scene.v * grid.dt, grid.dy * scene.l / scene.L);
  return grid;
}

SampleState classify_sample(const Scene& scene, const Trajectory& trajectory,
                            EmissionConvention convention, double screen_y,
                            double arrival_time, double eps) {
  if (convention == EmissionConvention::kProjectorOnAtZero) {
    // The photon reaching (L, Y) at T was emitted at T - |((0,0),(L,Y))| / c;
    // before the projector switched on, nothing has arrived yet.
    const double flight = std::hypot(scene.L, screen_y) / scene.c;
    if (arrival_time < flight) return SampleState::kNoLightYet;
  }
  const double y_ray = screen_y * scene.l / scene.L;
  const double tail = std::hypot(scene.L - scene.l, screen_y - y_ray);
  const double t_cross = arrival_time - tail / scene.c;
  if (t_cross < trajectory.start_time()) return SampleState::kLit;
  const double y_occ = trajectory.position_at(t_cross);
  return std::fabs(y_occ - y_ray) <= eps ? SampleState::kDark
                                         : SampleState::kLit;
}

ScreenTimeline simulate_transport(const Scene& scene,
                                  const Trajectory& trajectory,
                                  EmissionConvention convention,
                                  const GridSpec& grid) {
  require_positive("dy", grid.dy);
  require_positive("dt", grid.dt);
  require_positive("eps", grid.eps);
  if (!std::isfinite(grid.time_margin) || grid.time_margin < 0.0) {
    throw ValidationError("time_margin", "time_margin must be finite and >= 0");
  }
  if (grid.sample_budget == 0) {
    throw ValidationError("sample_budget", "sample_budget must be >= 1");
  }

  const double S = kinematics::shadow_displacement(scene);
  const double total = kinematics::total_time(scene);
  const double first_light = kinematics::initial_latency(scene);
  // Both measured events (onset at Y=0, stop at Y=S) must land inside the
  // window even when first light arrives after the shadow has stopped.
  const double horizon =
      std::max(total, first_light) * (1.0 + grid.time_margin);

  // Budget check in doubles before any allocation.
  const double ny_d = std::floor(S / grid.dy) + 2.0;
  const double nt_d = std::floor(horizon / grid.dt) + 2.0;
  const double budget_d = static_cast<double>(grid.sample_budget);
  if (ny_d * nt_d > budget_d) {
    const auto requested = static_cast<std::size_t>(
        std::min(ny_d * nt_d, 1e18));
    throw GridBudgetError(
        "grid of ~" + std::to_string(requested) + " samples exceeds budget " +
            std::to_string(grid.sample_budget),
        requested, grid.sample_budget);
  }

  ScreenTimeline timeline;
  timeline.convention = convention;
  timeline.dy = grid.dy;
  timeline.dt = grid.dt;
  timeline.eps = grid.eps;
  timeline.y = pinned_axis(S, grid.dy);
  timeline.t = regular_axis(horizon, grid.dt);

  const std::size_t ny = timeline.y.size();
  const std::size_t nt = timeline.t.size();
  timeline.states.resize(ny * nt);
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = timeline.t[it];
    for (std::size_t iy = 0; iy < ny; ++iy) {
      timeline.states[it * ny + iy] = classify_sample(
          scene, trajectory, convention, timeline.y[iy], t, grid.eps);
    }
  }
  return timeline;
}

std::vector<WorldlinePoint> extract_worldline(const ScreenTimeline& timeline) {
  if (timeline.y.empty() || timeline.t.empty() || timeline.states.empty()) {
    throw WorldlineGapError("empty timeline");
  }
  const std::size_t ny = timeline.y.size();
  std::vector<WorldlinePoint> out;
  bool started = false;
  double prev_y = 0.0;
  for (std::size_t it = 0; it < timeline.t.size(); ++it) {
    // Midpoints of the maximal dark runs in this row.
    double best_mid = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    bool any = false;
    std::size_t iy = 0;
    while (iy < ny) {
      if (timeline.at(it, iy) != SampleState::kDark) {
        ++iy;
        continue;
      }
      std::size_t hi = iy;
      while (hi + 1 < ny && timeline.at(it, hi + 1) == SampleState::kDark) ++hi;
      const double mid = 0.5 * (timeline.y[iy] + timeline.y[hi]);
      // Nearest run to the last traced height; the lowest run before the
      // trace starts. Ties keep the lower run.
      const double dist = started ? std::fabs(mid - prev_y) : mid;
      if (!any || dist < best_dist) {
        any = true;
        best_dist = dist;
        best_mid = mid;
      }
      iy = hi + 1;
    }
    if (!any) {
      if (started) {
        throw WorldlineGapError(
            "shadow band fell between grid rows at t = " +
            std::to_string(timeline.t[it]) + "; raise eps or refine dy");
      }
      continue;
    }
    started = true;
    prev_y = best_mid;
    out.push_back({timeline.t[it], best_mid});
  }
  if (!started) {
    throw WorldlineGapError("timeline contains no dark samples");
  }
  return out;
}

EventMeasurement measure_events(const ScreenTimeline& timeline) {
  if (timeline.y.empty() || timeline.t.empty() || timeline.states.empty()) {
    throw std::runtime_error("cannot measure events on an empty timeline");
  }
  const std::size_t ny = timeline.y.size();
  EventMeasurement events{};
  bool onset_found = false;
  for (std::size_t it = 1; it < timeline.t.size(); ++it) {
    if (timeline.at(it, 0) != timeline.at(it - 1, 0)) {
      events.onset_y0 = timeline.t[it];
      onset_found = true;
      break;
    }
  }
  if (!onset_found) {
    throw std::runtime_error("no state transition at Y = 0 inside the window");
  }
  bool stop_found = false;
  for (std::size_t it = 0; it < timeline.t.size(); ++it) {
    if (timeline.at(it, ny - 1) == SampleState::kDark) {
      events.stop_ys = timeline.t[it];
      stop_found = true;
      break;
    }
  }
  if (!stop_found) {
    throw std::runtime_error("no dark sample at Y = S inside the window");
  }
  return events;
}

double retarded_screen_time(const Scene& scene, double occluder_y) {
  return occluder_y / scene.v +
         (scene.L - scene.l) * std::hypot(scene.l, occluder_y) /
             (scene.l * scene.c);
}

double instantaneous_speed(const Scene& scene, double occluder_y,
                           double step) {
  if (!(step > 0.0) || !(step < occluder_y)) {
    throw ValidationError("step", "step must satisfy 0 < step < occluder_y");
  }
  if (occluder_y + step > scene.s) {
    throw ValidationError(
        "occluder_y", "occluder_y + step must stay within the travel [0, s]");
  }
  const double lead = retarded_screen_time(scene, occluder_y + step);
  const double lag = retarded_screen_time(scene, occluder_y - step);
  return (scene.L / scene.l) * (2.0 * step) / (lead - lag);
}

double screen_transit_average(const Scene& scene) {
  const double S = kinematics::shadow_displacement(scene);
  return S / (kinematics::total_time(scene) - kinematics::initial_latency(scene));
}

}  // namespace shadowkin::oracle
