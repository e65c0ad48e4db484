#include "shadowkin/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace shadowkin {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void require_finite(const char* field, double x) {
  if (!std::isfinite(x)) {
    throw ValidationError(field, std::string(field) + " must be finite");
  }
}

}  // namespace

Scene validate_scene(const Scene& raw) {
  require_finite("L", raw.L);
  require_finite("l", raw.l);
  require_finite("s", raw.s);
  require_finite("v", raw.v);
  require_finite("c", raw.c);
  if (raw.c <= 0.0) {
    throw ValidationError("c", "c must be > 0, got c = " + num(raw.c));
  }
  if (raw.v <= 0.0) {
    throw ValidationError("v", "v must be > 0, got v = " + num(raw.v));
  }
  if (raw.v >= raw.c) {
    throw ValidationError("v", "v must be < c, got v = " + num(raw.v) +
                                   " with c = " + num(raw.c));
  }
  if (raw.l <= 0.0) {
    throw ValidationError("l", "l must be > 0, got l = " + num(raw.l));
  }
  if (raw.l >= raw.L) {
    throw ValidationError("l", "l must be < L, got l = " + num(raw.l) +
                                   " with L = " + num(raw.L));
  }
  if (raw.s <= 0.0) {
    throw ValidationError("s", "s must be > 0, got s = " + num(raw.s));
  }
  return raw;
}

Trajectory::Trajectory(std::vector<TrajectorySegment> segments, double c)
    : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw ValidationError("segments", "trajectory needs at least one segment");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw ValidationError("c", "c must be finite and > 0, got c = " + num(c));
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const TrajectorySegment& seg = segments_[i];
    require_finite("start_time", seg.start_time);
    require_finite("start_y", seg.start_y);
    require_finite("speed", seg.speed);
    if (std::fabs(seg.speed) >= c) {
      throw ValidationError(
          "speed", "segment " + std::to_string(i) + " speed magnitude " +
                       num(std::fabs(seg.speed)) + " must be < c = " + num(c));
    }
  }
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const TrajectorySegment& prev = segments_[i - 1];
    const TrajectorySegment& cur = segments_[i];
    if (!(cur.start_time > prev.start_time)) {
      throw ValidationError(
          "start_time", "segment " + std::to_string(i) +
                            " start_time must exceed the previous segment's");
    }
    // Continuity to 1e-9 relative: exact equality would reject positions
    // computed as start_y + speed * dt in floating point.
    const double expected =
        prev.start_y + prev.speed * (cur.start_time - prev.start_time);
    const double gap = std::fabs(cur.start_y - expected);
    const double scale =
        std::max({1.0, std::fabs(cur.start_y), std::fabs(expected)});
    if (gap > 1e-9 * scale) {
      throw ValidationError(
          "start_y", "segment " + std::to_string(i) + " starts at y = " +
                         num(cur.start_y) + " but the previous leg ends at y = " +
                         num(expected));
    }
  }
  if (segments_.back().speed != 0.0) {
    throw ValidationError("speed", "final segment speed must be 0, got " +
                                       num(segments_.back().speed));
  }
}

double Trajectory::position_at(double t) const {
  if (t < start_time()) {
    throw std::out_of_range("occluder does not exist before t = " +
                            num(start_time()));
  }
  // Last segment whose start_time <= t.
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t,
      [](double value, const TrajectorySegment& seg) {
        return value < seg.start_time;
      });
  const TrajectorySegment& seg = *(it - 1);
  return seg.start_y + seg.speed * (t - seg.start_time);
}

Trajectory rise_and_stop_trajectory(const Scene& scene) {
  const double stop = scene.s / scene.v;
  return Trajectory({{0.0, 0.0, scene.v}, {stop, scene.s, 0.0}}, scene.c);
}

}  // namespace shadowkin
