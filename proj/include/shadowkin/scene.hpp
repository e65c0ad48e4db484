#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shadowkin {

/// Vacuum light speed in metres per second, used when a scene omits c.
inline constexpr double kSpeedOfLight = 3.0e8;

/// Geometry and motion parameters for one projector / occluder / screen setup.
///
/// The projector sits at the origin, the screen is the vertical line x = L,
/// and the occluder rides the line x = l, starting at (l, 0) and moving up
/// with speed v until it stops at (l, s). All lengths share one unit, all
/// speeds share one unit; set c = 1 to work in natural units.
struct Scene {
  double L;                  ///< projector-to-screen distance, must satisfy L > l
  double l;                  ///< projector-to-occluder distance, 0 < l < L
  double s;                  ///< occluder's total transverse travel, s > 0
  double v;                  ///< occluder speed, 0 < v < c
  double c = kSpeedOfLight;  ///< light speed, c > 0
};

/// Thrown when a parameter set violates a Scene or Trajectory invariant.
/// field() names the offending parameter; what() states the violated bound.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Checks 0 < l < L, s > 0, 0 < v < c, c > 0 and every value finite.
/// Boundary cases (l == L, v == c) are rejected, never clamped. Returns the
/// scene unchanged on success; throws ValidationError naming the bad field.
Scene validate_scene(const Scene& raw);

/// One constant-velocity leg of an occluder's motion along x = l.
struct TrajectorySegment {
  double start_time;  ///< when this leg begins
  double start_y;     ///< occluder height at start_time
  double speed;       ///< signed dy/dt for this leg; 0 on the final leg
};

/// Piecewise-constant-velocity motion of the occluder.
///
/// The occluder does not exist before the first segment's start time and
/// stays parked at its final position forever after the last leg begins
/// (the last leg must therefore have speed exactly 0).
class Trajectory {
 public:
  /// Validates: at least one segment, start times strictly increasing,
  /// positions continuous across leg boundaries (exact closed-form match),
  /// |speed| < c on every leg, and final speed == 0.
  Trajectory(std::vector<TrajectorySegment> segments, double c);

  /// Time before which the occluder is absent.
  double start_time() const noexcept { return segments_.front().start_time; }

  /// Occluder height at time t. Precondition: t >= start_time().
  double position_at(double t) const;

  const std::vector<TrajectorySegment>& segments() const noexcept {
    return segments_;
  }

 private:
  std::vector<TrajectorySegment> segments_;
};

/// The canonical two-leg motion: rise from (l, 0) at speed v starting at
/// t = 0, stop exactly at height s (at t = s/v), stay parked.
Trajectory rise_and_stop_trajectory(const Scene& scene);

}  // namespace shadowkin
