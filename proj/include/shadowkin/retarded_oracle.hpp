#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "shadowkin/scene.hpp"

namespace shadowkin::oracle {

/// What the projector was doing before the occluder starts moving.
enum class EmissionConvention {
  /// Projector switches on at t = 0, exactly when the occluder starts.
  /// No photon exists with emission time < 0, so a screen point (L, Y) sees
  /// nothing at all until T = sqrt(L^2 + Y^2) / c.
  kProjectorOnAtZero,
  /// Projector has been on forever; the screen starts fully lit and the
  /// first darkness at Y = 0 arrives at (L - l) / c.
  kSteadyBeam,
};

/// Classification of one screen sample (Y, T).
enum class SampleState : std::uint8_t {
  kLit,
  kDark,
  kNoLightYet,  ///< only under kProjectorOnAtZero, before the wavefront
};

/// Discretization of the screen strip [0, S] x [0, horizon].
///
/// eps is the blocking half-width: the photon through (l, y_ray) is blocked
/// when the occluder exists at its crossing time and sits within eps of
/// y_ray. The default couples eps to the grid so the shadow band is always
/// at least one sample wide: eps = max(v * dt, dy * l / L).
struct GridSpec {
  double dy;
  double dt;
  double eps;
  /// Fraction of the analytic total time added past the last event so the
  /// stop transition is always inside the simulated window.
  double time_margin = 0.1;
  /// Upper bound on ny * nt; exceeding it throws GridBudgetError before any
  /// allocation happens.
  std::size_t sample_budget = kDefaultSampleBudget;

  static constexpr std::size_t kDefaultSampleBudget = 100'000'000;
};

/// dy = S / 2000, dt = T / 4000, eps per the coupling rule above. These
/// resolve the desk-scale examples to well under 0.1%.
GridSpec default_grid(const Scene& scene);

/// Requested grid would exceed the sampling budget.
class GridBudgetError : public std::runtime_error {
 public:
  GridBudgetError(const std::string& message, std::size_t requested,
                  std::size_t budget)
      : std::runtime_error(message), requested_(requested), budget_(budget) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t requested_;
  std::size_t budget_;
};

/// The dark band fell between grid rows (eps too small for the grid), or the
/// timeline contains no shadow to trace at all.
class WorldlineGapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Classified samples over the full screen strip, time-major: the sample at
/// time index it and height index iy is states[it * y.size() + iy].
struct ScreenTimeline {
  EmissionConvention convention;
  double dy;
  double dt;
  double eps;
  std::vector<double> y;  ///< ascending, y.front() == 0, y.back() == S
  std::vector<double> t;  ///< ascending from 0
  std::vector<SampleState> states;

  SampleState at(std::size_t it, std::size_t iy) const {
    return states[it * y.size() + iy];
  }
};

/// Classifies the single sample (screen_y, arrival_time).
///
/// The unique photon arriving at (L, screen_y) at arrival_time crossed the
/// occluder plane x = l at height screen_y * l / L, at the retarded time
/// arrival_time - dist / c. The sample is dark iff the occluder existed then
/// and sat within eps of that crossing height; under kProjectorOnAtZero it
/// is no-light-yet iff the photon would have needed emission before t = 0.
SampleState classify_sample(const Scene& scene, const Trajectory& trajectory,
                            EmissionConvention convention, double screen_y,
                            double arrival_time, double eps);

/// Classifies every sample on the grid. Deterministic: equal inputs yield a
/// bit-identical states vector. Throws GridBudgetError if the grid exceeds
/// grid.sample_budget.
ScreenTimeline simulate_transport(const Scene& scene,
                                  const Trajectory& trajectory,
                                  EmissionConvention convention,
                                  const GridSpec& grid);

struct WorldlinePoint {
  double t;
  double y;
};

/// Traces the shadow's center across the screen: for each time with any dark
/// sample, the midpoint of the dark run nearest the previously traced height
/// (the lowest run at the first dark time). Once darkness has appeared, a
/// later gap (a time with no dark sample before the timeline ends) throws
/// WorldlineGapError, as does a timeline with no dark samples at all.
std::vector<WorldlinePoint> extract_worldline(const ScreenTimeline& timeline);

/// Event times read off the timeline the way a detector would see them.
struct EventMeasurement {
  /// First state change in the Y = 0 sample row: wavefront arrival L / c
  /// under kProjectorOnAtZero, first darkness (L - l) / c under kSteadyBeam.
  double onset_y0;
  /// First dark sample in the Y = S row; analytically t + t2.
  double stop_ys;
};

/// Throws std::runtime_error if either event is absent from the timeline
/// (cannot happen for grids built by default_grid on a valid scene).
EventMeasurement measure_events(const ScreenTimeline& timeline);

/// Closed-form arrival time of the shadow edge cast by the occluder tip at
/// height y (0 <= y <= s):  y / v + (L - l) * sqrt(l^2 + y^2) / (l * c).
double retarded_screen_time(const Scene& scene, double occluder_y);

/// Central-difference speed of the shadow across the screen when the
/// occluder tip is at height y: (L/l) * 2h / (tau(y+h) - tau(y-h)).
/// Tends to (L/l) * v as y -> 0. Precondition: 0 < step < y, y + step <= s.
double instantaneous_speed(const Scene& scene, double occluder_y, double step);

/// S / (T - t1): mean speed between first light and the shadow's arrival at
/// Y = S. Exceeds c for large L/l, approaching c * (l + sqrt(l^2+s^2)) / s.
double screen_transit_average(const Scene& scene);

}  // namespace shadowkin::oracle
