#pragma once

#include <cstddef>
#include <vector>

#include "shadowkin/scene.hpp"

namespace shadowkin::signaling {

enum class Verdict { kFeasible, kInfeasible };

/// Whether a superluminal-looking shadow could be exploited as a signaling
/// channel between the occluder site (x = l) and the far screen edge, and
/// whether that would ever beat a direct light pulse.
///
/// The shadow's arrival at (L, S) is fully determined at the moment the
/// occluder finishes moving, t = s / v. A rival device at the occluder site
/// must deliver a bit across xz_distance = hypot(L - l, s) to the screen
/// edge within that same head start, so it needs speed at least v_dd_min =
/// xz_distance / t. The channel is feasible iff v_dd_min <= c.
struct SignalingReport {
  bool naive_superluminal;  ///< L > l * c / v (strict)
  double t;                 ///< s / v, the rival's head start
  double xz_distance;       ///< hypot(L - l, s)
  double v_dd_min;          ///< xz_distance / t
  bool channel_feasible;    ///< v_dd_min <= c
  double ineq21_lhs;        ///< l^2 * ((L - l)^2 + s^2)
  double ineq21_rhs;        ///< L^2 * s^2
  bool anti_bell_holds;     ///< ineq21_lhs < ineq21_rhs (strict)
  bool asymptotic_ls;       ///< l < s
  Verdict verdict;          ///< Feasible iff naive_superluminal && channel_feasible
  double xy_light_time;     ///< S / c, for comparing channels on the screen line
  /// Boundary diagnostics, 1e-12 relative: the strict comparisons above are
  /// reported as computed, but a flagged scene sits close enough to the
  /// threshold that rounding could have decided it.
  bool threshold_boundary;  ///< L * v vs l * c
  bool channel_boundary;    ///< v_dd_min vs c
  bool anti_bell_boundary;  ///< ineq21_lhs vs ineq21_rhs
};

SignalingReport analyze(const Scene& scene);

/// l^2 ((L-l)^2 + s^2) < L^2 s^2, the geometric inequality that must hold
/// whenever a feasible channel coexists with a superluminal-looking shadow.
/// Validates 0 < l < L and s > 0.
bool anti_bell_check(double l, double s, double L);

/// Inclusive axis range; hi < lo means the axis is empty.
struct AxisRange {
  double lo;
  double hi;
};

struct SweepPoint {
  double l;
  double s;
  double L;
  SignalingReport report;
};

struct SweepSummary {
  std::size_t total_points = 0;
  std::size_t feasible_count = 0;
  double feasible_fraction = 0.0;
  bool any_feasible = false;
  /// Bounding box of the feasible points; meaningful only when any_feasible.
  double l_min = 0, l_max = 0;
  double s_min = 0, s_max = 0;
  double L_min = 0, L_max = 0;
};

struct SweepResult {
  double v;
  double c;
  std::vector<SweepPoint> points;
  SweepSummary summary;
};

/// Analyzes every point of the axis-aligned grid (steps_per_axis points per
/// non-degenerate axis, linearly spaced inclusive of both ends; a collapsed
/// axis lo == hi contributes the single value; hi < lo contributes nothing).
/// Every grid point must form a valid scene (throws ValidationError
/// otherwise). A grid larger than max_points throws GridBudgetError before
/// any point is analyzed.
SweepResult sweep(AxisRange l_range, AxisRange s_range, AxisRange L_range,
                  double v, double c, std::size_t steps_per_axis,
                  std::size_t max_points = 10'000'000);

}  // namespace shadowkin::signaling
