#include "shadowkin/signaling.hpp"

#include <cmath>
#include <string>

#include "shadowkin/kinematics.hpp"
#include "shadowkin/retarded_oracle.hpp"

namespace shadowkin::signaling {

namespace {

std::vector<double> axis_values(AxisRange range, std::size_t steps,
                                const char* name) {
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi)) {
    throw ValidationError(name, std::string(name) + " bounds must be finite");
  }
  if (range.hi < range.lo) return {};
  if (range.hi == range.lo || steps == 1) return {range.lo};
  std::vector<double> values;
  values.reserve(steps);
  const double span = range.hi - range.lo;
  for (std::size_t i = 0; i < steps; ++i) {
    values.push_back(range.lo +
                     span * static_cast<double>(i) /
                         static_cast<double>(steps - 1));
  }
  values.front() = range.lo;
  values.back() = range.hi;
  return values;
}

}  // namespace

SignalingReport analyze(const Scene& scene) {
  SignalingReport rep;
  const double threshold = scene.l * (scene.c / scene.v);
  rep.naive_superluminal = scene.L > threshold;
  rep.t = scene.s / scene.v;
  rep.xz_distance = std::hypot(scene.L - scene.l, scene.s);
  rep.v_dd_min = rep.xz_distance / rep.t;
  rep.channel_feasible = rep.v_dd_min <= scene.c;
  const double radial = scene.L - scene.l;
  rep.ineq21_lhs = (scene.l * scene.l) * (radial * radial + scene.s * scene.s);
  rep.ineq21_rhs = (scene.L * scene.s) * (scene.L * scene.s);
  rep.anti_bell_holds = rep.ineq21_lhs < rep.ineq21_rhs;
  rep.asymptotic_ls = scene.l < scene.s;
  rep.verdict = rep.naive_superluminal && rep.channel_feasible
                    ? Verdict::kFeasible
                    : Verdict::kInfeasible;
  rep.xy_light_time = kinematics::shadow_displacement(scene) / scene.c;
  rep.threshold_boundary =
      kinematics::near_equal_rel(scene.L * scene.v, scene.l * scene.c);
  rep.channel_boundary = kinematics::near_equal_rel(rep.v_dd_min, scene.c);
  rep.anti_bell_boundary =
      kinematics::near_equal_rel(rep.ineq21_lhs, rep.ineq21_rhs);
  return rep;
}

bool anti_bell_check(double l, double s, double L) {
  if (!std::isfinite(l) || l <= 0.0) {
    throw ValidationError("l", "l must be finite and > 0");
  }
  if (!std::isfinite(L) || L <= l) {
    throw ValidationError("l", "l must be < L");
  }
  if (!std::isfinite(s) || s <= 0.0) {
    throw ValidationError("s", "s must be finite and > 0");
  }
  const double radial = L - l;
  return (l * l) * (radial * radial + s * s) < (L * s) * (L * s);
}

SweepResult sweep(AxisRange l_range, AxisRange s_range, AxisRange L_range,
                  double v, double c, std::size_t steps_per_axis,
                  std::size_t max_points) {
  if (steps_per_axis == 0) {
    throw ValidationError("steps", "steps must be >= 1");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw ValidationError("c", "c must be finite and > 0");
  }
  if (!std::isfinite(v) || v <= 0.0 || v >= c) {
    throw ValidationError("v", "v must satisfy 0 < v < c");
  }
  const auto ls = axis_values(l_range, steps_per_axis, "l-range");
  const auto ss = axis_values(s_range, steps_per_axis, "s-range");
  const auto Ls = axis_values(L_range, steps_per_axis, "L-range");

  const double points_d = static_cast<double>(ls.size()) *
                          static_cast<double>(ss.size()) *
                          static_cast<double>(Ls.size());
  if (points_d > static_cast<double>(max_points)) {
    const auto requested =
        static_cast<std::size_t>(std::min(points_d, 1e18));
    throw oracle::GridBudgetError(
        "sweep of ~" + std::to_string(requested) +
            " grid points exceeds budget " + std::to_string(max_points),
        requested, max_points);
  }

  SweepResult result;
  result.v = v;
  result.c = c;
  result.points.reserve(static_cast<std::size_t>(points_d));
  SweepSummary& sum = result.summary;
  for (double l : ls) {
    for (double s : ss) {
      for (double L : Ls) {
        const Scene scene = validate_scene({L, l, s, v, c});
        SweepPoint point{l, s, L, analyze(scene)};
        ++sum.total_points;
        if (point.report.verdict == Verdict::kFeasible) {
          if (!sum.any_feasible) {
            sum.l_min = sum.l_max = l;
            sum.s_min = sum.s_max = s;
            sum.L_min = sum.L_max = L;
            sum.any_feasible = true;
          } else {
            sum.l_min = std::min(sum.l_min, l);
            sum.l_max = std::max(sum.l_max, l);
            sum.s_min = std::min(sum.s_min, s);
            sum.s_max = std::max(sum.s_max, s);
            sum.L_min = std::min(sum.L_min, L);
            sum.L_max = std::max(sum.L_max, L);
          }
          ++sum.feasible_count;
        }
        result.points.push_back(std::move(point));
      }
    }
  }
  sum.feasible_fraction =
      sum.total_points == 0
          ? 0.0
          : static_cast<double>(sum.feasible_count) /
                static_cast<double>(sum.total_points);
  return result;
}

}  // namespace shadowkin::signaling
