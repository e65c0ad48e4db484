#pragma once

#include "shadowkin/scene.hpp"

namespace shadowkin::kinematics {

/// Ratio by which the occluder travel time must dominate both light
/// latencies before the naive shadow-speed estimate is trusted.
inline constexpr double kDefaultDominanceRatio = 100.0;

/// Relative tolerance for flagging comparisons that sit on a decision
/// boundary, where rounding alone could flip a strict inequality.
inline constexpr double kBoundaryRelTol = 1e-12;

/// True when a and b agree to within kBoundaryRelTol relative.
bool near_equal_rel(double a, double b) noexcept;

double occluder_stop_time(const Scene& scene);    ///< t  = s / v
double initial_latency(const Scene& scene);       ///< t1 = L / c
double shadow_displacement(const Scene& scene);   ///< S  = (L / l) * s
double stop_latency(const Scene& scene);          ///< t2 = hypot(L - l, S - s) / c
double total_time(const Scene& scene);            ///< T  = t + t2
double average_shadow_speed(const Scene& scene);  ///< v_avg   = S / T
double naive_shadow_speed(const Scene& scene);    ///< v_naive = (L / l) * v

/// How far the naive estimate overshoots the true average, and whether the
/// scene sits in the regime where the naive estimate is meaningful at all.
struct RegimeError {
  double relative_error;  ///< (v_naive - v_avg) / v_naive == t2 / (t + t2)
  bool regime_ok;         ///< t >= ratio * t1 and t >= ratio * t2
};

/// Precondition: dominance_ratio >= 1.
/// When regime_ok holds, relative_error <= 1 / (dominance_ratio + 1).
RegimeError naive_regime_error(
    const Scene& scene, double dominance_ratio = kDefaultDominanceRatio);

/// Screen distance beyond which the naive estimate exceeds light speed.
struct SuperluminalThreshold {
  double L_min;             ///< l * c / v
  bool naive_superluminal;  ///< L > L_min (strict)
};

SuperluminalThreshold superluminal_threshold(const Scene& scene);

/// Witness that the true average shadow speed never reaches c.
///
/// The chain lhs_linear <= mid <= rhs certifies v_avg < c without squaring:
///   S - (c/v) s  <=  S - s  <=  hypot(L - l, S - s)  ==  c * t2,
/// and dividing by T shows v_avg = S/T < c. chain_holds is evaluated on the
/// unsquared terms, so it is meaningful for every valid scene.
///
/// squared_form_valid reports whether squaring the first inequality would
/// preserve its direction, which requires lhs_linear >= 0, equivalently
/// L >= l * c / v. Below that threshold the squared comparison silently
/// flips and proves nothing; the linear chain above is what remains valid.
struct SubluminalityCertificate {
  double lhs_linear;        ///< S - (c/v) * s
  double mid;               ///< S - s
  double rhs;               ///< hypot(L - l, S - s)
  bool chain_holds;         ///< lhs_linear <= mid && mid <= rhs
  bool squared_form_valid;  ///< lhs_linear >= 0
  double v_ratio;           ///< v_avg / c, strictly below 1
  bool threshold_boundary;  ///< L * v agrees with l * c to 1e-12 relative
};

SubluminalityCertificate subluminality_certificate(const Scene& scene);

/// Everything the closed-form analysis yields for one scene.
struct KinematicsReport {
  double t;
  double t1;
  double t2;
  double T;
  double S;
  double v_avg;
  double v_naive;
  bool naive_superluminal;
  bool regime_ok;
};

KinematicsReport report(
    const Scene& scene, double dominance_ratio = kDefaultDominanceRatio);

}  // namespace shadowkin::kinematics
