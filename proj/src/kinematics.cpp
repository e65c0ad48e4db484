#include "shadowkin/kinematics.hpp"

#include <cmath>

namespace shadowkin::kinematics {

bool near_equal_rel(double a, double b) noexcept {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= kBoundaryRelTol * scale;
}

double occluder_stop_time(const Scene& scene) { return scene.s / scene.v; }

double initial_latency(const Scene& scene) { return scene.L / scene.c; }

double shadow_displacement(const Scene& scene) {
  return (scene.L / scene.l) * scene.s;
}

double stop_latency(const Scene& scene) {
  const double S = shadow_displacement(scene);
  return std::hypot(scene.L - scene.l, S - scene.s) / scene.c;
}

double total_time(const Scene& scene) {
  return occluder_stop_time(scene) + stop_latency(scene);
}

double average_shadow_speed(const Scene& scene) {
  return shadow_displacement(scene) / total_time(scene);
}

double naive_shadow_speed(const Scene& scene) {
  return (scene.L / scene.l) * scene.v;
}

RegimeError naive_regime_error(const Scene& scene, double dominance_ratio) {
  if (!(dominance_ratio >= 1.0) || !std::isfinite(dominance_ratio)) {
    throw ValidationError("dominance_ratio",
                          "dominance_ratio must be finite and >= 1");
  }
  const double t = occluder_stop_time(scene);
  const double t1 = initial_latency(scene);
  const double t2 = stop_latency(scene);
  RegimeError out;
  // Identical to (v_naive - v_avg) / v_naive, but immune to the cancellation
  // that form suffers when t2 << t.
  out.relative_error = t2 / (t + t2);
  out.regime_ok = t >= dominance_ratio * t1 && t >= dominance_ratio * t2;
  return out;
}

SuperluminalThreshold superluminal_threshold(const Scene& scene) {
  SuperluminalThreshold out;
  out.L_min = scene.l * (scene.c / scene.v);
  out.naive_superluminal = scene.L > out.L_min;
  return out;
}

SubluminalityCertificate subluminality_certificate(const Scene& scene) {
  const double S = shadow_displacement(scene);
  SubluminalityCertificate cert;
  cert.lhs_linear = S - (scene.c / scene.v) * scene.s;
  cert.mid = S - scene.s;
  cert.rhs = std::hypot(scene.L - scene.l, cert.mid);
  cert.chain_holds = cert.lhs_linear <= cert.mid && cert.mid <= cert.rhs;
  cert.squared_form_valid = cert.lhs_linear >= 0.0;
  cert.v_ratio = average_shadow_speed(scene) / scene.c;
  cert.threshold_boundary =
      near_equal_rel(scene.L * scene.v, scene.l * scene.c);
  return cert;
}

KinematicsReport report(const Scene& scene, double dominance_ratio) {
  KinematicsReport out;
  out.t = occluder_stop_time(scene);
  out.t1 = initial_latency(scene);
  out.t2 = stop_latency(scene);
  out.T = total_time(scene);
  out.S = shadow_displacement(scene);
  out.v_avg = average_shadow_speed(scene);
  out.v_naive = naive_shadow_speed(scene);
  out.naive_superluminal = superluminal_threshold(scene).naive_superluminal;
  out.regime_ok = naive_regime_error(scene, dominance_ratio).regime_ok;
  return out;
}

}  // namespace shadowkin::kinematics
