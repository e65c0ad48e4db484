#include "shadowkin/verification.hpp"

#include <cmath>
#include <cstdio>

#include "shadowkin/kinematics.hpp"
#include "shadowkin/retarded_oracle.hpp"

namespace shadowkin::verification {

namespace {

using kinematics::kBoundaryRelTol;
using kinematics::near_equal_rel;

/// 53 random bits mapped to [0, 1). uniform_real_distribution's stream is
/// implementation-defined; this mapping is not.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_interval(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

std::string kv(const char* key, double value) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%s = %.17g", key, value);
  return buf;
}

struct ScalarObservables {
  double v_ratio;         // v_avg / c
  double naive_ratio;     // v_naive / c
  double relative_error;  // t2 / (t + t2)
  bool chain_holds;
  bool squared_form_valid;
  bool naive_superluminal;
  bool regime_ok;
  bool threshold_boundary;
  bool regime_boundary;  // t within 1e-12 of a dominance-ratio edge
};

ScalarObservables observe(const Scene& scene) {
  const auto cert = kinematics::subluminality_certificate(scene);
  const auto regime = kinematics::naive_regime_error(scene);
  const double t = kinematics::occluder_stop_time(scene);
  const double t1 = kinematics::initial_latency(scene);
  const double t2 = kinematics::stop_latency(scene);
  ScalarObservables obs;
  obs.v_ratio = cert.v_ratio;
  obs.naive_ratio = kinematics::naive_shadow_speed(scene) / scene.c;
  obs.relative_error = regime.relative_error;
  obs.chain_holds = cert.chain_holds;
  obs.squared_form_valid = cert.squared_form_valid;
  obs.naive_superluminal =
      kinematics::superluminal_threshold(scene).naive_superluminal;
  obs.regime_ok = regime.regime_ok;
  obs.threshold_boundary = cert.threshold_boundary;
  obs.regime_boundary =
      near_equal_rel(t, kinematics::kDefaultDominanceRatio * t1) ||
      near_equal_rel(t, kinematics::kDefaultDominanceRatio * t2);
  return obs;
}

/// Runs the invariant battery on one scene. Appends to *flagged when a
/// boundary skip happens. Returns the first violated check, if any.
std::optional<Failure> check_scene(const Scene& scene, bool corrupt,
                                   bool* flagged) {
  const auto kin = kinematics::report(scene);
  const auto cert = kinematics::subluminality_certificate(scene);

  if (corrupt) {
    // Deliberately false: proves the harness surfaces counterexamples.
    if (!(kin.v_avg >= scene.c)) {
      return Failure{"corrupt-check(self-test hook)", scene,
                     kv("v_avg", kin.v_avg) + ", " + kv("c", scene.c) +
                         "; the hook demands v_avg >= c, which no valid "
                         "scene satisfies"};
    }
  }

  if (!(kin.v_avg < scene.c) || !(cert.v_ratio < 1.0)) {
    return Failure{"subluminal", scene,
                   kv("v_avg", kin.v_avg) + ", " + kv("c", scene.c) + ", " +
                       kv("v_ratio", cert.v_ratio)};
  }

  if (!(kin.v_avg <= kin.v_naive * (1.0 + kBoundaryRelTol))) {
    return Failure{"naive-dominates", scene,
                   kv("v_avg", kin.v_avg) + ", " + kv("v_naive", kin.v_naive)};
  }

  if (!(kin.S > scene.s)) {
    return Failure{"displacement-amplified", scene,
                   kv("S", kin.S) + ", " + kv("s", scene.s)};
  }

  if (!cert.chain_holds) {
    return Failure{"certificate-chain", scene,
                   kv("lhs_linear", cert.lhs_linear) + ", " +
                       kv("mid", cert.mid) + ", " + kv("rhs", cert.rhs)};
  }

  if (cert.threshold_boundary) {
    *flagged = true;
  } else {
    const bool above = scene.L * scene.v >= scene.l * scene.c;
    if (cert.squared_form_valid != above) {
      return Failure{"squaring-branch", scene,
                     kv("lhs_linear", cert.lhs_linear) + ", " +
                         kv("L*v", scene.L * scene.v) + ", " +
                         kv("l*c", scene.l * scene.c)};
    }
    const bool strictly_above = scene.L * scene.v > scene.l * scene.c;
    if (kin.naive_superluminal != strictly_above) {
      return Failure{"threshold-consistency", scene,
                     kv("L*v", scene.L * scene.v) + ", " +
                         kv("l*c", scene.l * scene.c)};
    }
  }

  const auto regime = kinematics::naive_regime_error(scene);
  if (regime.regime_ok) {
    const double bound =
        1.0 / (kinematics::kDefaultDominanceRatio + 1.0) + 1e-15;
    if (!(regime.relative_error <= bound)) {
      return Failure{"regime-bound", scene,
                     kv("relative_error", regime.relative_error) + ", " +
                         kv("bound", bound)};
    }
  }
  // Same quantity via the speed route; the absolute tolerance absorbs the
  // cancellation in v_naive - v_avg when t2 << t.
  const double direct = (kin.v_naive - kin.v_avg) / kin.v_naive;
  if (!(std::fabs(direct - regime.relative_error) <= 1e-12)) {
    return Failure{"regime-identity", scene,
                   kv("t2/(t+t2)", regime.relative_error) + ", " +
                       kv("(v_naive-v_avg)/v_naive", direct)};
  }

  const ScalarObservables base = observe(scene);
  for (const auto& [k_len, k_spd] :
       {std::pair{1e3, 1e-3}, std::pair{1e-3, 1e3}}) {
    const Scene scaled = validate_scene({scene.L * k_len, scene.l * k_len,
                                         scene.s * k_len, scene.v * k_spd,
                                         scene.c * k_spd});
    const ScalarObservables other = observe(scaled);
    const std::string label = kv("k_len", k_len) + ", " + kv("k_spd", k_spd);
    if (!near_equal_rel(base.v_ratio, other.v_ratio) ||
        !near_equal_rel(base.naive_ratio, other.naive_ratio) ||
        std::fabs(base.relative_error - other.relative_error) > 1e-12) {
      return Failure{"scale-invariance", scene,
                     label + "; " + kv("v_ratio", base.v_ratio) + " vs " +
                         kv("scaled", other.v_ratio)};
    }
    if (base.chain_holds != other.chain_holds) {
      return Failure{"scale-invariance", scene, label + "; chain_holds flipped"};
    }
    if (base.threshold_boundary || other.threshold_boundary) {
      *flagged = true;
    } else if (base.squared_form_valid != other.squared_form_valid ||
               base.naive_superluminal != other.naive_superluminal) {
      return Failure{"scale-invariance", scene,
                     label + "; threshold booleans flipped"};
    }
    if (base.regime_boundary || other.regime_boundary) {
      *flagged = true;
    } else if (base.regime_ok != other.regime_ok) {
      return Failure{"scale-invariance", scene, label + "; regime_ok flipped"};
    }
  }

  const Trajectory trajectory = rise_and_stop_trajectory(scene);
  const double stop = kinematics::occluder_stop_time(scene);
  if (trajectory.segments().size() != 2 ||
      trajectory.segments()[1].start_time != stop ||
      trajectory.position_at(stop * 2.0) != scene.s ||
      trajectory.position_at(0.0) != 0.0) {
    return Failure{"trajectory", scene,
                   kv("stop", stop) + ", " +
                       kv("parked", trajectory.position_at(stop * 2.0))};
  }
  const double midpoint = trajectory.position_at(stop * 0.5);
  if (!near_equal_rel(midpoint, scene.s * 0.5)) {
    return Failure{"trajectory", scene, kv("midpoint", midpoint)};
  }

  const double tau_end = oracle::retarded_screen_time(scene, scene.s);
  const double tau_start = oracle::retarded_screen_time(scene, 0.0);
  if (!near_equal_rel(tau_end, kin.T) ||
      !near_equal_rel(tau_start, (scene.L - scene.l) / scene.c)) {
    return Failure{"time-identity", scene,
                   kv("tau(s)", tau_end) + ", " + kv("T", kin.T) + ", " +
                       kv("tau(0)", tau_start)};
  }

  return std::nullopt;
}

}  // namespace

Scene sample_scene(std::mt19937_64& rng) {
  const double a = log_uniform(rng, 1e-3, 1e6);
  double b = log_uniform(rng, 1e-3, 1e6);
  while (b == a) b = log_uniform(rng, 1e-3, 1e6);
  Scene scene;
  scene.l = std::min(a, b);
  scene.L = std::max(a, b);
  scene.s = log_uniform(rng, 1e-3, 1e6);
  scene.c = kSpeedOfLight;
  scene.v = scene.c * uniform(rng, 1e-3, 1.0 - 1e-3);
  return validate_scene(scene);
}

Result run(const Options& options) {
  std::mt19937_64 rng(options.seed);
  Result result;
  for (std::uint64_t i = 0; i < options.trials; ++i) {
    const Scene scene = sample_scene(rng);
    bool flagged = false;
    auto failure = check_scene(scene, options.corrupt_check, &flagged);
    if (flagged) ++result.boundary_flagged;
    if (failure) {
      result.failure = std::move(failure);
      return result;
    }
    ++result.trials_run;
  }
  return result;
}

}  // namespace shadowkin::verification
