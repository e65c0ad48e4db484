#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "shadowkin/scene.hpp"

namespace shadowkin::verification {

struct Options {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  /// Self-test hook: inject one deliberately false invariant so the harness
  /// provably reports counterexamples instead of rubber-stamping.
  bool corrupt_check = false;
};

struct Failure {
  std::string check;   ///< name of the violated invariant
  Scene scene;         ///< the counterexample
  std::string detail;  ///< witness values
};

struct Result {
  std::uint64_t trials_run = 0;
  /// Scenes whose strict comparisons sat within 1e-12 relative of a decision
  /// boundary; their boolean-equality checks are skipped, not failed.
  std::uint64_t boundary_flagged = 0;
  std::optional<Failure> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

/// One random valid scene: two log-uniform draws on [1e-3, 1e6] ordered into
/// (l, L), s log-uniform on the same range, v uniform on (1e-3, 1 - 1e-3)*c,
/// c = kSpeedOfLight. The mapping from mt19937_64 output to doubles is
/// hand-rolled, so a fixed seed yields the same scenes on every platform.
Scene sample_scene(std::mt19937_64& rng);

/// Draws options.trials scenes from the seed and checks the full closed-form
/// invariant battery on each (subluminality, ordering vs the naive estimate,
/// certificate chain, squaring-branch validity, regime error bound, scale
/// invariance, trajectory consistency, measurement identities). Stops at the
/// first failure.
Result run(const Options& options);

}  // namespace shadowkin::verification
