#include <cmath>
#include <cstddef>
#include <random>

#include "doctest.h"
#include "shadowkin/kinematics.hpp"
#include "shadowkin/retarded_oracle.hpp"
#include "shadowkin/scene.hpp"
#include "shadowkin/signaling.hpp"

using shadowkin::Scene;
using shadowkin::ValidationError;
using shadowkin::validate_scene;
namespace sig = shadowkin::signaling;

namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo * std::exp(unit_interval(rng) * std::log(hi / lo));
}

Scene random_scene(std::mt19937_64& rng) {
  const double l = log_uniform(rng, 1e-2, 1e2);
  const double s = log_uniform(rng, 1e-2, 1e2);
  const double L = l * log_uniform(rng, 1.001, 1e4);
  const double v = 1e-3 + unit_interval(rng) * (1.0 - 2e-3);
  return validate_scene({L, l, s, v, 1.0});
}

// L beyond which the head start no longer covers the crossing distance:
// v_dd_min <= c  <=>  L <= l + s * sqrt((c/v)^2 - 1).
double channel_edge(const Scene& sc) {
  const double r = sc.c / sc.v;
  return sc.l + sc.s * std::sqrt(r * r - 1.0);
}

bool near_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

TEST_CASE("signaling: feasible channel behind a superluminal-looking shadow") {
  const auto rep = sig::analyze(validate_scene({150.0, 1.0, 2.0, 0.01, 1.0}));
  CHECK(rep.naive_superluminal);
  CHECK(rep.t == 200.0);
  CHECK(rep.xz_distance == 149.01342221424215);
  CHECK(rep.v_dd_min == 0.7450671110712108);
  CHECK(rep.channel_feasible);
  CHECK(rep.verdict == sig::Verdict::kFeasible);
  CHECK(rep.ineq21_lhs == 22205.0);  // 1 * (149^2 + 2^2)
  CHECK(rep.ineq21_rhs == 90000.0);  // (150 * 2)^2
  CHECK(rep.anti_bell_holds);
  CHECK(rep.asymptotic_ls);
  CHECK(rep.xy_light_time == 300.0);  // S / c
  CHECK_FALSE(rep.threshold_boundary);
  CHECK_FALSE(rep.channel_boundary);
  CHECK_FALSE(rep.anti_bell_boundary);
}

TEST_CASE("signaling: rival device would need 2.48 c") {
  const auto rep = sig::analyze(validate_scene({250.0, 2.0, 1.0, 0.01, 1.0}));
  CHECK(rep.naive_superluminal);
  CHECK(rep.t == 100.0);
  CHECK(rep.xz_distance == 248.0020161208372);
  CHECK(rep.v_dd_min == 2.480020161208372);
  CHECK_FALSE(rep.channel_feasible);
  CHECK(rep.verdict == sig::Verdict::kInfeasible);
  CHECK_FALSE(rep.asymptotic_ls);
}

TEST_CASE("signaling: threshold scene is infeasible and flagged") {
  // L sits exactly on l c / v: the naive estimate only reaches c, so there
  // is nothing superluminal to exploit, feasible channel or not.
  const auto rep = sig::analyze(validate_scene({2.0, 1.0, 1.0, 0.5, 1.0}));
  CHECK_FALSE(rep.naive_superluminal);
  CHECK(rep.channel_feasible);
  CHECK(rep.verdict == sig::Verdict::kInfeasible);
  CHECK(rep.threshold_boundary);
}

TEST_CASE("signaling: geometric inequality with exact integer cases") {
  // (l, s, L) = (1, 2, 100): 1 * (99^2 + 4) = 9805 < 40000 = (100 * 2)^2.
  CHECK(sig::anti_bell_check(1.0, 2.0, 100.0));
  // Swapped: 4 * (98^2 + 1) = 38420 >= 10000.
  CHECK_FALSE(sig::anti_bell_check(2.0, 1.0, 100.0));

  // The same integers must appear in an analysis of the matching scene.
  const auto a = sig::analyze(validate_scene({100.0, 1.0, 2.0, 0.3, 1.0}));
  CHECK(a.ineq21_lhs == 9805.0);
  CHECK(a.ineq21_rhs == 40000.0);
  CHECK(a.anti_bell_holds);
  const auto b = sig::analyze(validate_scene({100.0, 2.0, 1.0, 0.3, 1.0}));
  CHECK(b.ineq21_lhs == 38420.0);
  CHECK(b.ineq21_rhs == 10000.0);
  CHECK_FALSE(b.anti_bell_holds);
}

TEST_CASE("signaling: equal offsets always satisfy the inequality") {
  // l = s reduces the inequality to (L - l)^2 + l^2 < L^2, i.e. l < 2L.
  for (double a : {1e-3, 1.0, 7.0}) {
    for (double factor : {1.001, 2.0, 1e3}) {
      CHECK(sig::anti_bell_check(a, a, a * factor));
    }
  }
}

TEST_CASE("signaling: inequality arguments are validated") {
  CHECK_THROWS_AS(sig::anti_bell_check(0.0, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(sig::anti_bell_check(-1.0, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(sig::anti_bell_check(10.0, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(sig::anti_bell_check(11.0, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(sig::anti_bell_check(1.0, 0.0, 10.0), ValidationError);
  CHECK_THROWS_AS(sig::anti_bell_check(1.0, -2.0, 10.0), ValidationError);
}

TEST_CASE("signaling: random-scene invariants") {
  std::mt19937_64 rng(90210u);
  std::size_t feasible_seen = 0;
  for (int i = 0; i < 10000; ++i) {
    const Scene scene = random_scene(rng);
    CAPTURE(scene.L);
    CAPTURE(scene.l);
    CAPTURE(scene.s);
    CAPTURE(scene.v);
    const auto rep = sig::analyze(scene);

    REQUIRE(rep.t > 0.0);
    REQUIRE(rep.xz_distance > 0.0);
    REQUIRE(rep.v_dd_min > 0.0);
    REQUIRE(rep.ineq21_lhs > 0.0);
    REQUIRE(rep.ineq21_rhs > 0.0);
    REQUIRE(rep.xy_light_time > 0.0);

    // A feasible channel behind a superluminal-looking shadow forces the
    // geometric inequality, with no exceptions anywhere in the domain.
    if (rep.naive_superluminal && rep.channel_feasible) {
      REQUIRE(rep.anti_bell_holds);
      REQUIRE(rep.verdict == sig::Verdict::kFeasible);
      ++feasible_seen;
    } else {
      REQUIRE(rep.verdict == sig::Verdict::kInfeasible);
    }

    // Independent algebraic route to the same verdict, away from edges.
    const double edge = channel_edge(scene);
    const bool near_threshold = near_rel(scene.L * scene.v, scene.l * scene.c, 1e-9);
    const bool near_edge = near_rel(scene.L, edge, 1e-9);
    if (!near_threshold && !near_edge) {
      const bool boxed =
          scene.L * scene.v > scene.l * scene.c && scene.L <= edge;
      REQUIRE((rep.verdict == sig::Verdict::kFeasible) == boxed);
    }

    // Far screen: feasibility pins the occluder closer than the stop height.
    if (scene.L >= 100.0 * std::max(scene.l, scene.s)) {
      if (rep.verdict == sig::Verdict::kFeasible) {
        REQUIRE(scene.l < scene.s * 1.01);
      }
      if (rep.anti_bell_holds) {
        REQUIRE(scene.s > scene.l * 0.99);
      }
    }

    // The shadow itself still never beats light to the far edge.
    REQUIRE(shadowkin::kinematics::average_shadow_speed(scene) < scene.c);
  }
  // The sampler must actually exercise the feasible branch.
  CHECK(feasible_seen > 100);
}

TEST_CASE("signaling: verdict survives rescaling all lengths") {
  std::mt19937_64 rng(5150u);
  for (int i = 0; i < 1000; ++i) {
    const Scene scene = random_scene(rng);
    const auto base = sig::analyze(scene);
    if (base.threshold_boundary || base.channel_boundary ||
        base.anti_bell_boundary) {
      continue;
    }
    for (double k : {1e-3, 1e3}) {
      const Scene scaled = validate_scene(
          {scene.L * k, scene.l * k, scene.s * k, scene.v, scene.c});
      const auto rep = sig::analyze(scaled);
      REQUIRE(rep.naive_superluminal == base.naive_superluminal);
      REQUIRE(rep.channel_feasible == base.channel_feasible);
      REQUIRE(rep.anti_bell_holds == base.anti_bell_holds);
      REQUIRE(rep.asymptotic_ls == base.asymptotic_ls);
      REQUIRE(rep.verdict == base.verdict);
      REQUIRE(rep.v_dd_min == doctest::Approx(base.v_dd_min).epsilon(1e-12));
    }
  }
}

TEST_CASE("signaling: slow-occluder sweep lands inside the analytic box") {
  const auto result = sig::sweep({0.5, 4.0}, {0.5, 4.0}, {50.0, 400.0},
                                 0.01, 1.0, 20);
  CHECK(result.v == 0.01);
  CHECK(result.c == 1.0);
  REQUIRE(result.points.size() == 8000);
  CHECK(result.summary.total_points == 8000);
  CHECK(result.summary.any_feasible);
  CHECK(result.summary.feasible_count > 0);
  CHECK(result.summary.feasible_fraction ==
        static_cast<double>(result.summary.feasible_count) / 8000.0);

  std::size_t feasible = 0;
  for (const auto& p : result.points) {
    if (p.report.verdict != sig::Verdict::kFeasible) continue;
    ++feasible;
    // c / v = 100: the feasible region fits l c/v < L <= s c/v, which
    // forces l < s. Grid points landing exactly on L = l c/v get their
    // verdict from sub-ulp noise; the boundary flag marks those.
    REQUIRE(p.L > 100.0 * p.l * (1.0 - 1e-9));
    REQUIRE(p.L <= 100.0 * p.s * (1.0 + 1e-9));
    if (p.report.threshold_boundary) {
      REQUIRE(p.l <= p.s);
    } else {
      REQUIRE(p.l < p.s);
    }
    REQUIRE(p.l >= result.summary.l_min);
    REQUIRE(p.l <= result.summary.l_max);
    REQUIRE(p.s >= result.summary.s_min);
    REQUIRE(p.s <= result.summary.s_max);
    REQUIRE(p.L >= result.summary.L_min);
    REQUIRE(p.L <= result.summary.L_max);
  }
  CHECK(feasible == result.summary.feasible_count);
}

TEST_CASE("signaling: fast-occluder sweep agrees with analyze point by point") {
  const auto result =
      sig::sweep({0.5, 0.9}, {0.5, 4.0}, {1.0, 6.0}, 0.9, 1.0, 20);
  REQUIRE(result.points.size() == 8000);
  CHECK(result.summary.any_feasible);
  // Fast occluder: the feasible slab L <= l + 0.484 s is narrow.
  CHECK(result.summary.feasible_fraction < 0.2);

  for (const auto& p : result.points) {
    const auto direct =
        sig::analyze(validate_scene({p.L, p.l, p.s, result.v, result.c}));
    REQUIRE(p.report.verdict == direct.verdict);
    REQUIRE(p.report.v_dd_min == direct.v_dd_min);
    REQUIRE(p.report.xz_distance == direct.xz_distance);
    REQUIRE(p.report.ineq21_lhs == direct.ineq21_lhs);
    REQUIRE(p.report.anti_bell_holds == direct.anti_bell_holds);
  }
}

TEST_CASE("signaling: sweep ordering and axis endpoints") {
  const auto result =
      sig::sweep({1.0, 2.0}, {3.0, 4.0}, {100.0, 200.0}, 0.01, 1.0, 3);
  REQUIRE(result.points.size() == 27);
  // Slowest axis l, then s, then L; both range ends included exactly.
  CHECK(result.points.front().l == 1.0);
  CHECK(result.points.front().s == 3.0);
  CHECK(result.points.front().L == 100.0);
  CHECK(result.points[1].L == 150.0);
  CHECK(result.points[2].L == 200.0);
  CHECK(result.points[3].s == 3.5);
  CHECK(result.points[9].l == 1.5);
  CHECK(result.points.back().l == 2.0);
  CHECK(result.points.back().s == 4.0);
  CHECK(result.points.back().L == 200.0);
}

TEST_CASE("signaling: degenerate and empty sweep axes") {
  SUBCASE("collapsed axes give a single point equal to analyze") {
    const auto result =
        sig::sweep({1.0, 1.0}, {2.0, 2.0}, {100.0, 100.0}, 0.3, 1.0, 20);
    REQUIRE(result.points.size() == 1);
    CHECK(result.summary.total_points == 1);
    const auto direct = sig::analyze(validate_scene({100.0, 1.0, 2.0, 0.3, 1.0}));
    CHECK(result.points[0].report.verdict == direct.verdict);
    CHECK(result.points[0].report.v_dd_min == direct.v_dd_min);
  }
  SUBCASE("reversed range empties the whole grid") {
    const auto result =
        sig::sweep({4.0, 0.5}, {0.5, 4.0}, {50.0, 400.0}, 0.01, 1.0, 20);
    CHECK(result.points.empty());
    CHECK(result.summary.total_points == 0);
    CHECK_FALSE(result.summary.any_feasible);
    CHECK(result.summary.feasible_count == 0);
    CHECK(result.summary.feasible_fraction == 0.0);
  }
}

TEST_CASE("signaling: sweep rejects invalid grids") {
  SUBCASE("a grid point with l >= L is a scene error, not a skip") {
    CHECK_THROWS_AS(
        sig::sweep({0.5, 60.0}, {1.0, 1.0}, {50.0, 400.0}, 0.01, 1.0, 20),
        ValidationError);
  }
  SUBCASE("speed out of range") {
    CHECK_THROWS_AS(
        sig::sweep({1.0, 2.0}, {1.0, 2.0}, {50.0, 60.0}, 1.5, 1.0, 5),
        ValidationError);
    CHECK_THROWS_AS(
        sig::sweep({1.0, 2.0}, {1.0, 2.0}, {50.0, 60.0}, 0.01, -1.0, 5),
        ValidationError);
  }
  SUBCASE("zero steps") {
    CHECK_THROWS_AS(
        sig::sweep({1.0, 2.0}, {1.0, 2.0}, {50.0, 60.0}, 0.01, 1.0, 0),
        ValidationError);
  }
  SUBCASE("grid larger than the point budget") {
    CHECK_THROWS_AS(
        sig::sweep({0.5, 4.0}, {0.5, 4.0}, {50.0, 400.0}, 0.01, 1.0, 20, 100),
        shadowkin::oracle::GridBudgetError);
  }
}
