#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "shadowkin/kinematics.hpp"
#include "shadowkin/retarded_oracle.hpp"
#include "shadowkin/scene.hpp"
#include "shadowkin/serialization.hpp"
#include "shadowkin/signaling.hpp"
#include "shadowkin/verification.hpp"

namespace {

using shadowkin::Scene;
using shadowkin::ValidationError;
namespace io = shadowkin::io;
namespace kin = shadowkin::kinematics;
namespace oracle = shadowkin::oracle;
namespace signaling = shadowkin::signaling;
namespace verification = shadowkin::verification;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;
constexpr int kExitGap = 4;
constexpr int kExitCounterexample = 5;

/// Values read from a --config file. Inline flags override any of these;
/// these override built-in defaults.
struct Config {
  std::optional<nlohmann::json> scene;
  std::optional<std::string> convention;
  std::optional<double> dy, dt, eps, dominance_ratio;
  std::optional<std::size_t> budget;
  std::optional<std::string> out, format;
};

double require_number(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number() || !std::isfinite(value.get<double>())) {
    throw ValidationError(key,
                          "config key \"" + key + "\" must be a finite number");
  }
  return value.get<double>();
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file " + path);
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config", "config file " + path +
                                        " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("config", "config file must hold a JSON object");
  }
  Config cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "scene") {
      if (!value.is_object()) {
        throw ValidationError("scene", "config key \"scene\" must be an object");
      }
      cfg.scene = value;
    } else if (key == "convention") {
      if (!value.is_string()) {
        throw ValidationError(key, "config key \"convention\" must be a string");
      }
      const auto name = value.get<std::string>();
      if (name != "projector-on" && name != "steady-beam") {
        throw ValidationError(
            key, "convention must be \"projector-on\" or \"steady-beam\"");
      }
      cfg.convention = name;
    } else if (key == "dy") {
      cfg.dy = require_number(value, key);
    } else if (key == "dt") {
      cfg.dt = require_number(value, key);
    } else if (key == "eps") {
      cfg.eps = require_number(value, key);
    } else if (key == "dominance_ratio") {
      cfg.dominance_ratio = require_number(value, key);
    } else if (key == "budget") {
      if (!value.is_number_integer() || value.get<std::int64_t>() <= 0) {
        throw ValidationError(
            key, "config key \"budget\" must be a positive integer");
      }
      cfg.budget = value.get<std::size_t>();
    } else if (key == "out") {
      if (!value.is_string()) {
        throw ValidationError(key, "config key \"out\" must be a string");
      }
      cfg.out = value.get<std::string>();
    } else if (key == "format") {
      if (!value.is_string() || (value.get<std::string>() != "json" &&
                                 value.get<std::string>() != "csv")) {
        throw ValidationError(key,
                              "config key \"format\" must be json or csv");
      }
      cfg.format = value.get<std::string>();
    } else {
      throw ValidationError(
          key, "unknown config key \"" + key +
                   "\" (known: scene, convention, dy, dt, eps, "
                   "dominance_ratio, budget, out, format; scene parameters "
                   "go inside the \"scene\" object)");
    }
  }
  return cfg;
}

struct SceneFlags {
  std::optional<double> L, l, s, v, c;
  bool natural_units = false;
};

void attach_scene_flags(CLI::App* cmd, SceneFlags& flags) {
  cmd->add_option("--L", flags.L, "projector-to-screen distance");
  cmd->add_option("--l", flags.l, "projector-to-occluder distance (0 < l < L)");
  cmd->add_option("--s", flags.s, "occluder transverse travel (> 0)");
  cmd->add_option("--v", flags.v, "occluder speed (0 < v < c)");
  auto* c_opt = cmd->add_option("--c", flags.c, "light speed (default 3e8)");
  auto* natural = cmd->add_flag("--natural-units", flags.natural_units,
                                "work with light speed = 1");
  c_opt->excludes(natural);
}

Scene resolve_scene(const Config& cfg, const SceneFlags& flags) {
  Scene scene;
  bool have_base = false;
  if (cfg.scene) {
    scene = io::scene_from_json(*cfg.scene);
    have_base = true;
  }
  if (!have_base) {
    const std::pair<const char*, const std::optional<double>&> required[] = {
        {"L", flags.L}, {"l", flags.l}, {"s", flags.s}, {"v", flags.v}};
    for (const auto& [name, value] : required) {
      if (!value.has_value()) {
        throw ValidationError(name, std::string("missing scene parameter --") +
                                        name + " (no config scene given)");
      }
    }
    scene.c = flags.natural_units ? 1.0 : shadowkin::kSpeedOfLight;
  } else if (flags.natural_units) {
    scene.c = 1.0;
  }
  if (flags.L) scene.L = *flags.L;
  if (flags.l) scene.l = *flags.l;
  if (flags.s) scene.s = *flags.s;
  if (flags.v) scene.v = *flags.v;
  if (flags.c) scene.c = *flags.c;
  return shadowkin::validate_scene(scene);
}

struct OutputFlags {
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void attach_output_flags(CLI::App* cmd, OutputFlags& flags,
                         const char* out_help) {
  cmd->add_option("--out", flags.out, out_help);
  cmd->add_option("--format", flags.format, "file format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

std::optional<std::string> resolve_out(const Config& cfg,
                                       const OutputFlags& flags) {
  if (flags.out) return flags.out;
  return cfg.out;
}

std::string resolve_format(const Config& cfg, const OutputFlags& flags) {
  if (flags.format) return *flags.format;
  if (cfg.format) return *cfg.format;
  return "json";
}

int run_report(const Config& cfg, const SceneFlags& scene_flags,
               const OutputFlags& output, std::optional<double> ratio_flag) {
  const Scene scene = resolve_scene(cfg, scene_flags);
  const double ratio = ratio_flag    ? *ratio_flag
                       : cfg.dominance_ratio
                           ? *cfg.dominance_ratio
                           : kin::kDefaultDominanceRatio;
  const auto report = kin::report(scene, ratio);
  const auto cert = kin::subluminality_certificate(scene);
  io::json doc;
  doc["kinematics"] = io::to_json(report);
  doc["certificate"] = io::to_json(cert);
  std::cout << io::render_display(doc);
  if (const auto out = resolve_out(cfg, output)) {
    if (resolve_format(cfg, output) == "json") {
      io::write_file_atomic(*out, io::render_full(doc));
    } else {
      io::write_file_atomic(*out, io::to_csv(report) + "\n" + io::to_csv(cert));
    }
    std::cout << "wrote " << *out << "\n";
  }
  return kExitOk;
}

struct GridFlags {
  std::optional<double> dy, dt, eps;
  std::optional<std::string> convention;
};

int run_simulate(const Config& cfg, const SceneFlags& scene_flags,
                 const GridFlags& grid_flags, const OutputFlags& output) {
  const Scene scene = resolve_scene(cfg, scene_flags);
  const std::string conv_name = grid_flags.convention ? *grid_flags.convention
                                : cfg.convention      ? *cfg.convention
                                                      : "projector-on";
  const auto convention = conv_name == "steady-beam"
                              ? oracle::EmissionConvention::kSteadyBeam
                              : oracle::EmissionConvention::kProjectorOnAtZero;
  oracle::GridSpec grid = oracle::default_grid(scene);
  if (cfg.dy) grid.dy = *cfg.dy;
  if (cfg.dt) grid.dt = *cfg.dt;
  if (cfg.budget) grid.sample_budget = *cfg.budget;
  if (grid_flags.dy) grid.dy = *grid_flags.dy;
  if (grid_flags.dt) grid.dt = *grid_flags.dt;
  if (grid_flags.eps) {
    grid.eps = *grid_flags.eps;
  } else if (cfg.eps) {
    grid.eps = *cfg.eps;
  } else {
    // keep the default coupling in step with any dy/dt override
    grid.eps = std::max(scene.v * grid.dt, grid.dy * scene.l / scene.L);
  }

  const auto out_prefix = resolve_out(cfg, output);
  if (!out_prefix) {
    throw ValidationError("out", "simulate needs --out PREFIX for its CSVs");
  }

  const auto trajectory = shadowkin::rise_and_stop_trajectory(scene);
  const auto timeline =
      oracle::simulate_transport(scene, trajectory, convention, grid);
  const auto events = oracle::measure_events(timeline);
  const auto worldline = oracle::extract_worldline(timeline);

  const double onset_ref =
      convention == oracle::EmissionConvention::kProjectorOnAtZero
          ? kin::initial_latency(scene)
          : (scene.L - scene.l) / scene.c;
  const double stop_ref = kin::total_time(scene);

  const std::string timeline_path = *out_prefix + ".timeline.csv";
  const std::string worldline_path = *out_prefix + ".worldline.csv";
  io::write_file_atomic(timeline_path, io::timeline_csv(timeline));
  io::write_file_atomic(worldline_path, io::worldline_csv(worldline));

  std::cout << "convention: " << io::to_string(convention) << "\n"
            << "grid: dy=" << io::format_display(grid.dy)
            << " dt=" << io::format_display(grid.dt)
            << " eps=" << io::format_display(grid.eps) << " ("
            << timeline.y.size() << " x " << timeline.t.size()
            << " samples)\n"
            << "onset at Y=0: measured=" << io::format_display(events.onset_y0)
            << " analytic=" << io::format_display(onset_ref)
            << " |delta|=" << io::format_display(
                   std::fabs(events.onset_y0 - onset_ref))
            << "\n"
            << "stop at Y=S: measured=" << io::format_display(events.stop_ys)
            << " analytic=" << io::format_display(stop_ref)
            << " |delta|=" << io::format_display(
                   std::fabs(events.stop_ys - stop_ref))
            << "\n"
            << "wrote " << timeline_path << " (" << timeline.states.size()
            << " samples), " << worldline_path << " (" << worldline.size()
            << " points)\n";
  return kExitOk;
}

int run_verify(std::uint64_t trials, std::uint64_t seed, bool corrupt) {
  verification::Options options;
  options.trials = trials;
  options.seed = seed;
  options.corrupt_check = corrupt;
  const auto result = verification::run(options);
  std::cout << "trials: " << trials << "  seed: " << seed << "\n";
  if (result.ok()) {
    std::cout << "all checks passed (boundary-flagged scenes: "
              << result.boundary_flagged << ")\n";
    return kExitOk;
  }
  std::cout << "check failed: " << result.failure->check << "\n"
            << "after " << result.trials_run << " clean trials\n"
            << "counterexample:\n"
            << io::render_full(io::to_json(result.failure->scene))
            << result.failure->detail << "\n";
  return kExitCounterexample;
}

int run_signal(const Config& cfg, const SceneFlags& scene_flags,
               const OutputFlags& output) {
  const Scene scene = resolve_scene(cfg, scene_flags);
  const auto report = signaling::analyze(scene);
  const auto doc = io::to_json(report);
  std::cout << io::render_display(doc);
  if (const auto out = resolve_out(cfg, output)) {
    if (resolve_format(cfg, output) == "json") {
      io::write_file_atomic(*out, io::render_full(doc));
    } else {
      signaling::SweepResult single;
      single.v = scene.v;
      single.c = scene.c;
      single.points.push_back({scene.l, scene.s, scene.L, report});
      io::write_file_atomic(*out, io::sweep_csv(single));
    }
    std::cout << "wrote " << *out << "\n";
  }
  return kExitOk;
}

struct SweepFlags {
  std::string l_range, s_range, L_range;
  std::size_t steps = 20;
  std::optional<double> v, c;
  bool natural_units = false;
};

signaling::AxisRange parse_range(const std::string& text, const char* name) {
  const auto pos = text.find(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 == text.size()) {
    throw ValidationError(name, std::string("--") + name + " expects LO:HI");
  }
  signaling::AxisRange range{};
  try {
    std::size_t used = 0;
    range.lo = std::stod(text.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument(text);
    const std::string hi = text.substr(pos + 1);
    range.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ValidationError(name, std::string("--") + name +
                                    " expects numeric LO:HI, got " + text);
  }
  return range;
}

int run_sweep(const Config& cfg, const SweepFlags& flags,
              const OutputFlags& output) {
  if (flags.l_range.empty() || flags.s_range.empty() ||
      flags.L_range.empty()) {
    throw ValidationError("range",
                          "sweep needs --l-range, --s-range and --L-range");
  }
  if (!flags.v) {
    throw ValidationError("v", "sweep needs --v");
  }
  const double c =
      flags.c ? *flags.c
              : (flags.natural_units ? 1.0 : shadowkin::kSpeedOfLight);
  const auto out_prefix = resolve_out(cfg, output);
  if (!out_prefix) {
    throw ValidationError("out", "sweep needs --out PREFIX for its files");
  }
  const std::size_t budget = cfg.budget ? *cfg.budget : 10'000'000;
  const auto result = signaling::sweep(
      parse_range(flags.l_range, "l-range"), parse_range(flags.s_range, "s-range"),
      parse_range(flags.L_range, "L-range"), *flags.v, c, flags.steps, budget);

  const std::string csv_path = *out_prefix + ".csv";
  const std::string summary_path = *out_prefix + ".summary.json";
  const auto summary_doc = io::to_json(result.summary);
  io::write_file_atomic(csv_path, io::sweep_csv(result));
  io::write_file_atomic(summary_path, io::render_full(summary_doc));

  std::cout << io::render_display(summary_doc);
  if (!result.summary.any_feasible) {
    std::cout << "no feasible point in the requested grid\n";
  }
  std::cout << "wrote " << csv_path << " (" << result.points.size()
            << " rows), " << summary_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shadow kinematics on a screen: closed forms, a retarded-time "
               "simulator, and signaling feasibility analysis"};
  app.require_subcommand(1);

  std::string config_path;
  SceneFlags report_scene, simulate_scene, signal_scene;
  OutputFlags report_out, simulate_out, signal_out, sweep_out;
  GridFlags grid_flags;
  SweepFlags sweep_flags;
  std::optional<double> ratio_flag;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  bool corrupt = false;

  auto* report_cmd = app.add_subcommand(
      "report", "closed-form kinematics and the subluminality certificate");
  report_cmd->add_option("--config", config_path, "JSON config file");
  attach_scene_flags(report_cmd, report_scene);
  report_cmd->add_option("--ratio", ratio_flag,
                         "dominance ratio for the regime check (default 100)");
  attach_output_flags(report_cmd, report_out, "output file path");

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "retarded-time transport on a screen grid");
  simulate_cmd->add_option("--config", config_path, "JSON config file");
  attach_scene_flags(simulate_cmd, simulate_scene);
  simulate_cmd
      ->add_option("--convention", grid_flags.convention,
                   "emission convention")
      ->check(CLI::IsMember({"projector-on", "steady-beam"}));
  simulate_cmd->add_option("--dy", grid_flags.dy, "screen grid spacing");
  simulate_cmd->add_option("--dt", grid_flags.dt, "time grid spacing");
  simulate_cmd->add_option("--eps", grid_flags.eps, "blocking half-width");
  attach_output_flags(simulate_cmd, simulate_out,
                      "output prefix: writes PREFIX.timeline.csv and "
                      "PREFIX.worldline.csv");

  auto* verify_cmd = app.add_subcommand(
      "verify", "random-scene invariant battery with a fixed seed");
  verify_cmd->add_option("--trials", trials, "number of scenes (default 1e5)")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", seed, "RNG seed (default 42)");
  verify_cmd->add_flag("--corrupt-check", corrupt,
                       "self-test: inject a false invariant and expect a "
                       "counterexample");

  auto* signal_cmd = app.add_subcommand(
      "signal", "signaling feasibility for one scene, or a grid sweep");
  signal_cmd->add_option("--config", config_path, "JSON config file");
  attach_scene_flags(signal_cmd, signal_scene);
  attach_output_flags(signal_cmd, signal_out, "output file path");

  auto* sweep_cmd = signal_cmd->add_subcommand(
      "sweep", "feasibility over an (l, s, L) grid at fixed v");
  sweep_cmd->add_option("--config", config_path, "JSON config file");
  sweep_cmd->add_option("--l-range", sweep_flags.l_range, "LO:HI for l");
  sweep_cmd->add_option("--s-range", sweep_flags.s_range, "LO:HI for s");
  sweep_cmd->add_option("--L-range", sweep_flags.L_range, "LO:HI for L");
  sweep_cmd->add_option("--steps", sweep_flags.steps,
                        "grid points per axis (default 20)")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--v", sweep_flags.v, "occluder speed");
  auto* sweep_c = sweep_cmd->add_option("--c", sweep_flags.c, "light speed");
  auto* sweep_nat = sweep_cmd->add_flag("--natural-units",
                                        sweep_flags.natural_units,
                                        "work with light speed = 1");
  sweep_c->excludes(sweep_nat);
  attach_output_flags(sweep_cmd, sweep_out,
                      "output prefix: writes PREFIX.csv and "
                      "PREFIX.summary.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const Config cfg =
        config_path.empty() ? Config{} : load_config(config_path);
    if (sweep_cmd->parsed()) {
      return run_sweep(cfg, sweep_flags, sweep_out);
    }
    if (signal_cmd->parsed()) {
      return run_signal(cfg, signal_scene, signal_out);
    }
    if (report_cmd->parsed()) {
      return run_report(cfg, report_scene, report_out, ratio_flag);
    }
    if (simulate_cmd->parsed()) {
      return run_simulate(cfg, simulate_scene, grid_flags, simulate_out);
    }
    if (verify_cmd->parsed()) {
      return run_verify(trials, seed, corrupt);
    }
    std::cerr << "error: no subcommand\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const oracle::GridBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const oracle::WorldlineGapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
