#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "shadowkin/kinematics.hpp"
#include "shadowkin/retarded_oracle.hpp"
#include "shadowkin/scene.hpp"
#include "shadowkin/signaling.hpp"

namespace shadowkin::io {

using json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly x (covers 15+
/// significant digits). Used for every number written to a file, JSON and
/// CSV alike, so both formats carry identical values.
std::string format_full(double x);

/// 6 significant digits, for human-facing stdout rendering.
std::string format_display(double x);

json to_json(const Scene& scene);
json to_json(const kinematics::KinematicsReport& report);
json to_json(const kinematics::SubluminalityCertificate& cert);
json to_json(const signaling::SignalingReport& report);
json to_json(const signaling::SweepSummary& summary);

/// Strict parse: object with keys among {L, l, s, v, c}, all numeric and
/// finite, L/l/s/v required, c defaulting to kSpeedOfLight. Unknown keys and
/// wrong types throw ValidationError; the result is validated.
Scene scene_from_json(const nlohmann::json& doc);

/// Serializes doc with every double rendered by format_full.
std::string render_full(const json& doc);

/// Serializes doc with every double rendered by format_display.
std::string render_display(const json& doc);

std::string to_csv(const kinematics::KinematicsReport& report);
std::string to_csv(const kinematics::SubluminalityCertificate& cert);

/// Columns Y,T,state; rows time-major (all heights at t[0], then t[1], ...).
std::string timeline_csv(const oracle::ScreenTimeline& timeline);

/// Columns T,Y.
std::string worldline_csv(const std::vector<oracle::WorldlinePoint>& points);

/// One row per grid point, columns l,s,L,v,naive_superluminal,v_dd_min,
/// channel_feasible,ineq21_lhs,ineq21_rhs,anti_bell_holds,asymptotic_ls,
/// verdict.
std::string sweep_csv(const signaling::SweepResult& result);

const char* to_string(signaling::Verdict verdict);
const char* to_string(oracle::SampleState state);
const char* to_string(oracle::EmissionConvention convention);

/// Writes to path via a temporary file + rename so a crash never leaves a
/// half-written file at path. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace shadowkin::io
