#include "shadowkin/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace shadowkin::io {

namespace {

const char* bool_str(bool b) { return b ? "true" : "false"; }

void append_escaped(std::string& out, const std::string& text) {
  out += '"';
  for (char ch : text) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

using DoubleFormatter = std::string (*)(double);

void render_value(const json& value, std::string& out, int depth,
                  DoubleFormatter fmt) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (value.type()) {
    case nlohmann::detail::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, item] : value.items()) {
        out += inner;
        append_escaped(out, key);
        out += ": ";
        render_value(item, out, depth + 1, fmt);
        if (++i < value.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        out += inner;
        render_value(value[i], out, depth + 1, fmt);
        if (i + 1 < value.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case nlohmann::detail::value_t::string:
      append_escaped(out, value.get<std::string>());
      return;
    case nlohmann::detail::value_t::boolean:
      out += bool_str(value.get<bool>());
      return;
    case nlohmann::detail::value_t::number_float:
      out += fmt(value.get<double>());
      return;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      return;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      return;
    default:
      out += "null";
      return;
  }
}

std::string render(const json& doc, DoubleFormatter fmt) {
  std::string out;
  render_value(doc, out, 0, fmt);
  out += '\n';
  return out;
}

}  // namespace

std::string format_full(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

std::string format_display(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json to_json(const Scene& scene) {
  json j;
  j["L"] = scene.L;
  j["l"] = scene.l;
  j["s"] = scene.s;
  j["v"] = scene.v;
  j["c"] = scene.c;
  return j;
}

json to_json(const kinematics::KinematicsReport& report) {
  json j;
  j["t"] = report.t;
  j["t1"] = report.t1;
  j["t2"] = report.t2;
  j["T"] = report.T;
  j["S"] = report.S;
  j["v_avg"] = report.v_avg;
  j["v_naive"] = report.v_naive;
  j["naive_superluminal"] = report.naive_superluminal;
  j["regime_ok"] = report.regime_ok;
  return j;
}

json to_json(const kinematics::SubluminalityCertificate& cert) {
  json j;
  j["lhs_linear"] = cert.lhs_linear;
  j["mid"] = cert.mid;
  j["rhs"] = cert.rhs;
  j["chain_holds"] = cert.chain_holds;
  j["squared_form_valid"] = cert.squared_form_valid;
  j["v_ratio"] = cert.v_ratio;
  j["threshold_boundary"] = cert.threshold_boundary;
  return j;
}

json to_json(const signaling::SignalingReport& report) {
  json j;
  j["naive_superluminal"] = report.naive_superluminal;
  j["t"] = report.t;
  j["xz_distance"] = report.xz_distance;
  j["v_dd_min"] = report.v_dd_min;
  j["channel_feasible"] = report.channel_feasible;
  j["ineq21_lhs"] = report.ineq21_lhs;
  j["ineq21_rhs"] = report.ineq21_rhs;
  j["anti_bell_holds"] = report.anti_bell_holds;
  j["asymptotic_ls"] = report.asymptotic_ls;
  j["verdict"] = to_string(report.verdict);
  j["xy_light_time"] = report.xy_light_time;
  j["threshold_boundary"] = report.threshold_boundary;
  j["channel_boundary"] = report.channel_boundary;
  j["anti_bell_boundary"] = report.anti_bell_boundary;
  return j;
}

json to_json(const signaling::SweepSummary& summary) {
  json j;
  j["total_points"] = summary.total_points;
  j["feasible_count"] = summary.feasible_count;
  j["feasible_fraction"] = summary.feasible_fraction;
  j["any_feasible"] = summary.any_feasible;
  if (summary.any_feasible) {
    json box;
    box["l"] = json::array({summary.l_min, summary.l_max});
    box["s"] = json::array({summary.s_min, summary.s_max});
    box["L"] = json::array({summary.L_min, summary.L_max});
    j["feasible_box"] = box;
  } else {
    j["feasible_box"] = nullptr;
  }
  return j;
}

Scene scene_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ValidationError("scene", "scene must be a JSON object");
  }
  static constexpr const char* kKnown[] = {"L", "l", "s", "v", "c"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* name : kKnown) known = known || key == name;
    if (!known) {
      throw ValidationError(key, "unknown scene key \"" + key + "\"");
    }
  }
  const auto read = [&doc](const char* key, bool required,
                           double fallback) -> double {
    const auto it = doc.find(key);
    if (it == doc.end()) {
      if (required) {
        throw ValidationError(key, std::string("missing scene key \"") + key +
                                       "\"");
      }
      return fallback;
    }
    if (!it->is_number()) {
      throw ValidationError(key, std::string("scene key \"") + key +
                                     "\" must be a number");
    }
    const double value = it->get<double>();
    if (!std::isfinite(value)) {
      throw ValidationError(key, std::string("scene key \"") + key +
                                     "\" must be finite");
    }
    return value;
  };
  Scene scene;
  scene.L = read("L", true, 0.0);
  scene.l = read("l", true, 0.0);
  scene.s = read("s", true, 0.0);
  scene.v = read("v", true, 0.0);
  scene.c = read("c", false, kSpeedOfLight);
  return validate_scene(scene);
}

std::string render_full(const json& doc) { return render(doc, format_full); }

std::string render_display(const json& doc) {
  return render(doc, format_display);
}

std::string to_csv(const kinematics::KinematicsReport& r) {
  std::string out =
      "t,t1,t2,T,S,v_avg,v_naive,naive_superluminal,regime_ok\n";
  out += format_full(r.t) + ',' + format_full(r.t1) + ',' + format_full(r.t2) +
         ',' + format_full(r.T) + ',' + format_full(r.S) + ',' +
         format_full(r.v_avg) + ',' + format_full(r.v_naive) + ',' +
         bool_str(r.naive_superluminal) + ',' + bool_str(r.regime_ok) + '\n';
  return out;
}

std::string to_csv(const kinematics::SubluminalityCertificate& c) {
  std::string out =
      "lhs_linear,mid,rhs,chain_holds,squared_form_valid,v_ratio,"
      "threshold_boundary\n";
  out += format_full(c.lhs_linear) + ',' + format_full(c.mid) + ',' +
         format_full(c.rhs) + ',' + bool_str(c.chain_holds) + ',' +
         bool_str(c.squared_form_valid) + ',' + format_full(c.v_ratio) + ',' +
         bool_str(c.threshold_boundary) + '\n';
  return out;
}

std::string timeline_csv(const oracle::ScreenTimeline& timeline) {
  std::string out = "Y,T,state\n";
  out.reserve(out.size() + timeline.states.size() * 24);
  for (std::size_t it = 0; it < timeline.t.size(); ++it) {
    const std::string t_str = format_full(timeline.t[it]);
    for (std::size_t iy = 0; iy < timeline.y.size(); ++iy) {
      out += format_full(timeline.y[iy]);
      out += ',';
      out += t_str;
      out += ',';
      out += to_string(timeline.at(it, iy));
      out += '\n';
    }
  }
  return out;
}

std::string worldline_csv(const std::vector<oracle::WorldlinePoint>& points) {
  std::string out = "T,Y\n";
  out.reserve(out.size() + points.size() * 40);
  for (const auto& p : points) {
    out += format_full(p.t);
    out += ',';
    out += format_full(p.y);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const signaling::SweepResult& result) {
  std::string out =
      "l,s,L,v,naive_superluminal,v_dd_min,channel_feasible,ineq21_lhs,"
      "ineq21_rhs,anti_bell_holds,asymptotic_ls,verdict\n";
  out.reserve(out.size() + result.points.size() * 120);
  const std::string v_str = format_full(result.v);
  for (const auto& p : result.points) {
    const auto& r = p.report;
    out += format_full(p.l) + ',' + format_full(p.s) + ',' +
           format_full(p.L) + ',' + v_str + ',' +
           bool_str(r.naive_superluminal) + ',' + format_full(r.v_dd_min) +
           ',' + bool_str(r.channel_feasible) + ',' +
           format_full(r.ineq21_lhs) + ',' + format_full(r.ineq21_rhs) + ',' +
           bool_str(r.anti_bell_holds) + ',' + bool_str(r.asymptotic_ls) +
           ',' + to_string(r.verdict) + '\n';
  }
  return out;
}

const char* to_string(signaling::Verdict verdict) {
  return verdict == signaling::Verdict::kFeasible ? "Feasible" : "Infeasible";
}

const char* to_string(oracle::SampleState state) {
  switch (state) {
    case oracle::SampleState::kLit: return "lit";
    case oracle::SampleState::kDark: return "dark";
    default: return "no-light-yet";
  }
}

const char* to_string(oracle::EmissionConvention convention) {
  return convention == oracle::EmissionConvention::kProjectorOnAtZero
             ? "projector-on"
             : "steady-beam";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp + " for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("failed while writing " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot move " + tmp + " into place at " + path);
  }
}

}  // namespace shadowkin::io
