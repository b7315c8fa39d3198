#include "daa/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "daa/errors.hpp"
#include "json.hpp"

namespace daa {

namespace {

using nlohmann::json;

}  // namespace

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016" PRIx64, h);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json params_json(const SimParams& p) {
  json j;
  j["dt"] = p.dt;
  j["total_time_s"] = p.total_time_s;
  j["own_cruise_speed"] = p.own_cruise_speed;
  j["own_cruise_alt"] = p.own_cruise_alt;
  j["recovery_lookahead_s"] = p.recovery_lookahead_s;
  j["agent"] = {{"wait_threshold_s", p.agent.wait_threshold_s},
                {"projection_horizon_s", p.agent.projection_horizon_s},
                {"sm_horizon_s", p.agent.sm_horizon_s},
                {"alert_horizon_s", p.agent.alert_horizon_s}};
  j["dynamics"] = {{"max_turn_rate_dps", rad2deg(p.dynamics.max_turn_rate)},
                   {"vz_slew_mps2", p.dynamics.vz_slew},
                   {"accel_mps2", p.dynamics.accel}};
  j["thresholds"] = {{"hmd_star_m", p.thresholds.hmd_star_m},
                     {"dh_star_m", p.thresholds.dh_star_m},
                     {"tau_mod_star_s", p.thresholds.tau_mod_star_s},
                     {"nmac_r_ft", p.thresholds.nmac_r_ft},
                     {"nmac_h_ft", p.thresholds.nmac_h_ft},
                     {"dmod_m", p.thresholds.dmod_m}};
  j["daa"] = {{"heading_offsets_deg", p.daa.heading_offsets_deg},
              {"vz_options_mps", p.daa.vz_options_mps}};
  json axes = json::array();
  for (Axis a : p.pilot.axis_order) axes.push_back(a == Axis::Horizontal ? "horizontal" : "vertical");
  json dirs = json::array();
  for (Direction d : p.pilot.direction_order) {
    switch (d) {
      case Direction::Left: dirs.push_back("left"); break;
      case Direction::Right: dirs.push_back("right"); break;
      case Direction::Up: dirs.push_back("up"); break;
      case Direction::Down: dirs.push_back("down"); break;
      default: dirs.push_back("none"); break;
    }
  }
  j["pilot"] = {{"reaction_mean_s", p.pilot.reaction_mean_s},
                {"reaction_sd_s", p.pilot.reaction_sd_s},
                {"reaction_min_s", p.pilot.reaction_min_s},
                {"axis_order", axes},
                {"direction_order", dirs}};
  return j;
}

SimParams params_from(const json& j) {
  SimParams p;
  p.dt = j.at("dt").get<double>();
  p.total_time_s = j.at("total_time_s").get<double>();
  p.own_cruise_speed = j.at("own_cruise_speed").get<double>();
  p.own_cruise_alt = j.at("own_cruise_alt").get<double>();
  p.recovery_lookahead_s = j.at("recovery_lookahead_s").get<double>();
  const auto& a = j.at("agent");
  p.agent.wait_threshold_s = a.at("wait_threshold_s").get<double>();
  p.agent.projection_horizon_s = a.at("projection_horizon_s").get<int>();
  p.agent.sm_horizon_s = a.at("sm_horizon_s").get<int>();
  p.agent.alert_horizon_s = a.at("alert_horizon_s").get<int>();
  const auto& d = j.at("dynamics");
  p.dynamics.max_turn_rate = deg2rad(d.at("max_turn_rate_dps").get<double>());
  p.dynamics.vz_slew = d.at("vz_slew_mps2").get<double>();
  p.dynamics.accel = d.at("accel_mps2").get<double>();
  const auto& t = j.at("thresholds");
  p.thresholds.hmd_star_m = t.at("hmd_star_m").get<double>();
  p.thresholds.dh_star_m = t.at("dh_star_m").get<double>();
  p.thresholds.tau_mod_star_s = t.at("tau_mod_star_s").get<double>();
  p.thresholds.nmac_r_ft = t.at("nmac_r_ft").get<double>();
  p.thresholds.nmac_h_ft = t.at("nmac_h_ft").get<double>();
  p.thresholds.dmod_m = t.at("dmod_m").get<double>();
  const auto& daa = j.at("daa");
  daa.at("heading_offsets_deg").get_to(p.daa.heading_offsets_deg);
  daa.at("vz_options_mps").get_to(p.daa.vz_options_mps);
  const auto& pi = j.at("pilot");
  p.pilot.reaction_mean_s = pi.at("reaction_mean_s").get<double>();
  p.pilot.reaction_sd_s = pi.at("reaction_sd_s").get<double>();
  p.pilot.reaction_min_s = pi.at("reaction_min_s").get<double>();
  p.pilot.axis_order.clear();
  for (const auto& s : pi.at("axis_order")) {
    p.pilot.axis_order.push_back(s.get<std::string>() == "horizontal" ? Axis::Horizontal : Axis::Vertical);
  }
  p.pilot.direction_order.clear();
  for (const auto& s : pi.at("direction_order")) {
    const std::string v = s.get<std::string>();
    Direction dir = Direction::None;
    if (v == "left") dir = Direction::Left;
    else if (v == "right") dir = Direction::Right;
    else if (v == "up") dir = Direction::Up;
    else if (v == "down") dir = Direction::Down;
    p.pilot.direction_order.push_back(dir);
  }
  return p;
}

json group_report_json(const GroupReport& g) {
  json j;
  j["group"] = g.group;
  j["encounters"] = g.encounters;
  j["k_samples"] = g.k_samples;
  j["wait_count"] = g.wait_count;
  j["nowait_count"] = g.nowait_count;
  j["receptions"] = g.receptions;
  j["exec_pilot"] = g.exec_pilot;
  j["exec_blended"] = g.exec_blended;
  j["exec_override"] = g.exec_override;
  j["blend_exact"] = g.blend_exact;
  j["blend_axis"] = g.blend_axis;
  j["blend_fallback"] = g.blend_fallback;
  j["lowc_steps"] = g.lowc_steps;
  j["nmac_steps"] = g.nmac_steps;
  j["lowc_encounters"] = g.lowc_encounters;
  j["p_lowc"] = g.p_lowc;
  j["p_nmac"] = g.p_nmac;
  j["rate_per_hr"] = g.rate_per_hr;
  j["likelihood"] = g.likelihood;
  j["mean_pi"] = g.mean_pi;
  j["max_pi"] = g.max_pi;
  j["mean_dev_h"] = g.mean_dev_h;
  j["mean_dev_v"] = g.mean_dev_v;
  j["total_hours"] = g.total_hours;
  return j;
}

GroupReport group_report_from(const json& j) {
  GroupReport g;
  g.group = j.at("group").get<std::string>();
  g.encounters = j.at("encounters").get<long>();
  g.k_samples = j.at("k_samples").get<long>();
  g.wait_count = j.at("wait_count").get<long>();
  g.nowait_count = j.at("nowait_count").get<long>();
  g.receptions = j.at("receptions").get<long>();
  g.exec_pilot = j.at("exec_pilot").get<long>();
  g.exec_blended = j.at("exec_blended").get<long>();
  g.exec_override = j.at("exec_override").get<long>();
  g.blend_exact = j.at("blend_exact").get<long>();
  g.blend_axis = j.at("blend_axis").get<long>();
  g.blend_fallback = j.at("blend_fallback").get<long>();
  g.lowc_steps = j.at("lowc_steps").get<long>();
  g.nmac_steps = j.at("nmac_steps").get<long>();
  g.lowc_encounters = j.at("lowc_encounters").get<long>();
  g.p_lowc = j.at("p_lowc").get<double>();
  g.p_nmac = j.at("p_nmac").get<double>();
  g.rate_per_hr = j.at("rate_per_hr").get<double>();
  g.likelihood = j.at("likelihood").get<std::string>();
  g.mean_pi = j.at("mean_pi").get<double>();
  g.max_pi = j.at("max_pi").get<double>();
  g.mean_dev_h = j.at("mean_dev_h").get<double>();
  g.mean_dev_v = j.at("mean_dev_v").get<double>();
  g.total_hours = j.at("total_hours").get<double>();
  return g;
}

}  // namespace

std::string sim_params_to_json(const SimParams& params) { return params_json(params).dump(2) + "\n"; }

SimParams sim_params_from_json(const std::string& text) {
  try {
    return params_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad simulation config: ") + e.what());
  }
}

std::string batch_report_to_json(const BatchReport& report) {
  json j;
  j["tool_version"] = report.tool_version;
  j["base_seed"] = report.base_seed;
  j["encounters_hash"] = report.encounters_hash;
  j["rate_note"] = report.rate_note;
  json groups = json::array();
  for (const auto& g : report.groups) groups.push_back(group_report_json(g));
  j["groups"] = groups;
  return j.dump(2) + "\n";
}

BatchReport batch_report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    BatchReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.base_seed = j.at("base_seed").get<std::uint64_t>();
    r.encounters_hash = j.at("encounters_hash").get<std::string>();
    r.rate_note = j.at("rate_note").get<std::string>();
    for (const auto& g : j.at("groups")) r.groups.push_back(group_report_from(g));
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad batch report: ") + e.what());
  }
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_report_tables(const BatchReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ostringstream os;
    os << "group,wait,no_wait\n";
    for (const auto& g : report.groups) os << g.group << ',' << g.wait_count << ',' << g.nowait_count << '\n';
    write_text_file((fs::path(out_dir) / "waiting_status.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,pilot_commands_received\n";
    for (const auto& g : report.groups) os << g.group << ',' << g.receptions << '\n';
    write_text_file((fs::path(out_dir) / "pilot_reception.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,daa_override,pilot,blended,blend_exact,blend_axis,blend_fallback\n";
    for (const auto& g : report.groups) {
      os << g.group << ',' << g.exec_override << ',' << g.exec_pilot << ',' << g.exec_blended << ','
         << g.blend_exact << ',' << g.blend_axis << ',' << g.blend_fallback << '\n';
    }
    write_text_file((fs::path(out_dir) / "command_execution.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "# " << report.rate_note << '\n';
    os << "group,p_lowc,p_nmac,lowc_encounters,rate_per_hr,likelihood,mean_pi,max_pi\n";
    for (const auto& g : report.groups) {
      os << g.group << ',' << fmt(g.p_lowc) << ',' << fmt(g.p_nmac) << ',' << g.lowc_encounters << ','
         << fmt(g.rate_per_hr) << ',' << g.likelihood << ',' << fmt(g.mean_pi) << ',' << fmt(g.max_pi)
         << '\n';
    }
    write_text_file((fs::path(out_dir) / "risk.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,horizontal_deviation_m,vertical_deviation_m\n";
    for (const auto& g : report.groups) {
      os << g.group << ',' << fmt(g.mean_dev_h) << ',' << fmt(g.mean_dev_v) << '\n';
    }
    write_text_file((fs::path(out_dir) / "trajectory_deviation.csv").string(), os.str());
  }
}

void write_comparison_tables(const std::vector<BatchReport>& reports, const std::string& reference_group,
                             const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (reports.empty()) throw ValidationError("comparison: no reports given");
  const std::string& hash = reports.front().encounters_hash;
  for (const auto& r : reports) {
    if (r.encounters_hash != hash) {
      throw ValidationError("comparison: reports were produced from different encounter sets");
    }
  }
  std::vector<GroupReport> groups;
  for (const auto& r : reports) {
    for (const auto& g : r.groups) groups.push_back(g);
  }
  const GroupReport* ref = nullptr;
  for (const auto& g : groups) {
    if (g.group == reference_group) ref = &g;
  }
  if (!ref) throw ValidationError("comparison: reference group '" + reference_group + "' not found");

  fs::create_directories(out_dir);
  {
    std::ostringstream os;
    os << "group,wait,no_wait,percent_reduction_vs_" << ref->group << '\n';
    for (const auto& g : groups) {
      const double pct = ref->nowait_count > 0
                             ? 100.0 * (ref->nowait_count - g.nowait_count) / ref->nowait_count
                             : 0.0;
      os << g.group << ',' << g.wait_count << ',' << g.nowait_count << ',' << fmt(pct) << '\n';
    }
    write_text_file((fs::path(out_dir) / "waiting_status_comparison.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,pilot_commands_received,percent_increment_vs_" << ref->group << '\n';
    for (const auto& g : groups) {
      const double pct =
          ref->receptions > 0 ? 100.0 * (g.receptions - ref->receptions) / ref->receptions : 0.0;
      os << g.group << ',' << g.receptions << ',' << fmt(pct) << '\n';
    }
    write_text_file((fs::path(out_dir) / "pilot_reception_comparison.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,daa_override,pilot,blended\n";
    for (const auto& g : groups) {
      os << g.group << ',' << g.exec_override << ',' << g.exec_pilot << ',' << g.exec_blended << '\n';
    }
    write_text_file((fs::path(out_dir) / "command_execution_comparison.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,rate_per_hr,likelihood,p_lowc_ratio_vs_" << ref->group << '\n';
    for (const auto& g : groups) {
      const double ratio = ref->p_lowc > 0.0 ? g.p_lowc / ref->p_lowc : (g.p_lowc > 0.0 ? -1.0 : 1.0);
      os << g.group << ',' << fmt(g.rate_per_hr) << ',' << g.likelihood << ',' << fmt(ratio) << '\n';
    }
    write_text_file((fs::path(out_dir) / "risk_comparison.csv").string(), os.str());
  }
  {
    std::ostringstream os;
    os << "group,horizontal_deviation_m,vertical_deviation_m\n";
    for (const auto& g : groups) {
      os << g.group << ',' << fmt(g.mean_dev_h) << ',' << fmt(g.mean_dev_v) << '\n';
    }
    write_text_file((fs::path(out_dir) / "trajectory_deviation_comparison.csv").string(), os.str());
  }
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["base_seed"] = m.base_seed;
  j["threads"] = m.threads;
  j["groups"] = m.groups;
  j["encounters"] = {{"path", m.encounters_path}, {"hash", m.encounters_hash}};
  j["map"] = {{"path", m.map_path}, {"hash", m.map_hash}};
  j["dump_traces"] = m.dump_traces;
  j["params"] = json::parse(sim_params_to_json(m.params));
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.threads = j.at("threads").get<int>();
    j.at("groups").get_to(m.groups);
    m.encounters_path = j.at("encounters").at("path").get<std::string>();
    m.encounters_hash = j.at("encounters").at("hash").get<std::string>();
    m.map_path = j.at("map").at("path").get<std::string>();
    m.map_hash = j.at("map").at("hash").get<std::string>();
    m.dump_traces = j.at("dump_traces").get<bool>();
    m.params = params_from(j.at("params"));
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad manifest: ") + e.what());
  }
}

void write_trace_csv(const EncounterLog& log, const std::string& path) {
  std::ostringstream os;
  os << "t,own_x,own_y,own_h,own_v,own_heading,own_vz,intr_x,intr_y,intr_h,intr_v,intr_heading,intr_vz,"
        "dx,dy,dh,vi,vh,theta_i,mode,source,wait_lookup_s,hmd_m,tau_s,r_m,h_m,lowc,nmac\n";
  for (const auto& r : log.steps) {
    os << fmt(r.t) << ',' << fmt(r.own.x) << ',' << fmt(r.own.y) << ',' << fmt(r.own.h) << ','
       << fmt(r.own.v) << ',' << fmt(r.own.heading) << ',' << fmt(r.own.vz) << ',' << fmt(r.intr.x) << ','
       << fmt(r.intr.y) << ',' << fmt(r.intr.h) << ',' << fmt(r.intr.v) << ',' << fmt(r.intr.heading) << ','
       << fmt(r.intr.vz) << ',' << fmt(r.rel.dx) << ',' << fmt(r.rel.dy) << ',' << fmt(r.rel.dh) << ','
       << fmt(r.rel.vi) << ',' << fmt(r.rel.vh) << ',' << fmt(r.rel.theta_i) << ','
       << static_cast<int>(r.mode) << ',' << static_cast<int>(r.exec_source) << ','
       << fmt(r.wait_lookup_s) << ',' << fmt(r.hmd_m) << ',' << fmt(r.tau_s) << ',' << fmt(r.r_m) << ','
       << fmt(r.h_m) << ',' << (r.lowc ? 1 : 0) << ',' << (r.nmac ? 1 : 0) << '\n';
  }
  write_text_file(path, os.str());
}

}  // namespace daa
