#include "daa/sim.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "daa/errors.hpp"

namespace daa {

std::string group_name(Group g) {
  switch (g) {
    case Group::B1: return "B-1";
    case Group::B2: return "B-2";
    case Group::IC1: return "IC-1";
    case Group::ID1: return "ID-1";
    case Group::ID2: return "ID-2";
  }
  return "?";
}

Group group_from_name(const std::string& name) {
  for (Group g : all_groups()) {
    if (group_name(g) == name) return g;
  }
  throw ConfigError("unknown experiment group '" + name + "'");
}

std::vector<Group> all_groups() { return {Group::B1, Group::B2, Group::IC1, Group::ID1, Group::ID2}; }

GroupConfig group_preset(Group g) {
  GroupConfig c;
  c.group = g;
  switch (g) {
    case Group::B1:
      c.integrated = false;
      c.wait_source = WaitSourceKind::None;
      c.latency.mode = LatencyMode::Constant;
      c.latency.constant_s = 4.0;
      break;
    case Group::B2:
      c.integrated = false;
      c.wait_source = WaitSourceKind::None;
      c.latency.mode = LatencyMode::Gaussian;
      break;
    case Group::IC1:
      c.integrated = true;
      c.wait_source = WaitSourceKind::ConstantBudget;
      c.constant_wait_s = 5.0;
      c.latency.mode = LatencyMode::Constant;
      c.latency.constant_s = 5.0;
      break;
    case Group::ID1:
      c.integrated = true;
      c.wait_source = WaitSourceKind::Map;
      c.latency.mode = LatencyMode::Constant;
      c.latency.constant_s = 4.0;
      break;
    case Group::ID2:
      c.integrated = true;
      c.wait_source = WaitSourceKind::Map;
      c.latency.mode = LatencyMode::Gaussian;
      break;
  }
  return c;
}

namespace {

struct Snapshot {
  AircraftState own;
  AircraftState intr;
};

GuidanceTarget recovery_target(const AircraftState& own, double t, const SimParams& P) {
  const double aim_x = P.own_cruise_speed * (t + P.recovery_lookahead_s);
  GuidanceTarget g;
  g.heading = wrap_angle(std::atan2(0.0 - own.y, aim_x - own.x));
  g.vz = std::clamp((P.own_cruise_alt - own.h) / 10.0, -2.5, 2.5);
  g.speed = P.own_cruise_speed;
  return g;
}

bool perceives_conflict(const Snapshot& view, const SimParams& P) {
  const RelativeState rel = relative_state(view.own, view.intr);
  const OwnshipCommand cmd{view.own.v, view.own.heading, view.own.vz};
  if (is_lowc(rel, cmd, P.thresholds)) return true;
  return proj_lowc(view.own, view.intr, maintain_course(view.own), P.agent.alert_horizon_s, P.thresholds,
                   P.dynamics)
      .has_value();
}

}  // namespace

EncounterLog run_encounter(const EncounterSpec& spec, const GroupConfig& gc, const SimParams& P,
                           const WaitMap* map) {
  if (gc.wait_source == WaitSourceKind::Map && map == nullptr) {
    throw ConfigError("group " + group_name(gc.group) + " needs a wait map");
  }
  const TrajectoryPlan plan = build_trajectories(spec, P.total_time_s, P.own_cruise_alt);

  AircraftState own = plan.own0;
  own.v = P.own_cruise_speed;
  AircraftState intr = plan.intr0;

  LatencyChannel<Snapshot> uplink(gc.latency, Rng(splitmix64(spec.seed ^ 0x75706c696e6bULL)));
  LatencyChannel<ManeuverCommand> downlink(gc.latency, Rng(splitmix64(spec.seed ^ 0x646f776e6cULL)));
  Rng pilot_rng(splitmix64(spec.seed ^ 0x70696c6f74ULL));

  std::vector<PilotResponse> pilot_pending;
  std::size_t pending_head = 0;
  bool have_view = false;
  Snapshot gcs_view{};

  ManeuverCommand active;  // maintain course until something executes
  bool has_resolution = false;
  bool pilot_in_loop = false;  // a pilot command has governed this episode
  double episode_waited = 0.0;

  EncounterLog log;
  log.spec = spec;
  const int n_steps = static_cast<int>(std::llround(P.total_time_s / P.dt));
  log.steps.reserve(n_steps + 1);
  EncounterSummary& sum = log.summary;

  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * P.dt;

    // Surveillance uplink and the pilot's delayed picture.
    uplink.send(Snapshot{own, intr}, t);
    for (auto& v : uplink.poll(t)) {
      gcs_view = v;
      have_view = true;
    }
    // Scheduled pilot commands enter the downlink at their issue step.
    while (pending_head < pilot_pending.size() && pilot_pending[pending_head].issue_time_s <= t) {
      downlink.send(pilot_pending[pending_head].command, t);
      ++pending_head;
    }
    if (have_view && perceives_conflict(gcs_view, P)) {
      pilot_pending.push_back(
          pilot_respond(gcs_view.own, gcs_view.intr, t, P.pilot, P.daa, P.agent, P.dynamics, P.thresholds,
                        pilot_rng));
    }

    // Onboard picture.
    const RelativeState rel = relative_state(own, intr);
    const OwnshipCommand own_cmd{own.v, own.heading, own.vz};
    const bool lowc_now = is_lowc(rel, own_cmd, P.thresholds);

    // Alerting projects the unmitigated trajectory (ballistic maintain
    // course): the alert opens the decision window, the shorter projection
    // is the Eq-17 safeguard that forbids waiting.
    const std::optional<int> alert =
        proj_lowc(own, intr, maintain_course(own), P.agent.alert_horizon_s, P.thresholds, P.dynamics);
    const bool proj_fires = alert.has_value() && *alert <= P.agent.projection_horizon_s;
    const bool in_conflict = alert.has_value() || lowc_now;
    if (!in_conflict) {
      episode_waited = 0.0;
      pilot_in_loop = false;
    }

    StepMode mode = StepMode::Nominal;
    double wait_lookup = 0.0;

    const std::vector<ManeuverCommand> arrivals = downlink.poll(t);
    if (!arrivals.empty()) {
      for (const ManeuverCommand& u_p : arrivals) {
        ++sum.receptions;
        if (safety_metric(u_p, own, intr, P.agent, P.dynamics, P.thresholds) > 0.0) {
          active = u_p;
          mode = StepMode::ExecutePilot;
          ++sum.exec_pilot;
        } else if (gc.integrated) {
          const auto menu = daa_menu(P.daa, own);
          const BlendOutcome b =
              blend(extract_intent(u_p), own, intr, menu, P.agent, P.dynamics, P.thresholds);
          active = b.command;
          mode = StepMode::ExecuteBlended;
          ++sum.exec_blended;
          switch (b.match) {
            case BlendMatch::Exact: ++sum.blend_exact; break;
            case BlendMatch::AxisOnly: ++sum.blend_axis; break;
            default: ++sum.blend_fallback; break;
          }
        } else {
          // Baseline mode: the onboard system overrides an unsafe pilot command.
          active = daa_resolve(own, intr, P.daa, P.agent, P.dynamics, P.thresholds);
          mode = StepMode::DaaOverride;
          ++sum.exec_override;
        }
      }
      has_resolution = true;
      pilot_in_loop = true;
    } else if (in_conflict && !pilot_in_loop) {
      // Wait / no-wait decisions happen while the pilot has not yet entered
      // the loop for this conflict.
      bool wait_ok = false;
      if (gc.integrated) {
        switch (gc.wait_source) {
          case WaitSourceKind::Map: {
            const MapLookup entry = lookup(*map, rel);
            wait_lookup = entry.wait_seconds;
            wait_ok = entry.wait_seconds >= P.agent.wait_threshold_s && !proj_fires;
            break;
          }
          case WaitSourceKind::ConstantBudget:
            wait_lookup = std::max(0.0, gc.constant_wait_s - episode_waited);
            wait_ok = episode_waited < gc.constant_wait_s && !proj_fires;
            break;
          case WaitSourceKind::None:
            wait_ok = false;
            break;
        }
      }
      if (wait_ok) {
        mode = StepMode::Wait;
        ++sum.wait_count;
        episode_waited += P.dt;
      } else {
        active = daa_resolve(own, intr, P.daa, P.agent, P.dynamics, P.thresholds);
        has_resolution = true;
        mode = StepMode::AllocateDaa;
        ++sum.nowait_count;
      }
    } else if (in_conflict && pilot_in_loop && has_resolution &&
               safety_metric(active, own, intr, P.agent, P.dynamics, P.thresholds) <= 0.0 && proj_fires) {
      // Backstop between pilot updates: the governing command has gone
      // stale-unsafe with a violation imminent, so control reverts to the
      // onboard system until the next command arrives.
      active = daa_resolve(own, intr, P.daa, P.agent, P.dynamics, P.thresholds);
      has_resolution = true;
      mode = StepMode::AllocateDaa;
      ++sum.nowait_count;
    } else if (!in_conflict && has_resolution) {
      // The conflict is over; drop the maneuver once returning to the
      // nominal track is also alert-clean.
      const GuidanceTarget rec = recovery_target(own, t, P);
      if (!proj_lowc(own, intr, rec, P.agent.alert_horizon_s, P.thresholds, P.dynamics).has_value()) {
        has_resolution = false;
        active = ManeuverCommand{};
      }
    }

    const GuidanceTarget course = has_resolution ? guidance_for(active, own) : recovery_target(own, t, P);

    StepRecord rec;
    rec.t = t;
    rec.own = own;
    rec.intr = intr;
    rec.rel = rel;
    rec.mode = mode;
    rec.exec_source = active.source;
    rec.wait_lookup_s = wait_lookup;
    rec.hmd_m = hmd(rel, own_cmd);
    rec.tau_s = tau_mod(horizontal_range(rel), range_rate(rel, own_cmd), P.thresholds.dmod_m);
    rec.r_m = horizontal_range(rel);
    rec.h_m = std::abs(rel.dh);
    rec.lowc = lowc_now;
    rec.nmac = is_nmac(meters_to_feet(rec.r_m), meters_to_feet(rec.h_m), P.thresholds);
    log.steps.push_back(rec);

    ++sum.k_samples;
    if (rec.lowc) {
      ++sum.lowc_steps;
      sum.lowc_any = true;
    }
    if (rec.nmac) ++sum.nmac_steps;

    const double nominal_x = P.own_cruise_speed * t;
    sum.max_dev_h = std::max(sum.max_dev_h, std::hypot(own.x - nominal_x, own.y));
    sum.max_dev_v = std::max(sum.max_dev_v, std::abs(own.h - P.own_cruise_alt));

    if (k < n_steps) {
      own = advance_toward(own, course, P.dynamics, P.dt);
      intr = intruder_step(intr, plan, t, P.dt);
    }
  }

  sum.pi = penetration_integral(log, P.thresholds, P.dt);
  return log;
}

double p_lowc(std::span<const EncounterLog> logs) {
  long hits = 0, k = 0;
  for (const auto& log : logs) {
    hits += log.summary.lowc_steps;
    k += log.summary.k_samples;
  }
  return k > 0 ? static_cast<double>(hits) / static_cast<double>(k) : 0.0;
}

double p_nmac(std::span<const EncounterLog> logs) {
  long hits = 0, k = 0;
  for (const auto& log : logs) {
    hits += log.summary.nmac_steps;
    k += log.summary.k_samples;
  }
  return k > 0 ? static_cast<double>(hits) / static_cast<double>(k) : 0.0;
}

RateCategory lowc_rate_per_hour(double p_lowc_value, double total_sim_hours) {
  if (!(total_sim_hours > 0.0)) throw ConfigError("rate: total simulation hours must be positive");
  RateCategory rc;
  rc.rate_per_hr = p_lowc_value / total_sim_hours;
  if (rc.rate_per_hr >= 1e-3) {
    rc.category = "Frequent";
  } else if (rc.rate_per_hr >= 1e-5) {
    rc.category = "Probable";
  } else if (rc.rate_per_hr >= 1e-7) {
    rc.category = "Remote";
  } else if (rc.rate_per_hr >= 1e-9) {
    rc.category = "Extremely Remote";
  } else {
    rc.category = "Extremely Improbable";
  }
  return rc;
}

double penetration_integral(const EncounterLog& log, const SeparationThresholds& th, double dt) {
  double pi = 0.0;
  for (const StepRecord& r : log.steps) {
    if (!r.lowc) continue;
    const double hmd_ft = meters_to_feet(r.hmd_m);
    const double vmd_ft = meters_to_feet(r.h_m);
    const double sep = std::min((4000.0 - hmd_ft) / 4000.0, (450.0 - vmd_ft) / 450.0);
    const double tau = (th.tau_mod_star_s - r.tau_s) / th.tau_mod_star_s;
    pi += std::clamp(sep, 0.0, 1.0) * std::clamp(tau, 0.0, 1.0) * dt;
  }
  return pi;
}

Deviation trajectory_deviation(const EncounterLog& log, const SimParams& params) {
  Deviation d;
  for (const StepRecord& r : log.steps) {
    const double nominal_x = params.own_cruise_speed * r.t;
    d.horizontal_m = std::max(d.horizontal_m, std::hypot(r.own.x - nominal_x, r.own.y));
    d.vertical_m = std::max(d.vertical_m, std::abs(r.own.h - params.own_cruise_alt));
  }
  return d;
}

GroupRun run_group(std::span<const EncounterSpec> specs, const GroupConfig& gc, const SimParams& params,
                   const WaitMap* map, int threads, bool keep_logs) {
  if (gc.wait_source == WaitSourceKind::Map && map == nullptr) {
    throw ConfigError("group " + group_name(gc.group) + " needs a wait map");
  }
  const long n = static_cast<long>(specs.size());
  std::vector<EncounterSummary> summaries(n);
  GroupRun out;
  if (keep_logs) out.logs.resize(n);

#pragma omp parallel for num_threads(threads > 0 ? threads : omp_get_max_threads()) schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    EncounterLog log = run_encounter(specs[i], gc, params, map);
    summaries[i] = log.summary;
    if (keep_logs) out.logs[i] = std::move(log);
  }

  GroupReport& r = out.report;
  r.group = group_name(gc.group);
  r.encounters = n;
  double pi_sum = 0.0, dev_h_sum = 0.0, dev_v_sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const EncounterSummary& s = summaries[i];
    r.k_samples += s.k_samples;
    r.wait_count += s.wait_count;
    r.nowait_count += s.nowait_count;
    r.receptions += s.receptions;
    r.exec_pilot += s.exec_pilot;
    r.exec_blended += s.exec_blended;
    r.exec_override += s.exec_override;
    r.blend_exact += s.blend_exact;
    r.blend_axis += s.blend_axis;
    r.blend_fallback += s.blend_fallback;
    r.lowc_steps += s.lowc_steps;
    r.nmac_steps += s.nmac_steps;
    if (s.lowc_any) {
      ++r.lowc_encounters;
      pi_sum += s.pi;
    }
    r.max_pi = std::max(r.max_pi, s.pi);
    dev_h_sum += s.max_dev_h;
    dev_v_sum += s.max_dev_v;
  }
  r.p_lowc = r.k_samples > 0 ? static_cast<double>(r.lowc_steps) / r.k_samples : 0.0;
  r.p_nmac = r.k_samples > 0 ? static_cast<double>(r.nmac_steps) / r.k_samples : 0.0;
  r.total_hours = static_cast<double>(n) * params.total_time_s / 3600.0;
  if (r.total_hours > 0.0) {
    const RateCategory rc = lowc_rate_per_hour(r.p_lowc, r.total_hours);
    r.rate_per_hr = rc.rate_per_hr;
    r.likelihood = rc.category;
  }
  r.mean_pi = r.lowc_encounters > 0 ? pi_sum / r.lowc_encounters : 0.0;
  r.mean_dev_h = n > 0 ? dev_h_sum / n : 0.0;
  r.mean_dev_v = n > 0 ? dev_v_sum / n : 0.0;
  return out;
}

BatchReport run_batch(std::span<const EncounterSpec> specs, std::span<const GroupConfig> groups,
                      const SimParams& params, const WaitMap* map, std::uint64_t base_seed, int threads) {
  BatchReport report;
  report.base_seed = base_seed;
  report.rate_note =
      "rate_per_hr divides a per-step probability by total simulation hours; "
      "likelihood bands follow the standard per-flight-hour table";
  for (const GroupConfig& gc : groups) {
    report.groups.push_back(run_group(specs, gc, params, map, threads, false).report);
  }
  return report;
}

}  // namespace daa
