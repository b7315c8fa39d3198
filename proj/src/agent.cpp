#include "daa/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "daa/errors.hpp"

namespace daa {

namespace {

constexpr double kHeadingScale = kPi / 2.0;  // full-scale horizontal maneuver
constexpr double kVzScale = 5.0;             // full-scale vertical maneuver, m/s

}  // namespace

bool command_well_formed(const ManeuverCommand& cmd) {
  switch (cmd.axis) {
    case Axis::Horizontal:
      return (cmd.direction == Direction::Left || cmd.direction == Direction::Right) &&
             cmd.target_heading.has_value();
    case Axis::Vertical:
      return (cmd.direction == Direction::Up || cmd.direction == Direction::Down) &&
             cmd.target_vz.has_value();
    case Axis::None:
      return cmd.direction == Direction::None;
  }
  return false;
}

GuidanceTarget guidance_for(const ManeuverCommand& cmd, const AircraftState& own) {
  GuidanceTarget g;
  g.heading = cmd.target_heading.value_or(own.heading);
  g.vz = cmd.target_vz.value_or(own.vz);
  g.speed = cmd.target_speed.value_or(own.v);
  return g;
}

WaitChoice wait_decision(const WaitMap& map, const RelativeState& s, const AircraftState& own,
                         const AircraftState& intr, const GuidanceTarget& course, const AgentConfig& cfg,
                         const OwnshipDynamics& dyn, const SeparationThresholds& th) {
  const MapLookup entry = lookup(map, s);
  if (entry.wait_seconds < cfg.wait_threshold_s) return WaitChoice::NoWait;
  if (proj_lowc(own, intr, course, cfg.projection_horizon_s, th, dyn).has_value()) return WaitChoice::NoWait;
  return WaitChoice::Wait;
}

double safety_metric(const ManeuverCommand& u, const AircraftState& own, const AircraftState& intr,
                     const AgentConfig& cfg, const OwnshipDynamics& dyn, const SeparationThresholds& th) {
  const GuidanceTarget target = guidance_for(u, own);
  AircraftState o = own;
  AircraftState i = intr;
  double sm = std::numeric_limits<double>::infinity();
  for (int step = 1; step <= cfg.sm_horizon_s; ++step) {
    o = advance_toward(o, target, dyn, 1.0);
    i = advance_ballistic(i, 1.0);
    const RelativeState rel = relative_state(o, i);
    const OwnshipCommand cmd{o.v, o.heading, o.vz};

    const double hmd_slack = hmd(rel, cmd) / th.hmd_star_m - 1.0;
    const double dh_slack = std::abs(rel.dh) / th.dh_star_m - 1.0;
    const double tau = tau_mod(horizontal_range(rel), range_rate(rel, cmd), th.dmod_m);
    const double tau_slack =
        std::isinf(tau) ? 1.0 : (tau - th.tau_mod_star_s) / th.tau_mod_star_s;

    // The step is acceptable as long as at least one condition keeps slack.
    const double margin = std::max({hmd_slack, dh_slack, tau_slack});
    sm = std::min(sm, margin);
  }
  return sm;
}

PilotIntent extract_intent(const ManeuverCommand& u_p) {
  if (u_p.axis == Axis::None) throw NoIntentError("cannot extract intent from a command without an axis");
  return PilotIntent{u_p.axis, u_p.direction};
}

double command_deviation(const ManeuverCommand& cmd, const AircraftState& own) {
  double dev = 0.0;
  if (cmd.target_heading) dev += std::abs(angle_diff(*cmd.target_heading, own.heading)) / kHeadingScale;
  if (cmd.target_vz) dev += std::abs(*cmd.target_vz - own.vz) / kVzScale;
  return dev;
}

namespace {

struct Scored {
  const ManeuverCommand* cmd;
  double sm;
  double heading_change;
  double vz_change;
  double deviation;
  std::size_t index;
};

bool less_deviating(const Scored& a, const Scored& b) {
  if (a.deviation != b.deviation) return a.deviation < b.deviation;
  if (a.heading_change != b.heading_change) return a.heading_change < b.heading_change;
  if (a.vz_change != b.vz_change) return a.vz_change < b.vz_change;
  return a.index < b.index;
}

std::vector<Scored> score_all(std::span<const ManeuverCommand> candidates, const AircraftState& own,
                              const AircraftState& intr, const AgentConfig& cfg, const OwnshipDynamics& dyn,
                              const SeparationThresholds& th) {
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const ManeuverCommand& c = candidates[i];
    Scored s;
    s.cmd = &c;
    s.sm = safety_metric(c, own, intr, cfg, dyn, th);
    s.heading_change = c.target_heading ? std::abs(angle_diff(*c.target_heading, own.heading)) : 0.0;
    s.vz_change = c.target_vz ? std::abs(*c.target_vz - own.vz) : 0.0;
    s.deviation = command_deviation(c, own);
    s.index = i;
    scored.push_back(s);
  }
  return scored;
}

const Scored* best_safe(const std::vector<Scored>& scored, Axis ax, Direction d) {
  const Scored* best = nullptr;
  for (const auto& s : scored) {
    if (s.sm <= 0.0) continue;
    if (ax != Axis::None && s.cmd->axis != ax) continue;
    if (d != Direction::None && s.cmd->direction != d) continue;
    if (!best || less_deviating(s, *best)) best = &s;
  }
  return best;
}

const Scored* max_sm(const std::vector<Scored>& scored) {
  const Scored* best = nullptr;
  for (const auto& s : scored) {
    if (!best || s.sm > best->sm || (s.sm == best->sm && less_deviating(s, *best))) best = &s;
  }
  return best;
}

}  // namespace

BlendOutcome blend(const PilotIntent& intent, const AircraftState& own, const AircraftState& intr,
                   std::span<const ManeuverCommand> daa_candidates, const AgentConfig& cfg,
                   const OwnshipDynamics& dyn, const SeparationThresholds& th) {
  if (daa_candidates.empty()) throw ValidationError("blend: candidate menu is empty");
  const auto scored = score_all(daa_candidates, own, intr, cfg, dyn, th);

  BlendOutcome out;
  if (const Scored* s = best_safe(scored, intent.ax, intent.d)) {
    out.command = *s->cmd;
    out.match = BlendMatch::Exact;
  } else if (const Scored* a = best_safe(scored, intent.ax, Direction::None)) {
    out.command = *a->cmd;
    out.match = BlendMatch::AxisOnly;
  } else if (const Scored* any = best_safe(scored, Axis::None, Direction::None)) {
    out.command = *any->cmd;
    out.match = BlendMatch::SafeFallback;
  } else {
    out.command = *max_sm(scored)->cmd;
    out.match = BlendMatch::MaxSmFallback;
  }
  out.command.source = CommandSource::Blended;
  return out;
}

AllocationOutcome allocate(bool pilot_cmd_received, const ManeuverCommand& u_p, const ManeuverCommand& u_daa,
                           std::span<const ManeuverCommand> daa_candidates, const WaitMap& map,
                           const RelativeState& s, const AircraftState& own, const AircraftState& intr,
                           const GuidanceTarget& course, const AgentConfig& cfg, const OwnshipDynamics& dyn,
                           const SeparationThresholds& th) {
  AllocationOutcome out;
  if (!pilot_cmd_received) {
    if (wait_decision(map, s, own, intr, course, cfg, dyn, th) == WaitChoice::Wait) {
      out.decision.mode = AgentMode::Wait;
      out.decision.command = ManeuverCommand{};  // maintain course
      out.decision.wait_remaining_s = lookup(map, s).wait_seconds;
    } else {
      out.decision.mode = AgentMode::AllocateDaa;
      out.decision.command = u_daa;
    }
    return out;
  }

  if (safety_metric(u_p, own, intr, cfg, dyn, th) > 0.0) {
    out.decision.mode = AgentMode::ExecutePilot;
    out.decision.command = u_p;
    return out;
  }
  const BlendOutcome blended = blend(extract_intent(u_p), own, intr, daa_candidates, cfg, dyn, th);
  out.decision.mode = AgentMode::ExecuteBlended;
  out.decision.command = blended.command;
  out.blend_match = blended.match;
  return out;
}

}  // namespace daa
