#include "daa/actors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace daa {

std::vector<ManeuverCommand> daa_menu(const DaaModel& model, const AircraftState& own) {
  if (model.heading_offsets_deg.empty() && model.vz_options_mps.empty())
    throw ValidationError("daa model: candidate menu is empty");
  std::vector<ManeuverCommand> menu;
  menu.reserve(model.heading_offsets_deg.size() + model.vz_options_mps.size());
  for (double off : model.heading_offsets_deg) {
    ManeuverCommand c;
    c.axis = Axis::Horizontal;
    c.direction = off >= 0.0 ? Direction::Left : Direction::Right;
    c.target_heading = wrap_angle(own.heading + deg2rad(off));
    c.target_speed = own.v;
    c.source = CommandSource::Daa;
    menu.push_back(c);
  }
  for (double vz : model.vz_options_mps) {
    ManeuverCommand c;
    c.axis = Axis::Vertical;
    c.direction = vz >= 0.0 ? Direction::Up : Direction::Down;
    c.target_vz = vz;
    c.target_speed = own.v;
    c.source = CommandSource::Daa;
    menu.push_back(c);
  }
  return menu;
}

namespace {

struct MenuScore {
  double sm;
  double deviation;
  double heading_change;
  double vz_change;
};

MenuScore score(const ManeuverCommand& c, const AircraftState& own, const AircraftState& intr,
                const AgentConfig& cfg, const OwnshipDynamics& dyn, const SeparationThresholds& th) {
  MenuScore s;
  s.sm = safety_metric(c, own, intr, cfg, dyn, th);
  s.deviation = command_deviation(c, own);
  s.heading_change = c.target_heading ? std::abs(angle_diff(*c.target_heading, own.heading)) : 0.0;
  s.vz_change = c.target_vz ? std::abs(*c.target_vz - own.vz) : 0.0;
  return s;
}

bool deviates_less(const MenuScore& a, const MenuScore& b) {
  if (a.deviation != b.deviation) return a.deviation < b.deviation;
  if (a.heading_change != b.heading_change) return a.heading_change < b.heading_change;
  return a.vz_change < b.vz_change;
}

}  // namespace

ManeuverCommand daa_resolve(const AircraftState& own, const AircraftState& intr, const DaaModel& model,
                            const AgentConfig& cfg, const OwnshipDynamics& dyn,
                            const SeparationThresholds& th) {
  const auto menu = daa_menu(model, own);
  int best_safe = -1, best_any = -1;
  MenuScore best_safe_score{}, best_any_score{};
  for (std::size_t i = 0; i < menu.size(); ++i) {
    const MenuScore s = score(menu[i], own, intr, cfg, dyn, th);
    if (s.sm > 0.0 && (best_safe < 0 || deviates_less(s, best_safe_score))) {
      best_safe = static_cast<int>(i);
      best_safe_score = s;
    }
    if (best_any < 0 || s.sm > best_any_score.sm) {
      best_any = static_cast<int>(i);
      best_any_score = s;
    }
  }
  ManeuverCommand out = best_safe >= 0 ? menu[best_safe] : menu[best_any];
  out.source = CommandSource::Daa;
  return out;
}

namespace {

int rank_of(Axis ax, const std::vector<Axis>& order) {
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == ax) return static_cast<int>(i);
  return static_cast<int>(order.size());
}

int rank_of(Direction d, const std::vector<Direction>& order) {
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == d) return static_cast<int>(i);
  return static_cast<int>(order.size());
}

}  // namespace

PilotResponse pilot_respond(const AircraftState& own_view, const AircraftState& intr_view, double t_now,
                            const PilotModel& model, const DaaModel& daa, const AgentConfig& cfg,
                            const OwnshipDynamics& dyn, const SeparationThresholds& th, Rng& rng) {
  const auto menu = daa_menu(daa, own_view);
  int best = -1;
  bool best_safe = false;
  int best_axis = 0, best_dir = 0;
  MenuScore best_score{};
  for (std::size_t i = 0; i < menu.size(); ++i) {
    const MenuScore s = score(menu[i], own_view, intr_view, cfg, dyn, th);
    const bool safe = s.sm > 0.0;
    const int ar = rank_of(menu[i].axis, model.axis_order);
    const int dr = rank_of(menu[i].direction, model.direction_order);
    bool better = false;
    if (best < 0) {
      better = true;
    } else if (safe != best_safe) {
      better = safe;
    } else if (!safe) {
      better = s.sm > best_score.sm;
    } else if (ar != best_axis) {
      better = ar < best_axis;
    } else if (dr != best_dir) {
      better = dr < best_dir;
    } else {
      better = deviates_less(s, best_score);
    }
    if (better) {
      best = static_cast<int>(i);
      best_safe = safe;
      best_axis = ar;
      best_dir = dr;
      best_score = s;
    }
  }
  PilotResponse resp;
  resp.command = menu[best];
  resp.command.source = CommandSource::Pilot;
  resp.issue_time_s =
      t_now + rng.gaussian_truncated(model.reaction_mean_s, model.reaction_sd_s, model.reaction_min_s,
                                     model.reaction_mean_s + 6.0 * model.reaction_sd_s);
  return resp;
}

double sample_latency(const LatencyConfig& cfg, Rng& rng) {
  if (cfg.mode == LatencyMode::Constant) return cfg.constant_s;
  return rng.gaussian_truncated(cfg.mean_s, cfg.sd_s, cfg.min_s, cfg.max_s);
}

}  // namespace daa
