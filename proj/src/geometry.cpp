#include "daa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace daa {

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double angle_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

RelativeState relative_state(const AircraftState& own, const AircraftState& intr) {
  RelativeState s;
  s.dx = intr.x - own.x;
  s.dy = intr.y - own.y;
  s.dh = intr.h - own.h;
  s.vi = intr.v;
  s.vh = intr.vz - own.vz;
  s.theta_i = wrap_angle(intr.heading);
  s.tag = StateTag::Normal;
  return s;
}

void relative_velocity(const RelativeState& s, const OwnshipCommand& own, double& vrx, double& vry) {
  vrx = s.vi * std::cos(s.theta_i) - own.v * std::cos(own.heading);
  vry = s.vi * std::sin(s.theta_i) - own.v * std::sin(own.heading);
}

RelativeState step_relative(const RelativeState& s, const OwnshipCommand& own, const IntruderDelta& d,
                            double dt, const SpeedLimits& lim) {
  if (s.tag != StateTag::Normal) throw std::invalid_argument("step_relative: Out/LoWC states do not step");
  if (!(dt > 0.0)) throw std::invalid_argument("step_relative: dt must be positive");

  double vrx = 0.0, vry = 0.0;
  relative_velocity(s, own, vrx, vry);

  RelativeState n;
  n.dx = s.dx + vrx * dt;
  n.dy = s.dy + vry * dt;
  n.dh = s.dh + s.vh * dt;
  n.vi = std::clamp(s.vi + d.dvi * dt, lim.vi_min, lim.vi_max);
  n.theta_i = wrap_angle(s.theta_i + d.dtheta * dt);
  n.vh = std::clamp(s.vh + d.dvh * dt, lim.vh_min, lim.vh_max);
  n.tag = StateTag::Normal;
  return n;
}

double horizontal_range(const RelativeState& s) { return std::hypot(s.dx, s.dy); }

double range_rate(const RelativeState& s, const OwnshipCommand& own) {
  const double r = horizontal_range(s);
  if (r <= 0.0) return 0.0;
  double vrx = 0.0, vry = 0.0;
  relative_velocity(s, own, vrx, vry);
  return (s.dx * vrx + s.dy * vry) / r;
}

double hmd(const RelativeState& s, const OwnshipCommand& own) {
  double vrx = 0.0, vry = 0.0;
  relative_velocity(s, own, vrx, vry);
  const double ww = vrx * vrx + vry * vry;
  double tcpa = 0.0;
  if (ww > 0.0) tcpa = std::max(0.0, -(s.dx * vrx + s.dy * vry) / ww);
  return std::hypot(s.dx + vrx * tcpa, s.dy + vry * tcpa);
}

double tau_mod(double range_m, double range_rate_mps, double dmod_m) {
  if (range_m <= dmod_m) return 0.0;
  if (range_rate_mps < 0.0) return (dmod_m * dmod_m - range_m * range_m) / (range_m * range_rate_mps);
  return std::numeric_limits<double>::infinity();
}

bool is_lowc(const RelativeState& s, const OwnshipCommand& own, const SeparationThresholds& th) {
  if (std::abs(s.dh) > th.dh_star_m) return false;
  if (hmd(s, own) > th.hmd_star_m) return false;
  const double tau = tau_mod(horizontal_range(s), range_rate(s, own), th.dmod_m);
  return tau >= 0.0 && tau <= th.tau_mod_star_s;
}

bool is_nmac(double r_ft, double h_ft, const SeparationThresholds& th) {
  return r_ft <= th.nmac_r_ft && h_ft <= th.nmac_h_ft;
}

AircraftState advance_ballistic(const AircraftState& s, double dt) {
  AircraftState n = s;
  n.x = s.x + s.v * std::cos(s.heading) * dt;
  n.y = s.y + s.v * std::sin(s.heading) * dt;
  n.h = s.h + s.vz * dt;
  n.heading = wrap_angle(s.heading + s.turn_rate * dt);
  return n;
}

AircraftState advance_toward(const AircraftState& s, const GuidanceTarget& g, const OwnshipDynamics& dyn,
                             double dt) {
  AircraftState n = s;
  n.x = s.x + s.v * std::cos(s.heading) * dt;
  n.y = s.y + s.v * std::sin(s.heading) * dt;
  n.h = s.h + s.vz * dt;

  const double want = angle_diff(g.heading, s.heading);
  const double turn = std::clamp(want, -dyn.max_turn_rate * dt, dyn.max_turn_rate * dt);
  n.heading = wrap_angle(s.heading + turn);
  n.turn_rate = turn / dt;

  const double dvz = std::clamp(g.vz - s.vz, -dyn.vz_slew * dt, dyn.vz_slew * dt);
  n.vz = s.vz + dvz;

  const double dv = std::clamp(g.speed - s.v, -dyn.accel * dt, dyn.accel * dt);
  n.v = std::max(0.0, s.v + dv);
  return n;
}

GuidanceTarget maintain_course(const AircraftState& own) {
  return GuidanceTarget{own.heading, own.vz, own.v};
}

std::optional<int> proj_lowc(const AircraftState& own, const AircraftState& intr,
                             const GuidanceTarget& own_target, int horizon_n, const SeparationThresholds& th,
                             const OwnshipDynamics& dyn, double dt) {
  if (horizon_n < 1) throw std::invalid_argument("proj_lowc: horizon must be >= 1");
  AircraftState o = own;
  AircraftState i = intr;
  for (int step = 1; step <= horizon_n; ++step) {
    o = advance_toward(o, own_target, dyn, dt);
    i = advance_ballistic(i, dt);
    const RelativeState rel = relative_state(o, i);
    const OwnshipCommand cmd{o.v, o.heading, o.vz};
    if (is_lowc(rel, cmd, th)) return step;
  }
  return std::nullopt;
}

}  // namespace daa
