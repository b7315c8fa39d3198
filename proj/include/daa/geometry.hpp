#pragma once

#include <cstdint>
#include <optional>

namespace daa {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kMetersPerFoot = 0.3048;

constexpr double deg2rad(double d) { return d * (kPi / 180.0); }
constexpr double rad2deg(double r) { return r * (180.0 / kPi); }
constexpr double meters_to_feet(double m) { return m / kMetersPerFoot; }
constexpr double feet_to_meters(double ft) { return ft * kMetersPerFoot; }

/// Wraps an angle to [0, 2*pi).
double wrap_angle(double a);

/// Signed angular difference a - b wrapped to (-pi, pi].
double angle_diff(double a, double b);

/// Point-mass aircraft state. The x axis points north and headings are
/// measured from north, counter-clockwise positive.
struct AircraftState {
  double x = 0.0;          // m
  double y = 0.0;          // m
  double h = 0.0;          // m, altitude
  double v = 0.0;          // m/s, horizontal airspeed (>= 0)
  double heading = 0.0;    // rad, [0, 2pi)
  double vz = 0.0;         // m/s, vertical rate
  double turn_rate = 0.0;  // rad/s
};

enum class StateTag : std::uint8_t { Normal = 0, Out = 1, LoWC = 2 };

/// Intruder state relative to the ownship. Out/LoWC-tagged states carry no
/// kinematic meaning; the relative velocity components are always derived
/// from (vi, theta_i) and the ownship command, never stored.
struct RelativeState {
  double dx = 0.0;       // m
  double dy = 0.0;       // m
  double dh = 0.0;       // m, intruder minus ownship altitude
  double vi = 0.0;       // m/s, intruder horizontal speed
  double vh = 0.0;       // m/s, relative vertical rate (intruder - ownship)
  double theta_i = 0.0;  // rad, intruder heading
  StateTag tag = StateTag::Normal;
};

/// Ownship command assumed while evaluating relative dynamics.
struct OwnshipCommand {
  double v = 55.0;       // m/s
  double heading = 0.0;  // rad
  double vz = 0.0;       // m/s
};

/// Per-step intruder maneuver increments.
struct IntruderDelta {
  double dvi = 0.0;     // m/s^2
  double dtheta = 0.0;  // rad/s
  double dvh = 0.0;     // m/s^2
};

struct SpeedLimits {
  double vi_min = 70.0;
  double vi_max = 300.0;
  double vh_min = -5.0;
  double vh_max = 5.0;
};

struct SeparationThresholds {
  double hmd_star_m = 1220.0;
  double dh_star_m = 122.0;
  double tau_mod_star_s = 35.0;
  double nmac_r_ft = 500.0;
  double nmac_h_ft = 120.0;
  double dmod_m = 1220.0;  // distance modifier used by tau_mod
};

RelativeState relative_state(const AircraftState& own, const AircraftState& intr);

/// Relative velocity components of s under the given ownship command.
void relative_velocity(const RelativeState& s, const OwnshipCommand& own, double& vrx, double& vry);

/// One transition of the relative state: positions advance with the
/// pre-step relative velocity, then speeds/heading pick up the increments.
/// Intruder speed and the relative vertical rate are clamped to `lim`.
/// Throws on Out/LoWC input.
RelativeState step_relative(const RelativeState& s, const OwnshipCommand& own, const IntruderDelta& d,
                            double dt, const SpeedLimits& lim = {});

/// Projected horizontal separation at the closest point of approach, with
/// the CPA time clamped to t >= 0 (a past CPA is reported as current range).
double hmd(const RelativeState& s, const OwnshipCommand& own);

double horizontal_range(const RelativeState& s);

/// d|p|/dt; positive when diverging.
double range_rate(const RelativeState& s, const OwnshipCommand& own);

/// Modified tau: 0 inside dmod, (dmod^2 - r^2)/(r * rdot) when closing,
/// +infinity when diverging outside dmod.
double tau_mod(double range_m, double range_rate_mps, double dmod_m);

/// Loss of well clear: all three separation conditions concurrently true.
bool is_lowc(const RelativeState& s, const OwnshipCommand& own, const SeparationThresholds& th);

/// Near mid-air collision test; boundary inclusive.
bool is_nmac(double r_ft, double h_ft, const SeparationThresholds& th);

/// Target the ownship steers toward while executing a maneuver.
struct GuidanceTarget {
  double heading = 0.0;  // rad
  double vz = 0.0;       // m/s
  double speed = 55.0;   // m/s
};

struct OwnshipDynamics {
  double max_turn_rate = deg2rad(6.0);  // rad/s
  double vz_slew = 2.5;                 // m/s per second
  double accel = 1.0;                   // m/s^2
};

/// Constant-velocity / constant-turn-rate propagation (positions advance
/// with pre-step velocity, then heading picks up the turn).
AircraftState advance_ballistic(const AircraftState& s, double dt);

/// Rate-limited steering toward a guidance target.
AircraftState advance_toward(const AircraftState& s, const GuidanceTarget& g, const OwnshipDynamics& dyn,
                             double dt);

GuidanceTarget maintain_course(const AircraftState& own);

/// ProjL: propagates ownship (under `own_target`) and intruder (ballistic)
/// forward i = 1..horizon_n at `dt` steps and returns the first step index
/// in loss of well clear, or nullopt.
std::optional<int> proj_lowc(const AircraftState& own, const AircraftState& intr,
                             const GuidanceTarget& own_target, int horizon_n, const SeparationThresholds& th,
                             const OwnshipDynamics& dyn, double dt = 1.0);

}  // namespace daa
