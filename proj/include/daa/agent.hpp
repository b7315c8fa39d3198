#pragma once

#include <optional>
#include <span>
#include <vector>

#include "daa/waitmap.hpp"

namespace daa {

enum class Axis : std::uint8_t { None = 0, Horizontal = 1, Vertical = 2 };
enum class Direction : std::uint8_t { None = 0, Left = 1, Right = 2, Up = 3, Down = 4 };
enum class CommandSource : std::uint8_t { Pilot = 0, Daa = 1, Blended = 2, MaintainCourse = 3 };

/// A pilot/DAA/blended maneuver. Horizontal commands carry a target heading
/// and a Left/Right direction; vertical commands a target vertical rate and
/// Up/Down.
struct ManeuverCommand {
  Axis axis = Axis::None;
  Direction direction = Direction::None;
  std::optional<double> target_heading;  // rad
  std::optional<double> target_vz;       // m/s
  std::optional<double> target_speed;    // m/s
  CommandSource source = CommandSource::MaintainCourse;
};

bool command_well_formed(const ManeuverCommand& cmd);

struct PilotIntent {
  Axis ax = Axis::None;
  Direction d = Direction::None;
};

struct AgentConfig {
  double wait_threshold_s = 4.0;  // W_T
  int projection_horizon_s = 10;  // N
  int sm_horizon_s = 10;
  // Lookahead that opens the resolution/decision window. It must exceed the
  // projection horizon or the safeguard term forbids waiting before the
  // wait decision is ever consulted.
  int alert_horizon_s = 30;
};

enum class AgentMode : std::uint8_t { Wait = 0, AllocateDaa = 1, ExecutePilot = 2, ExecuteBlended = 3 };

struct AgentDecision {
  AgentMode mode = AgentMode::Wait;
  ManeuverCommand command;
  double wait_remaining_s = 0.0;
};

/// Guidance realized by a command: absent targets hold the current values.
GuidanceTarget guidance_for(const ManeuverCommand& cmd, const AircraftState& own);

enum class WaitChoice : std::uint8_t { Wait = 0, NoWait = 1 };

/// Wait iff the map grants at least the wait threshold AND no loss of well
/// clear is projected along the maintained course; either failing disjunct
/// forces NoWait.
WaitChoice wait_decision(const WaitMap& map, const RelativeState& s, const AircraftState& own,
                         const AircraftState& intr, const GuidanceTarget& course, const AgentConfig& cfg,
                         const OwnshipDynamics& dyn, const SeparationThresholds& th);

/// Signed safety margin of executing `u`: the minimum over the projection
/// horizon of the per-step separation slack. Positive iff no projected step
/// satisfies all three well-clear-violation conditions concurrently.
double safety_metric(const ManeuverCommand& u, const AircraftState& own, const AircraftState& intr,
                     const AgentConfig& cfg, const OwnshipDynamics& dyn, const SeparationThresholds& th);

/// Throws NoIntentError on axis == None.
PilotIntent extract_intent(const ManeuverCommand& u_p);

enum class BlendMatch : std::uint8_t { Exact = 0, AxisOnly = 1, SafeFallback = 2, MaxSmFallback = 3 };

struct BlendOutcome {
  ManeuverCommand command;
  BlendMatch match = BlendMatch::Exact;
};

/// Safe candidate matching (ax, d), else safe matching ax, else any safe
/// candidate, else the max-SM candidate; least-deviating within each tier.
BlendOutcome blend(const PilotIntent& intent, const AircraftState& own, const AircraftState& intr,
                   std::span<const ManeuverCommand> daa_candidates, const AgentConfig& cfg,
                   const OwnshipDynamics& dyn, const SeparationThresholds& th);

struct AllocationOutcome {
  AgentDecision decision;
  std::optional<BlendMatch> blend_match;
};

/// Command allocation: without a pilot command the wait decision rules;
/// with one, execute it when safe, otherwise blend. A pilot command never
/// routes to AllocateDaa.
AllocationOutcome allocate(bool pilot_cmd_received, const ManeuverCommand& u_p, const ManeuverCommand& u_daa,
                           std::span<const ManeuverCommand> daa_candidates, const WaitMap& map,
                           const RelativeState& s, const AircraftState& own, const AircraftState& intr,
                           const GuidanceTarget& course, const AgentConfig& cfg, const OwnshipDynamics& dyn,
                           const SeparationThresholds& th);

/// Normalized size of the maneuver relative to the current state; used to
/// rank equally safe candidates (smallest heading change, then smallest
/// vertical-rate change).
double command_deviation(const ManeuverCommand& cmd, const AircraftState& own);

}  // namespace daa
