#pragma once

#include <span>
#include <string>
#include <vector>

#include "daa/actors.hpp"
#include "daa/encounters.hpp"
#include "daa/waitmap.hpp"

namespace daa {

enum class Group : std::uint8_t { B1 = 0, B2 = 1, IC1 = 2, ID1 = 3, ID2 = 4 };

std::string group_name(Group g);
Group group_from_name(const std::string& name);  // throws ConfigError
std::vector<Group> all_groups();

enum class WaitSourceKind : std::uint8_t { None = 0, ConstantBudget = 1, Map = 2 };

/// One experiment configuration: baseline groups never wait, the integrated
/// groups wait on either a fixed budget or the wait map.
struct GroupConfig {
  Group group = Group::B2;
  bool integrated = false;
  WaitSourceKind wait_source = WaitSourceKind::None;
  double constant_wait_s = 0.0;
  LatencyConfig latency;
};

GroupConfig group_preset(Group g);

struct SimParams {
  double dt = 1.0;
  double total_time_s = 240.0;
  double own_cruise_speed = 55.0;
  double own_cruise_alt = 1000.0;
  double recovery_lookahead_s = 30.0;
  AgentConfig agent;
  OwnshipDynamics dynamics;
  SeparationThresholds thresholds;
  DaaModel daa;
  PilotModel pilot;
};

enum class StepMode : std::uint8_t {
  Nominal = 0,
  Wait = 1,
  AllocateDaa = 2,
  ExecutePilot = 3,
  ExecuteBlended = 4,
  DaaOverride = 5
};

struct StepRecord {
  double t = 0.0;
  AircraftState own;
  AircraftState intr;
  RelativeState rel;
  StepMode mode = StepMode::Nominal;
  CommandSource exec_source = CommandSource::MaintainCourse;
  double wait_lookup_s = 0.0;
  double hmd_m = 0.0;
  double tau_s = 0.0;
  double r_m = 0.0;  // current horizontal separation
  double h_m = 0.0;  // current vertical separation
  bool lowc = false;
  bool nmac = false;
};

struct EncounterSummary {
  long k_samples = 0;
  long wait_count = 0;
  long nowait_count = 0;
  long receptions = 0;
  long exec_pilot = 0;
  long exec_blended = 0;
  long exec_override = 0;
  long blend_exact = 0;
  long blend_axis = 0;
  long blend_fallback = 0;
  long lowc_steps = 0;
  long nmac_steps = 0;
  bool lowc_any = false;
  double pi = 0.0;
  double max_dev_h = 0.0;
  double max_dev_v = 0.0;
};

struct EncounterLog {
  EncounterSpec spec;
  std::vector<StepRecord> steps;
  EncounterSummary summary;
};

/// Runs one closed-loop encounter. All randomness derives from spec.seed so
/// the same spec replays identically in every group, isolating the group
/// variable. Throws ConfigError when a map group runs without a map.
EncounterLog run_encounter(const EncounterSpec& spec, const GroupConfig& gc, const SimParams& params,
                           const WaitMap* map);

// ---- metrics ----

/// Fraction of step samples in loss of well clear, over all logs.
double p_lowc(std::span<const EncounterLog> logs);
double p_nmac(std::span<const EncounterLog> logs);

struct RateCategory {
  double rate_per_hr = 0.0;
  std::string category;
};

/// Per-flight-hour rate with its likelihood band. Note the normalization
/// divides a per-step probability by hours, which is how the source metric
/// is defined; see the report footnote.
RateCategory lowc_rate_per_hour(double p_lowc_value, double total_sim_hours);

/// Time-integrated penetration severity over the steps in loss of well
/// clear; the distance/time factors are evaluated in feet/seconds.
double penetration_integral(const EncounterLog& log, const SeparationThresholds& th, double dt);

/// Max distance between the flown ownship track and the unmaneuvered
/// nominal track, horizontal and vertical.
struct Deviation {
  double horizontal_m = 0.0;
  double vertical_m = 0.0;
};
Deviation trajectory_deviation(const EncounterLog& log, const SimParams& params);

struct GroupReport {
  std::string group;
  long encounters = 0;
  long k_samples = 0;
  long wait_count = 0;
  long nowait_count = 0;
  long receptions = 0;
  long exec_pilot = 0;
  long exec_blended = 0;
  long exec_override = 0;
  long blend_exact = 0;
  long blend_axis = 0;
  long blend_fallback = 0;
  long lowc_steps = 0;
  long nmac_steps = 0;
  long lowc_encounters = 0;
  double p_lowc = 0.0;
  double p_nmac = 0.0;
  double rate_per_hr = 0.0;
  std::string likelihood;
  double mean_pi = 0.0;  // over encounters with a loss of well clear
  double max_pi = 0.0;
  double mean_dev_h = 0.0;
  double mean_dev_v = 0.0;
  double total_hours = 0.0;
};

struct GroupRun {
  GroupReport report;
  std::vector<EncounterLog> logs;  // populated when keep_logs is set
};

/// Runs every spec through one group configuration. Encounters execute in
/// parallel; aggregation folds per-encounter summaries in index order, so
/// the report is identical for every thread count.
GroupRun run_group(std::span<const EncounterSpec> specs, const GroupConfig& gc, const SimParams& params,
                   const WaitMap* map, int threads, bool keep_logs = false);

struct BatchReport {
  std::string tool_version;
  std::uint64_t base_seed = 0;
  std::string encounters_hash;
  std::string rate_note;
  std::vector<GroupReport> groups;
};

BatchReport run_batch(std::span<const EncounterSpec> specs, std::span<const GroupConfig> groups,
                      const SimParams& params, const WaitMap* map, std::uint64_t base_seed, int threads);

}  // namespace daa
