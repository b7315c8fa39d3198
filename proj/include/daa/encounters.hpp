#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daa/geometry.hpp"

namespace daa {

/// One sampled scenario. The incident angle `ia` is the intruder velocity
/// direction measured counter-clockwise from the ownship longitudinal axis;
/// `hma` only selects which side of the ownship track the miss occurs on.
struct EncounterSpec {
  std::uint64_t seed = 0;
  double speed_mps = 0.0;
  double vz_mps = 0.0;
  double ia_deg = 0.0;
  double hma_deg = 0.0;
  double hmd_m = 0.0;       // target horizontal miss distance at CPA
  double vmd_m = 0.0;       // target vertical miss distance at CPA
  double turn_dps = 0.0;
  double advance_rate = 0.0;  // fraction of T at which the intruder turn starts
};

/// Seed-deterministic draw from the encounter parameter distributions
/// (bounded Gaussians are clipped to their ranges).
EncounterSpec sample_spec(std::uint64_t seed);

/// seed = base_seed + index.
std::vector<EncounterSpec> sample_specs(std::uint64_t base_seed, int count);

/// Straight-north ownship plus an intruder placed so that, absent the turn,
/// the horizontal CPA occurs at T/2 with the sampled miss distances; the
/// turn then perturbs that nominal geometry.
struct TrajectoryPlan {
  AircraftState own0;
  AircraftState intr0;
  double turn_start_s = 0.0;
  double turn_rate_rps = 0.0;
  double total_time_s = 240.0;
  double own_cruise_alt_m = 1000.0;
};

TrajectoryPlan build_trajectories(const EncounterSpec& spec, double total_time_s = 240.0,
                                  double own_cruise_alt_m = 1000.0);

/// Advances the intruder along its plan (the turn applies from
/// turn_start_s until the end of the encounter).
AircraftState intruder_step(const AircraftState& intr, const TrajectoryPlan& plan, double t_now, double dt);

void write_encounters_csv(const std::string& path, const std::vector<EncounterSpec>& specs);
std::vector<EncounterSpec> read_encounters_csv(const std::string& path);

}  // namespace daa
