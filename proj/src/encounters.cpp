#include "daa/encounters.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "daa/errors.hpp"
#include "daa/rng.hpp"

namespace daa {

EncounterSpec sample_spec(std::uint64_t seed) {
  Rng rng(seed);
  EncounterSpec s;
  s.seed = seed;
  s.speed_mps = rng.gaussian_clipped(100.0, 30.0, 70.0, 400.0);
  s.vz_mps = rng.gaussian_clipped(0.0, 10.0, -10.0, 10.0);
  s.ia_deg = rng.uniform() < 0.30 ? 180.0 : rng.uniform(0.0, 180.0);
  s.hma_deg = rng.gaussian_clipped(0.0, 110.0, -110.0, 110.0);
  s.hmd_m = rng.uniform(0.0, 2750.0);
  s.vmd_m = rng.uniform(-915.0, 915.0);
  s.turn_dps = rng.uniform(-5.0, 5.0);
  s.advance_rate = rng.gaussian_clipped(0.5, 0.5, 0.0, 0.8);
  return s;
}

std::vector<EncounterSpec> sample_specs(std::uint64_t base_seed, int count) {
  std::vector<EncounterSpec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample_spec(base_seed + static_cast<std::uint64_t>(i)));
  return out;
}

TrajectoryPlan build_trajectories(const EncounterSpec& spec, double total_time_s, double own_cruise_alt_m) {
  if (!(total_time_s > 0.0)) throw ConfigError("encounter: total time must be positive");
  const double t_cpa = total_time_s / 2.0;

  TrajectoryPlan plan;
  plan.total_time_s = total_time_s;
  plan.own_cruise_alt_m = own_cruise_alt_m;
  plan.turn_start_s = spec.advance_rate * total_time_s;
  plan.turn_rate_rps = deg2rad(spec.turn_dps);

  plan.own0.x = 0.0;
  plan.own0.y = 0.0;
  plan.own0.h = own_cruise_alt_m;
  plan.own0.v = 55.0;
  plan.own0.heading = 0.0;
  plan.own0.vz = 0.0;

  const double theta = wrap_angle(deg2rad(spec.ia_deg));
  const double vx = spec.speed_mps * std::cos(theta);
  const double vy = spec.speed_mps * std::sin(theta);
  const double wx = vx - plan.own0.v;
  const double wy = vy;
  const double wn = std::hypot(wx, wy);
  if (wn < 1e-9) throw InfeasibleGeometryError("encounter: intruder velocity coincides with the ownship's");

  // Relative CPA offset perpendicular to the relative velocity, on the side
  // named by the horizontal miss angle.
  double nx = -wy / wn, ny = wx / wn;
  if ((spec.hma_deg >= 0.0 && ny < 0.0) || (spec.hma_deg < 0.0 && ny > 0.0)) {
    nx = -nx;
    ny = -ny;
  }
  const double own_cpa_x = plan.own0.v * t_cpa;
  const double intr_cpa_x = own_cpa_x + spec.hmd_m * nx;
  const double intr_cpa_y = spec.hmd_m * ny;

  plan.intr0.x = intr_cpa_x - vx * t_cpa;
  plan.intr0.y = intr_cpa_y - vy * t_cpa;
  plan.intr0.v = spec.speed_mps;
  plan.intr0.heading = theta;
  plan.intr0.turn_rate = 0.0;

  double vz = spec.vz_mps;
  double dh0 = spec.vmd_m - vz * t_cpa;
  if (std::abs(dh0) > 3000.0) {
    // Keep the CPA vertical miss; trade climb rate for a plausible start altitude.
    dh0 = std::clamp(dh0, -3000.0, 3000.0);
    vz = (spec.vmd_m - dh0) / t_cpa;
  }
  plan.intr0.h = own_cruise_alt_m + dh0;
  plan.intr0.vz = vz;

  if (std::hypot(plan.intr0.x, plan.intr0.y) > 100e3) {
    throw InfeasibleGeometryError("encounter: required intruder start exceeds the 100 km sanity radius");
  }
  return plan;
}

AircraftState intruder_step(const AircraftState& intr, const TrajectoryPlan& plan, double t_now, double dt) {
  AircraftState s = intr;
  s.turn_rate = (t_now >= plan.turn_start_s && t_now < plan.total_time_s) ? plan.turn_rate_rps : 0.0;
  return advance_ballistic(s, dt);
}

void write_encounters_csv(const std::string& path, const std::vector<EncounterSpec>& specs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "seed,speed_mps,vz_mps,ia_deg,hma_deg,hmd_m,vmd_m,turn_dps,advance_rate\n";
  char buf[512];
  for (const auto& s : specs) {
    std::snprintf(buf, sizeof buf,
                  "%" PRIu64 ",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.seed, s.speed_mps,
                  s.vz_mps, s.ia_deg, s.hma_deg, s.hmd_m, s.vmd_m, s.turn_dps, s.advance_rate);
    out << buf;
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<EncounterSpec> read_encounters_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open encounters file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("encounters file '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "seed,speed_mps,vz_mps,ia_deg,hma_deg,hmd_m,vmd_m,turn_dps,advance_rate") {
    throw ValidationError("encounters file '" + path + "' has an unexpected header");
  }
  std::vector<EncounterSpec> specs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw ValidationError("encounters file '" + path + "': line " + std::to_string(line_no) +
                            " does not have 9 columns");
    }
    try {
      EncounterSpec s;
      s.seed = std::stoull(fields[0]);
      s.speed_mps = std::stod(fields[1]);
      s.vz_mps = std::stod(fields[2]);
      s.ia_deg = std::stod(fields[3]);
      s.hma_deg = std::stod(fields[4]);
      s.hmd_m = std::stod(fields[5]);
      s.vmd_m = std::stod(fields[6]);
      s.turn_dps = std::stod(fields[7]);
      s.advance_rate = std::stod(fields[8]);
      specs.push_back(s);
    } catch (const std::exception&) {
      throw ValidationError("encounters file '" + path + "': line " + std::to_string(line_no) +
                            " is not parseable");
    }
  }
  return specs;
}

}  // namespace daa
