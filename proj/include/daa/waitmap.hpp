#pragma once

#include <string>
#include <vector>

#include "daa/mdp.hpp"

namespace daa {

/// Solved wait map: per-cell optimal action, expected wait time and value,
/// together with everything needed to rebuild it.
struct WaitMap {
  StateGrid grid;
  IntruderMotionModel model;
  MdpConfig config;
  std::vector<CellAction> action;
  std::vector<double> wait_time_s;
  std::vector<double> value;
  int vi_sweeps = 0;
  double vi_residual = 0.0;
  std::string build_timestamp;  // informational, excluded from the content hash
};

/// Builds the kernel, solves the MDP and computes wait times.
/// Throws ConvergenceError if value iteration does not converge.
WaitMap build_wait_map(const StateGrid& grid, const IntruderMotionModel& model, const MdpConfig& cfg,
                       int threads = 0);

struct MapLookup {
  CellAction action;
  double wait_seconds;
};

/// Snaps a normal state to its cell and returns that cell's entry. States
/// beyond the horizontal box that are diverging fall back to
/// (Wait, horizon cap); closing states clamp to the boundary bins.
MapLookup lookup(const WaitMap& map, const RelativeState& s);

std::string content_hash(const WaitMap& map);

void save_map(const WaitMap& map, const std::string& path);
WaitMap load_map(const std::string& path);

struct WaitHistogram {
  double min_s = 0.0;
  double max_s = 0.0;
  double mode_bin_lo = 0.0;  // [lo, hi) of the tallest bin
  double mode_bin_hi = 0.0;
  std::vector<long> counts;  // 1-second bins from 0
  long included_cells = 0;
  long excluded_cells = 0;  // cells already violating well clear at their center
  double mean_wait_dx_pos = 0.0;
  double mean_wait_dx_neg = 0.0;
};

/// Wait-time distribution over the map. Cells whose bin center already
/// violates well clear are excluded (not waitable states), as are cells
/// carrying the horizon-cap sentinel (no path average exists for them).
/// The dx-positive/negative means are taken over all regular cells.
WaitHistogram wait_histogram(const WaitMap& map, double bin_width_s = 1.0);

}  // namespace daa
