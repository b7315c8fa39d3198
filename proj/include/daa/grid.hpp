#pragma once

#include <array>
#include <string>

#include "daa/geometry.hpp"

namespace daa {

struct GridDim {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int bins = 0;

  double width() const { return (max - min) / bins; }
  double center(int i) const { return min + (i + 0.5) * width(); }

  /// Nearest-bin index with clamping to the boundary bins.
  int clamp_bin(double x) const;

  bool operator==(const GridDim&) const = default;
};

/// Uniform discretization of the six-dimensional relative state space.
/// Regular cells are indexed row-major with dx outermost; two virtual
/// absorbing cells (Out, LoWC) follow the regular block.
struct StateGrid {
  GridDim dx{"dx", -1500.0, 1500.0, 12};
  GridDim dy{"dy", -1500.0, 1500.0, 12};
  GridDim dh{"dh", -200.0, 200.0, 4};
  GridDim vi{"vi", 70.0, 300.0, 5};
  GridDim vh{"vh", -5.0, 5.0, 5};
  GridDim theta{"theta_i", 0.0, kTwoPi, 5};

  static StateGrid defaults() { return {}; }

  /// Small grid for oracle comparisons and fast tests.
  static StateGrid reduced();

  void validate() const;

  long cell_count() const;
  long out_cell() const { return cell_count(); }
  long lowc_cell() const { return cell_count() + 1; }
  long total_cells() const { return cell_count() + 2; }

  long index_of(const std::array<int, 6>& idx) const;
  std::array<int, 6> multi_index(long cell) const;

  RelativeState center_state(long cell) const;

  /// Snaps a normal state to the nearest regular cell (per-dimension nearest
  /// bin center, clamping to boundary bins; heading wraps).
  long snap_cell(const RelativeState& s) const;

  bool outside_horizontal(const RelativeState& s) const;

  SpeedLimits speed_limits() const;

  /// Cell index of the mirrored state (dy -> -dy, theta -> -theta mod 2pi).
  long mirror_cell(long cell) const;

  bool operator==(const StateGrid&) const = default;
};

}  // namespace daa
