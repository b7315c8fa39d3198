#pragma once

#include <vector>

#include "daa/geometry.hpp"

namespace daa {

struct MotionRow {
  double value = 0.0;
  double p = 0.0;
};

/// Stochastic intruder maneuver model. A transition applies either a
/// horizontal maneuver (a speed-change / turn-rate pair) or a vertical one,
/// never both; `class_mix` is the probability of the horizontal class.
/// `turn_bias_dps` shifts every turn-row value when building biased maps.
struct IntruderMotionModel {
  std::vector<MotionRow> vertical_rows;          // dvh, m/s^2
  std::vector<MotionRow> horizontal_speed_rows;  // dvi, m/s^2
  std::vector<MotionRow> turn_rows;              // dtheta, deg/s
  double class_mix = 0.5;
  double turn_bias_dps = 0.0;

  static IntruderMotionModel defaults();

  /// Throws unless each row group normalizes to 1 +- 1e-9 and
  /// class_mix is a probability.
  void validate() const;
};

struct WeightedMotion {
  IntruderDelta delta;
  double p = 0.0;
};

/// Expands the model into the discrete maneuver distribution: every
/// (dvi, dtheta) pair weighted by class_mix, every dvh weighted by the
/// complement. Probabilities sum to 1.
std::vector<WeightedMotion> enumerate_motions(const IntruderMotionModel& model);

}  // namespace daa
