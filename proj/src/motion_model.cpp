#include "daa/motion_model.hpp"

#include <cmath>

#include "daa/errors.hpp"

namespace daa {

IntruderMotionModel IntruderMotionModel::defaults() {
  IntruderMotionModel m;
  m.vertical_rows = {{-5.0, 0.15}, {-3.0, 0.20}, {0.0, 0.30}, {3.0, 0.20}, {5.0, 0.15}};
  m.horizontal_speed_rows = {{-10.0, 0.10}, {-5.0, 0.15}, {-2.5, 0.15}, {0.0, 0.20},
                             {2.5, 0.15},   {5.0, 0.15},  {10.0, 0.10}};
  m.turn_rows = {{-5.0, 0.20}, {-2.5, 0.20}, {0.0, 0.20}, {2.5, 0.20}, {5.0, 0.20}};
  return m;
}

namespace {

void check_rows(const std::vector<MotionRow>& rows, const char* what) {
  if (rows.empty()) throw ValidationError(std::string("motion model: empty ") + what + " group");
  double sum = 0.0;
  for (const auto& r : rows) {
    if (r.p < 0.0) throw ValidationError(std::string("motion model: negative probability in ") + what);
    sum += r.p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(std::string("motion model: ") + what + " probabilities do not normalize");
}

}  // namespace

void IntruderMotionModel::validate() const {
  check_rows(vertical_rows, "vertical");
  check_rows(horizontal_speed_rows, "horizontal speed");
  check_rows(turn_rows, "turn rate");
  if (class_mix < 0.0 || class_mix > 1.0) throw ValidationError("motion model: class_mix must be in [0, 1]");
}

std::vector<WeightedMotion> enumerate_motions(const IntruderMotionModel& model) {
  model.validate();
  std::vector<WeightedMotion> out;
  out.reserve(model.horizontal_speed_rows.size() * model.turn_rows.size() + model.vertical_rows.size());

  for (const auto& sv : model.horizontal_speed_rows) {
    for (const auto& tr : model.turn_rows) {
      WeightedMotion m;
      m.delta.dvi = sv.value;
      m.delta.dtheta = deg2rad(tr.value + model.turn_bias_dps);
      m.delta.dvh = 0.0;
      m.p = model.class_mix * sv.p * tr.p;
      if (m.p > 0.0) out.push_back(m);
    }
  }
  for (const auto& vr : model.vertical_rows) {
    WeightedMotion m;
    m.delta.dvh = vr.value;
    m.p = (1.0 - model.class_mix) * vr.p;
    if (m.p > 0.0) out.push_back(m);
  }
  return out;
}

}  // namespace daa
