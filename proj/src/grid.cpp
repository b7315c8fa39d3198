#include "daa/grid.hpp"

#include <algorithm>
#include <cmath>

#include "daa/errors.hpp"

namespace daa {

int GridDim::clamp_bin(double x) const {
  const int b = static_cast<int>(std::floor((x - min) / width()));
  return std::clamp(b, 0, bins - 1);
}

StateGrid StateGrid::reduced() {
  StateGrid g;
  g.dx.bins = 4;
  g.dy.bins = 4;
  g.dh.bins = 2;
  g.vi.bins = 2;
  g.vh.bins = 2;
  g.theta.bins = 2;
  return g;
}

void StateGrid::validate() const {
  for (const GridDim* d : {&dx, &dy, &dh, &vi, &vh, &theta}) {
    if (d->bins < 1) throw ValidationError("grid dimension '" + d->name + "' needs at least one bin");
    if (!(d->max > d->min)) throw ValidationError("grid dimension '" + d->name + "' has empty range");
  }
}

long StateGrid::cell_count() const {
  return static_cast<long>(dx.bins) * dy.bins * dh.bins * vi.bins * vh.bins * theta.bins;
}

long StateGrid::index_of(const std::array<int, 6>& idx) const {
  long cell = idx[0];
  cell = cell * dy.bins + idx[1];
  cell = cell * dh.bins + idx[2];
  cell = cell * vi.bins + idx[3];
  cell = cell * vh.bins + idx[4];
  cell = cell * theta.bins + idx[5];
  return cell;
}

std::array<int, 6> StateGrid::multi_index(long cell) const {
  std::array<int, 6> idx{};
  idx[5] = static_cast<int>(cell % theta.bins);
  cell /= theta.bins;
  idx[4] = static_cast<int>(cell % vh.bins);
  cell /= vh.bins;
  idx[3] = static_cast<int>(cell % vi.bins);
  cell /= vi.bins;
  idx[2] = static_cast<int>(cell % dh.bins);
  cell /= dh.bins;
  idx[1] = static_cast<int>(cell % dy.bins);
  cell /= dy.bins;
  idx[0] = static_cast<int>(cell);
  return idx;
}

RelativeState StateGrid::center_state(long cell) const {
  const auto idx = multi_index(cell);
  RelativeState s;
  s.dx = dx.center(idx[0]);
  s.dy = dy.center(idx[1]);
  s.dh = dh.center(idx[2]);
  s.vi = vi.center(idx[3]);
  s.vh = vh.center(idx[4]);
  s.theta_i = theta.center(idx[5]);
  s.tag = StateTag::Normal;
  return s;
}

long StateGrid::snap_cell(const RelativeState& s) const {
  std::array<int, 6> idx{};
  idx[0] = dx.clamp_bin(s.dx);
  idx[1] = dy.clamp_bin(s.dy);
  idx[2] = dh.clamp_bin(s.dh);
  idx[3] = vi.clamp_bin(s.vi);
  idx[4] = vh.clamp_bin(s.vh);
  idx[5] = theta.clamp_bin(wrap_angle(s.theta_i));
  return index_of(idx);
}

bool StateGrid::outside_horizontal(const RelativeState& s) const {
  return s.dx < dx.min || s.dx > dx.max || s.dy < dy.min || s.dy > dy.max;
}

SpeedLimits StateGrid::speed_limits() const { return SpeedLimits{vi.min, vi.max, vh.min, vh.max}; }

long StateGrid::mirror_cell(long cell) const {
  auto idx = multi_index(cell);
  idx[1] = dy.bins - 1 - idx[1];
  idx[5] = theta.bins - 1 - idx[5];
  return index_of(idx);
}

}  // namespace daa
