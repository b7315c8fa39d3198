#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <vector>

#include "daa/agent.hpp"
#include "daa/errors.hpp"
#include "daa/rng.hpp"

namespace daa {

/// Simplified onboard resolution generator: a fixed menu of heading offsets
/// and vertical-rate options scored by the agent's safety metric.
struct DaaModel {
  std::vector<double> heading_offsets_deg = {15.0, -15.0, 30.0, -30.0, 45.0, -45.0, 60.0, -60.0, 90.0, -90.0};
  std::vector<double> vz_options_mps = {2.5, -2.5, 5.0, -5.0};
};

/// Candidate commands relative to the current ownship state, in menu order.
/// Positive heading offsets are left turns (counter-clockwise).
std::vector<ManeuverCommand> daa_menu(const DaaModel& model, const AircraftState& own);

/// Least-deviating safe candidate; max-SM candidate when nothing is safe.
ManeuverCommand daa_resolve(const AircraftState& own, const AircraftState& intr, const DaaModel& model,
                            const AgentConfig& cfg, const OwnshipDynamics& dyn,
                            const SeparationThresholds& th);

/// Simplified remote pilot: picks from the same menu, ordered by preference
/// (axis order, then direction order, then least deviation), and reacts
/// after a truncated-Gaussian delay.
struct PilotModel {
  double reaction_mean_s = 3.0;
  double reaction_sd_s = 1.0;
  double reaction_min_s = 0.5;
  std::vector<Axis> axis_order = {Axis::Horizontal, Axis::Vertical};
  std::vector<Direction> direction_order = {Direction::Right, Direction::Left, Direction::Up,
                                            Direction::Down};
};

struct PilotResponse {
  ManeuverCommand command;
  double issue_time_s = 0.0;
};

PilotResponse pilot_respond(const AircraftState& own_view, const AircraftState& intr_view, double t_now,
                            const PilotModel& model, const DaaModel& daa, const AgentConfig& cfg,
                            const OwnshipDynamics& dyn, const SeparationThresholds& th, Rng& rng);

enum class LatencyMode : std::uint8_t { Constant = 0, Gaussian = 1 };

struct LatencyConfig {
  LatencyMode mode = LatencyMode::Gaussian;
  double constant_s = 4.0;
  double mean_s = 5.0;
  double sd_s = 3.0;
  double min_s = 0.2;
  double max_s = 10.0;
};

double sample_latency(const LatencyConfig& cfg, Rng& rng);

/// One-way delay channel with FIFO delivery: a message is never delivered
/// before its predecessor, and never early.
template <class T>
class LatencyChannel {
 public:
  LatencyChannel(const LatencyConfig& cfg, Rng rng) : cfg_(cfg), rng_(rng) {}

  void send(const T& payload, double t_now) {
    if (t_now < last_send_) throw ValidationError("channel: send times must be non-decreasing");
    last_send_ = t_now;
    double deliver_at = t_now + sample_latency(cfg_, rng_);
    if (!queue_.empty()) deliver_at = std::max(deliver_at, queue_.back().deliver_at);
    deliver_at = std::max(deliver_at, last_delivered_at_);
    queue_.push_back(Item{payload, deliver_at});
  }

  std::vector<T> poll(double t_now) {
    std::vector<T> out;
    while (!queue_.empty() && queue_.front().deliver_at <= t_now) {
      out.push_back(queue_.front().payload);
      last_delivered_at_ = queue_.front().deliver_at;
      queue_.pop_front();
    }
    return out;
  }

  std::size_t in_flight() const { return queue_.size(); }

 private:
  struct Item {
    T payload;
    double deliver_at;
  };

  LatencyConfig cfg_;
  Rng rng_;
  std::deque<Item> queue_;
  double last_send_ = -std::numeric_limits<double>::infinity();
  double last_delivered_at_ = -std::numeric_limits<double>::infinity();
};

}  // namespace daa
