#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "daa/grid.hpp"
#include "daa/motion_model.hpp"

namespace daa {

enum class CellAction : std::uint8_t { Wait = 0, Evade = 1 };

struct MdpConfig {
  double gamma = 0.95;
  double c1 = 1220.0;
  double c2 = 122.0;
  double c3 = 1.0;
  double dt = 1.0;
  OwnshipCommand ownship{};  // 55 m/s due north, level
  double convergence_tol = 1e-6;
  int max_sweeps = 1000;
  double wait_horizon_cap_s = 60.0;
  double reward_floor_m = 1.0;  // guards the separation divisions
  SeparationThresholds thresholds{};

  void validate() const;
};

/// One-step reward of waiting, evaluated at the continuous stepped state.
/// Evading always earns zero.
double wait_reward(const RelativeState& stepped, const MdpConfig& cfg);

/// Sparse Wait-action transition kernel over the grid (CSR rows per regular
/// cell). The Evade action is implicit: a deterministic transition to Out
/// with zero reward. Successor classification happens on the continuous
/// stepped state before snapping: LoWC if the stepped state violates well
/// clear, Out if it leaves the horizontal box while diverging.
struct WaitKernel {
  long n_cells = 0;
  long out_id = 0;
  long lowc_id = 0;
  std::vector<long> row_offset;  // n_cells + 1
  std::vector<std::int32_t> col;
  std::vector<double> prob;
  std::vector<double> reward;  // expected one-step Wait reward per cell
};

WaitKernel build_wait_kernel(const StateGrid& grid, const IntruderMotionModel& model, const MdpConfig& cfg,
                             int threads = 0);
WaitKernel build_wait_kernel_serial(const StateGrid& grid, const IntruderMotionModel& model,
                                    const MdpConfig& cfg);

/// Wait-action kernel for the hitting-time computation. Heading, intruder
/// speed and relative altitude move by less than half a bin per step, so
/// nearest-bin snapping would freeze them and collapse every hitting time
/// to either one step or the horizon cap. This kernel instead spreads the
/// stepped state over the neighboring bins of those dimensions
/// (multilinear weights), the consistent discretization of propagating
/// paths in continuous state space. Classification of LoWC/Out outcomes is
/// unchanged.
WaitKernel build_wait_time_kernel(const StateGrid& grid, const IntruderMotionModel& model,
                                  const MdpConfig& cfg, int threads = 0);
WaitKernel build_wait_time_kernel_serial(const StateGrid& grid, const IntruderMotionModel& model,
                                         const MdpConfig& cfg);

/// Successor distribution of one cell under an action; matches the kernel
/// row for Wait and the implicit (Out, 1) row for Evade.
std::vector<std::pair<long, double>> transition_distribution(const StateGrid& grid, long cell,
                                                             CellAction action, const MdpConfig& cfg,
                                                             const IntruderMotionModel& model);

struct ValueIterationResult {
  std::vector<double> value;
  std::vector<CellAction> action;
  double residual = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Synchronous (Jacobi) value iteration with V(Out) = V(LoWC) = 0.
/// Ties between Wait and Evade resolve to Evade. The parallel and serial
/// variants run identical per-cell arithmetic and return identical bits.
ValueIterationResult value_iterate(const WaitKernel& k, const MdpConfig& cfg, int threads = 0);
ValueIterationResult value_iterate_serial(const WaitKernel& k, const MdpConfig& cfg);

/// Expected time to reach the LoWC cell under the Wait kernel, conditioned
/// on reaching it within the horizon cap; cells that cannot reach LoWC
/// within the cap receive the cap itself.
std::vector<double> expected_wait_times(const WaitKernel& k, double dt, double cap_s, int threads = 0);
std::vector<double> expected_wait_times_serial(const WaitKernel& k, double dt, double cap_s);

}  // namespace daa
