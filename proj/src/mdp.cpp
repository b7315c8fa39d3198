#include "daa/mdp.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "daa/errors.hpp"

namespace daa {

void MdpConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("mdp: gamma must lie in (0, 1)");
  if (!(dt > 0.0)) throw ConfigError("mdp: dt must be positive");
  if (!(convergence_tol > 0.0)) throw ConfigError("mdp: convergence_tol must be positive");
  if (max_sweeps < 1) throw ConfigError("mdp: max_sweeps must be at least 1");
  if (!(wait_horizon_cap_s >= dt)) throw ConfigError("mdp: wait_horizon_cap_s must be at least dt");
  if (!(c1 > 0.0 && c2 > 0.0)) throw ConfigError("mdp: reward constants must be positive");
}

double wait_reward(const RelativeState& stepped, const MdpConfig& cfg) {
  const double h = std::max(hmd(stepped, cfg.ownship), cfg.reward_floor_m);
  const double dv = std::max(std::abs(stepped.dh), cfg.reward_floor_m);
  return -std::min(cfg.c1 / h, cfg.c2 / dv) + cfg.c3 * cfg.dt;
}

namespace {

struct RowScratch {
  std::vector<std::int32_t> col;
  std::vector<double> prob;

  void clear() {
    col.clear();
    prob.clear();
  }

  int size() const { return static_cast<int>(col.size()); }

  void add(std::int32_t c, double p) {
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (col[i] == c) {
        prob[i] += p;
        return;
      }
    }
    col.push_back(c);
    prob.push_back(p);
  }
};

/// Per-dimension interpolation stencil: up to two bins with weights.
struct Stencil {
  int bin[2];
  double w[2];
  int n;
};

Stencil interp_clamped(const GridDim& d, double x) {
  const double c0 = d.center(0);
  const double cw = d.width();
  const double pos = (x - c0) / cw;
  if (pos <= 0.0) return {{0, 0}, {1.0, 0.0}, 1};
  if (pos >= d.bins - 1) return {{d.bins - 1, 0}, {1.0, 0.0}, 1};
  const int i = static_cast<int>(std::floor(pos));
  const double frac = pos - i;
  if (frac == 0.0) return {{i, 0}, {1.0, 0.0}, 1};
  return {{i, i + 1}, {1.0 - frac, frac}, 2};
}

Stencil interp_wrapped(const GridDim& d, double x) {
  const double c0 = d.center(0);
  const double cw = d.width();
  double pos = (x - c0) / cw;
  if (pos < 0.0) pos += d.bins;  // below the first center wraps to the last
  const int i = static_cast<int>(std::floor(pos));
  const double frac = pos - i;
  const int lo = i % d.bins;
  if (frac == 0.0) return {{lo, 0}, {1.0, 0.0}, 1};
  return {{lo, (lo + 1) % d.bins}, {1.0 - frac, frac}, 2};
}

/// Steps one cell center through every motion, classifying and snapping the
/// outcomes. Shared by the kernel builder and transition_distribution.
void build_row(const StateGrid& grid, const std::vector<WeightedMotion>& motions, const MdpConfig& cfg,
               const SpeedLimits& lim, long cell, RowScratch& row, double& reward) {
  const RelativeState center = grid.center_state(cell);
  row.clear();
  reward = 0.0;
  for (const auto& m : motions) {
    const RelativeState next = step_relative(center, cfg.ownship, m.delta, cfg.dt, lim);
    reward += m.p * wait_reward(next, cfg);
    std::int32_t target;
    if (is_lowc(next, cfg.ownship, cfg.thresholds)) {
      target = static_cast<std::int32_t>(grid.lowc_cell());
    } else if (grid.outside_horizontal(next) && range_rate(next, cfg.ownship) > 0.0) {
      target = static_cast<std::int32_t>(grid.out_cell());
    } else {
      target = static_cast<std::int32_t>(grid.snap_cell(next));
    }
    row.add(target, m.p);
  }
}

/// Variant used for hitting times: heading, intruder speed and relative
/// altitude spread over their two neighboring bins with multilinear
/// weights; the remaining dimensions snap as usual.
void build_time_row(const StateGrid& grid, const std::vector<WeightedMotion>& motions, const MdpConfig& cfg,
                    const SpeedLimits& lim, long cell, RowScratch& row, double& reward) {
  const RelativeState center = grid.center_state(cell);
  row.clear();
  reward = 0.0;
  for (const auto& m : motions) {
    const RelativeState next = step_relative(center, cfg.ownship, m.delta, cfg.dt, lim);
    reward += m.p * wait_reward(next, cfg);
    if (is_lowc(next, cfg.ownship, cfg.thresholds)) {
      row.add(static_cast<std::int32_t>(grid.lowc_cell()), m.p);
      continue;
    }
    if (grid.outside_horizontal(next) && range_rate(next, cfg.ownship) > 0.0) {
      row.add(static_cast<std::int32_t>(grid.out_cell()), m.p);
      continue;
    }
    std::array<int, 6> idx{};
    idx[0] = grid.dx.clamp_bin(next.dx);
    idx[1] = grid.dy.clamp_bin(next.dy);
    idx[4] = grid.vh.clamp_bin(next.vh);
    const Stencil sdh = interp_clamped(grid.dh, next.dh);
    const Stencil svi = interp_clamped(grid.vi, next.vi);
    const Stencil sth = interp_wrapped(grid.theta, wrap_angle(next.theta_i));
    for (int a = 0; a < sdh.n; ++a) {
      idx[2] = sdh.bin[a];
      for (int b = 0; b < svi.n; ++b) {
        idx[3] = svi.bin[b];
        for (int t = 0; t < sth.n; ++t) {
          idx[5] = sth.bin[t];
          const double w = sdh.w[a] * svi.w[b] * sth.w[t];
          row.add(static_cast<std::int32_t>(grid.index_of(idx)), m.p * w);
        }
      }
    }
  }
}

using RowBuilder = void (*)(const StateGrid&, const std::vector<WeightedMotion>&, const MdpConfig&,
                            const SpeedLimits&, long, RowScratch&, double&);

WaitKernel build_kernel_impl(const StateGrid& grid, const IntruderMotionModel& model, const MdpConfig& cfg,
                             int threads, bool parallel, RowBuilder builder) {
  grid.validate();
  cfg.validate();
  const auto motions = enumerate_motions(model);
  const SpeedLimits lim = grid.speed_limits();

  WaitKernel k;
  k.n_cells = grid.cell_count();
  k.out_id = grid.out_cell();
  k.lowc_id = grid.lowc_cell();
  k.row_offset.assign(k.n_cells + 1, 0);
  k.reward.assign(k.n_cells, 0.0);

  // Pass 1: per-row entry counts.
  std::vector<std::int32_t> counts(k.n_cells, 0);
#pragma omp parallel if (parallel) num_threads(threads > 0 ? threads : omp_get_max_threads())
  {
    RowScratch row;
    double reward = 0.0;
#pragma omp for schedule(static)
    for (long c = 0; c < k.n_cells; ++c) {
      builder(grid, motions, cfg, lim, c, row, reward);
      counts[c] = row.size();
      k.reward[c] = reward;
    }
  }

  for (long c = 0; c < k.n_cells; ++c) k.row_offset[c + 1] = k.row_offset[c] + counts[c];
  k.col.assign(k.row_offset[k.n_cells], 0);
  k.prob.assign(k.row_offset[k.n_cells], 0.0);

  // Pass 2: fill rows (each cell writes only its own slice).
#pragma omp parallel if (parallel) num_threads(threads > 0 ? threads : omp_get_max_threads())
  {
    RowScratch row;
    double reward = 0.0;
#pragma omp for schedule(static)
    for (long c = 0; c < k.n_cells; ++c) {
      builder(grid, motions, cfg, lim, c, row, reward);
      const long base = k.row_offset[c];
      for (int i = 0; i < row.size(); ++i) {
        k.col[base + i] = row.col[i];
        k.prob[base + i] = row.prob[i];
      }
    }
  }
  return k;
}

}  // namespace

WaitKernel build_wait_kernel(const StateGrid& grid, const IntruderMotionModel& model, const MdpConfig& cfg,
                             int threads) {
  return build_kernel_impl(grid, model, cfg, threads, true, build_row);
}

WaitKernel build_wait_kernel_serial(const StateGrid& grid, const IntruderMotionModel& model,
                                    const MdpConfig& cfg) {
  return build_kernel_impl(grid, model, cfg, 1, false, build_row);
}

WaitKernel build_wait_time_kernel(const StateGrid& grid, const IntruderMotionModel& model,
                                  const MdpConfig& cfg, int threads) {
  return build_kernel_impl(grid, model, cfg, threads, true, build_time_row);
}

WaitKernel build_wait_time_kernel_serial(const StateGrid& grid, const IntruderMotionModel& model,
                                         const MdpConfig& cfg) {
  return build_kernel_impl(grid, model, cfg, 1, false, build_time_row);
}

std::vector<std::pair<long, double>> transition_distribution(const StateGrid& grid, long cell,
                                                             CellAction action, const MdpConfig& cfg,
                                                             const IntruderMotionModel& model) {
  if (cell < 0 || cell >= grid.cell_count()) throw ValidationError("transition_distribution: virtual or out-of-range cell");
  if (action == CellAction::Evade) return {{grid.out_cell(), 1.0}};
  const auto motions = enumerate_motions(model);
  RowScratch row;
  double reward = 0.0;
  build_row(grid, motions, cfg, grid.speed_limits(), cell, row, reward);
  std::vector<std::pair<long, double>> out;
  out.reserve(row.size());
  for (int i = 0; i < row.size(); ++i) out.emplace_back(row.col[i], row.prob[i]);
  return out;
}

namespace {

ValueIterationResult value_iterate_impl(const WaitKernel& k, const MdpConfig& cfg, int threads,
                                        bool parallel) {
  cfg.validate();
  const long n = k.n_cells;
  // Virtual cells are pinned to zero at the tail of the value arrays.
  std::vector<double> v_prev(n + 2, 0.0), v_next(n + 2, 0.0);
  ValueIterationResult res;
  res.action.assign(n, CellAction::Evade);
  res.residual = std::numeric_limits<double>::infinity();

  int sweep = 0;
  while (sweep < cfg.max_sweeps) {
    double residual = 0.0;
#pragma omp parallel for if (parallel) num_threads(threads > 0 ? threads : omp_get_max_threads()) \
    schedule(static) reduction(max : residual)
    for (long c = 0; c < n; ++c) {
      double q = k.reward[c];
      double future = 0.0;
      for (long e = k.row_offset[c]; e < k.row_offset[c + 1]; ++e) future += k.prob[e] * v_prev[k.col[e]];
      q += cfg.gamma * future;
      // Evading is a zero-value terminal; Evade wins ties.
      const double value = q > 0.0 ? q : 0.0;
      res.action[c] = q > 0.0 ? CellAction::Wait : CellAction::Evade;
      v_next[c] = value;
      residual = std::max(residual, std::abs(value - v_prev[c]));
    }
    ++sweep;
    res.residual_history.push_back(residual);
    res.residual = residual;
    std::swap(v_prev, v_next);
    if (residual < cfg.convergence_tol) {
      res.converged = true;
      break;
    }
  }
  res.sweeps = sweep;
  v_prev.resize(n);
  res.value = std::move(v_prev);
  return res;
}

std::vector<double> wait_times_impl(const WaitKernel& k, double dt, double cap_s, int threads,
                                    bool parallel) {
  if (!(dt > 0.0) || !(cap_s >= dt)) throw ConfigError("wait times: need dt > 0 and cap >= dt");
  const long n = k.n_cells;
  const int horizon = static_cast<int>(std::llround(cap_s / dt));

  // q: probability of reaching LoWC within the remaining horizon;
  // e: expected steps-to-LoWC weighted by that probability.
  std::vector<double> q_prev(n + 2, 0.0), q_next(n + 2, 0.0);
  std::vector<double> e_prev(n + 2, 0.0), e_next(n + 2, 0.0);
  q_prev[k.lowc_id] = 1.0;
  q_next[k.lowc_id] = 1.0;

  for (int step = 0; step < horizon; ++step) {
#pragma omp parallel for if (parallel) num_threads(threads > 0 ? threads : omp_get_max_threads()) \
    schedule(static)
    for (long c = 0; c < n; ++c) {
      double q = 0.0, e = 0.0;
      for (long idx = k.row_offset[c]; idx < k.row_offset[c + 1]; ++idx) {
        const double p = k.prob[idx];
        const std::int32_t col = k.col[idx];
        q += p * q_prev[col];
        e += p * (q_prev[col] + e_prev[col]);  // one step consumed, then onward
      }
      q_next[c] = q;
      e_next[c] = e;
    }
    std::swap(q_prev, q_next);
    std::swap(e_prev, e_next);
  }

  std::vector<double> wait(n, 0.0);
#pragma omp parallel for if (parallel) num_threads(threads > 0 ? threads : omp_get_max_threads()) \
    schedule(static)
  for (long c = 0; c < n; ++c) {
    wait[c] = q_prev[c] > 0.0 ? std::min(cap_s, dt * e_prev[c] / q_prev[c]) : cap_s;
  }
  return wait;
}

}  // namespace

ValueIterationResult value_iterate(const WaitKernel& k, const MdpConfig& cfg, int threads) {
  return value_iterate_impl(k, cfg, threads, true);
}

ValueIterationResult value_iterate_serial(const WaitKernel& k, const MdpConfig& cfg) {
  return value_iterate_impl(k, cfg, 1, false);
}

std::vector<double> expected_wait_times(const WaitKernel& k, double dt, double cap_s, int threads) {
  return wait_times_impl(k, dt, cap_s, threads, true);
}

std::vector<double> expected_wait_times_serial(const WaitKernel& k, double dt, double cap_s) {
  return wait_times_impl(k, dt, cap_s, 1, false);
}

}  // namespace daa
