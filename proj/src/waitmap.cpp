#include "daa/waitmap.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>

#include "daa/errors.hpp"
#include "json.hpp"

namespace daa {

namespace {

using nlohmann::json;

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Fnv1a {
 public:
  void feed(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void feed(double x) { feed(&x, sizeof x); }
  void feed(const std::string& s) { feed(s.data(), s.size()); }
  void feed(std::int64_t x) { feed(&x, sizeof x); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash_);
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

void feed_rows(Fnv1a& h, const std::vector<MotionRow>& rows) {
  h.feed(static_cast<std::int64_t>(rows.size()));
  for (const auto& r : rows) {
    h.feed(r.value);
    h.feed(r.p);
  }
}

json dims_json(const StateGrid& g) {
  json dims = json::array();
  for (const GridDim* d : {&g.dx, &g.dy, &g.dh, &g.vi, &g.vh, &g.theta}) {
    dims.push_back({{"name", d->name}, {"min", d->min}, {"max", d->max}, {"bins", d->bins}});
  }
  return dims;
}

json rows_json(const std::vector<MotionRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back({r.value, r.p});
  return a;
}

std::vector<MotionRow> rows_from_json(const json& a) {
  std::vector<MotionRow> rows;
  for (const auto& e : a) rows.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return rows;
}

}  // namespace

std::string content_hash(const WaitMap& map) {
  Fnv1a h;
  for (const GridDim* d : {&map.grid.dx, &map.grid.dy, &map.grid.dh, &map.grid.vi, &map.grid.vh,
                           &map.grid.theta}) {
    h.feed(d->name);
    h.feed(d->min);
    h.feed(d->max);
    h.feed(static_cast<std::int64_t>(d->bins));
  }
  feed_rows(h, map.model.vertical_rows);
  feed_rows(h, map.model.horizontal_speed_rows);
  feed_rows(h, map.model.turn_rows);
  h.feed(map.model.class_mix);
  h.feed(map.model.turn_bias_dps);
  for (double x : {map.config.gamma, map.config.c1, map.config.c2, map.config.c3, map.config.dt,
                   map.config.ownship.v, map.config.ownship.heading, map.config.ownship.vz,
                   map.config.convergence_tol, map.config.wait_horizon_cap_s, map.config.reward_floor_m}) {
    h.feed(x);
  }
  h.feed(static_cast<std::int64_t>(map.config.max_sweeps));
  h.feed(map.action.data(), map.action.size() * sizeof(CellAction));
  h.feed(map.wait_time_s.data(), map.wait_time_s.size() * sizeof(double));
  h.feed(map.value.data(), map.value.size() * sizeof(double));
  return h.hex();
}

WaitMap build_wait_map(const StateGrid& grid, const IntruderMotionModel& model, const MdpConfig& cfg,
                       int threads) {
  const WaitKernel kernel = build_wait_kernel(grid, model, cfg, threads);
  ValueIterationResult vi = value_iterate(kernel, cfg, threads);
  if (!vi.converged) {
    throw ConvergenceError("value iteration did not reach tol " + std::to_string(cfg.convergence_tol) +
                           " within " + std::to_string(cfg.max_sweeps) +
                           " sweeps (residual " + std::to_string(vi.residual) + ")");
  }
  WaitMap map;
  map.grid = grid;
  map.model = model;
  map.config = cfg;
  map.value = std::move(vi.value);
  map.action = std::move(vi.action);
  const WaitKernel time_kernel = build_wait_time_kernel(grid, model, cfg, threads);
  map.wait_time_s = expected_wait_times(time_kernel, cfg.dt, cfg.wait_horizon_cap_s, threads);
  map.vi_sweeps = vi.sweeps;
  map.vi_residual = vi.residual;
  map.build_timestamp = iso_timestamp();
  return map;
}

MapLookup lookup(const WaitMap& map, const RelativeState& s) {
  if (s.tag != StateTag::Normal) throw ValidationError("lookup: only normal states can be looked up");
  if (map.grid.outside_horizontal(s) && range_rate(s, map.config.ownship) > 0.0) {
    return {CellAction::Wait, map.config.wait_horizon_cap_s};
  }
  const long cell = map.grid.snap_cell(s);
  return {map.action[cell], map.wait_time_s[cell]};
}

void save_map(const WaitMap& map, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["grid"] = {{"dims", dims_json(map.grid)}};
  j["motion_model"] = {{"vertical_rows", rows_json(map.model.vertical_rows)},
                       {"horizontal_speed_rows", rows_json(map.model.horizontal_speed_rows)},
                       {"turn_rows", rows_json(map.model.turn_rows)},
                       {"class_mix", map.model.class_mix},
                       {"turn_bias_dps", map.model.turn_bias_dps}};
  j["config"] = {{"gamma", map.config.gamma},
                 {"c1", map.config.c1},
                 {"c2", map.config.c2},
                 {"c3", map.config.c3},
                 {"dt", map.config.dt},
                 {"class_mix", map.model.class_mix},
                 {"turn_bias", map.model.turn_bias_dps},
                 {"ownship", {{"v", map.config.ownship.v}, {"heading", map.config.ownship.heading}, {"vz", map.config.ownship.vz}}},
                 {"convergence_tol", map.config.convergence_tol},
                 {"max_sweeps", map.config.max_sweeps},
                 {"wait_horizon_cap_s", map.config.wait_horizon_cap_s},
                 {"reward_floor_m", map.config.reward_floor_m},
                 {"thresholds",
                  {{"hmd_star_m", map.config.thresholds.hmd_star_m},
                   {"dh_star_m", map.config.thresholds.dh_star_m},
                   {"tau_mod_star_s", map.config.thresholds.tau_mod_star_s},
                   {"nmac_r_ft", map.config.thresholds.nmac_r_ft},
                   {"nmac_h_ft", map.config.thresholds.nmac_h_ft},
                   {"dmod_m", map.config.thresholds.dmod_m}}}};
  j["build"] = {{"sweeps", map.vi_sweeps}, {"residual", map.vi_residual}, {"timestamp", map.build_timestamp}};
  json actions = json::array();
  for (CellAction a : map.action) actions.push_back(static_cast<int>(a));
  j["arrays"] = {{"action", std::move(actions)}, {"wait_time_s", map.wait_time_s}, {"value", map.value}};
  j["content_hash"] = content_hash(map);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump();
  out.put('\n');
  if (!out) throw IoError("failed while writing '" + path + "'");
}

WaitMap load_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wait map '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MapCorruptError("wait map '" + path + "' is not parseable: " + e.what());
  }

  WaitMap map;
  try {
    const int version = j.at("format_version").get<int>();
    if (version != 1) throw MapVersionError("wait map '" + path + "' has unsupported format_version");

    const auto& dims = j.at("grid").at("dims");
    if (dims.size() != 6) throw MapDimensionError("wait map '" + path + "' must have six dimensions");
    GridDim* slots[6] = {&map.grid.dx, &map.grid.dy, &map.grid.dh, &map.grid.vi, &map.grid.vh,
                         &map.grid.theta};
    for (int i = 0; i < 6; ++i) {
      slots[i]->name = dims[i].at("name").get<std::string>();
      slots[i]->min = dims[i].at("min").get<double>();
      slots[i]->max = dims[i].at("max").get<double>();
      slots[i]->bins = dims[i].at("bins").get<int>();
    }
    map.grid.validate();

    const auto& mm = j.at("motion_model");
    map.model.vertical_rows = rows_from_json(mm.at("vertical_rows"));
    map.model.horizontal_speed_rows = rows_from_json(mm.at("horizontal_speed_rows"));
    map.model.turn_rows = rows_from_json(mm.at("turn_rows"));
    map.model.class_mix = mm.at("class_mix").get<double>();
    map.model.turn_bias_dps = mm.at("turn_bias_dps").get<double>();

    const auto& cfg = j.at("config");
    map.config.gamma = cfg.at("gamma").get<double>();
    map.config.c1 = cfg.at("c1").get<double>();
    map.config.c2 = cfg.at("c2").get<double>();
    map.config.c3 = cfg.at("c3").get<double>();
    map.config.dt = cfg.at("dt").get<double>();
    map.config.ownship.v = cfg.at("ownship").at("v").get<double>();
    map.config.ownship.heading = cfg.at("ownship").at("heading").get<double>();
    map.config.ownship.vz = cfg.at("ownship").at("vz").get<double>();
    map.config.convergence_tol = cfg.at("convergence_tol").get<double>();
    map.config.max_sweeps = cfg.at("max_sweeps").get<int>();
    map.config.wait_horizon_cap_s = cfg.at("wait_horizon_cap_s").get<double>();
    map.config.reward_floor_m = cfg.at("reward_floor_m").get<double>();
    const auto& th = cfg.at("thresholds");
    map.config.thresholds.hmd_star_m = th.at("hmd_star_m").get<double>();
    map.config.thresholds.dh_star_m = th.at("dh_star_m").get<double>();
    map.config.thresholds.tau_mod_star_s = th.at("tau_mod_star_s").get<double>();
    map.config.thresholds.nmac_r_ft = th.at("nmac_r_ft").get<double>();
    map.config.thresholds.nmac_h_ft = th.at("nmac_h_ft").get<double>();
    map.config.thresholds.dmod_m = th.at("dmod_m").get<double>();

    const auto& build = j.at("build");
    map.vi_sweeps = build.at("sweeps").get<int>();
    map.vi_residual = build.at("residual").get<double>();
    map.build_timestamp = build.at("timestamp").get<std::string>();

    const auto& arrays = j.at("arrays");
    for (const auto& a : arrays.at("action")) map.action.push_back(static_cast<CellAction>(a.get<int>()));
    arrays.at("wait_time_s").get_to(map.wait_time_s);
    arrays.at("value").get_to(map.value);
  } catch (const MapVersionError&) {
    throw;
  } catch (const MapDimensionError&) {
    throw;
  } catch (const json::exception& e) {
    throw MapCorruptError("wait map '" + path + "' is missing fields: " + e.what());
  }

  const std::size_t expected = static_cast<std::size_t>(map.grid.cell_count());
  if (map.action.size() != expected || map.wait_time_s.size() != expected || map.value.size() != expected) {
    throw MapDimensionError("wait map '" + path + "' arrays do not match the declared grid dimensions");
  }
  const std::string stored = j.at("content_hash").get<std::string>();
  if (stored != content_hash(map)) {
    throw MapCorruptError("wait map '" + path + "' failed its content hash check");
  }
  return map;
}

WaitHistogram wait_histogram(const WaitMap& map, double bin_width_s) {
  WaitHistogram h;
  h.min_s = std::numeric_limits<double>::infinity();
  h.max_s = -std::numeric_limits<double>::infinity();
  double sum_pos = 0.0, sum_neg = 0.0;
  long n_pos = 0, n_neg = 0;
  const long n = map.grid.cell_count();
  for (long c = 0; c < n; ++c) {
    const double w = map.wait_time_s[c];
    const RelativeState center = map.grid.center_state(c);
    if (center.dx > 0.0) {
      sum_pos += w;
      ++n_pos;
    } else if (center.dx < 0.0) {
      sum_neg += w;
      ++n_neg;
    }
    // The histogram covers measured waits only: cells already in violation
    // are not waitable, and horizon-cap cells carry a sentinel rather than
    // a path average.
    if (is_lowc(center, map.config.ownship, map.config.thresholds) ||
        w >= map.config.wait_horizon_cap_s) {
      ++h.excluded_cells;
      continue;
    }
    ++h.included_cells;
    h.min_s = std::min(h.min_s, w);
    h.max_s = std::max(h.max_s, w);
    const auto bin = static_cast<std::size_t>(std::floor(w / bin_width_s));
    if (h.counts.size() <= bin) h.counts.resize(bin + 1, 0);
    ++h.counts[bin];
  }
  std::size_t mode = 0;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    if (h.counts[b] > h.counts[mode]) mode = b;
  }
  h.mode_bin_lo = static_cast<double>(mode) * bin_width_s;
  h.mode_bin_hi = h.mode_bin_lo + bin_width_s;
  h.mean_wait_dx_pos = n_pos > 0 ? sum_pos / n_pos : 0.0;
  h.mean_wait_dx_neg = n_neg > 0 ? sum_neg / n_neg : 0.0;
  return h;
}

}  // namespace daa
