#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "daa/errors.hpp"
#include "daa/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace daa;

namespace {

// Exit codes: 0 success, 2 config, 3 I/O, 4 convergence, 5 validation.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitValidation = 5;

StateGrid grid_from_flag(const std::string& flag) {
  if (flag == "default") return StateGrid::defaults();
  if (flag == "reduced") return StateGrid::reduced();
  // Anything else is a JSON file with per-dimension {min, max, bins}.
  const auto j = nlohmann::json::parse(read_text_file(flag));
  StateGrid g;
  GridDim* slots[6] = {&g.dx, &g.dy, &g.dh, &g.vi, &g.vh, &g.theta};
  const char* names[6] = {"dx", "dy", "dh", "vi", "vh", "theta_i"};
  for (int i = 0; i < 6; ++i) {
    const auto& d = j.at(names[i]);
    slots[i]->min = d.at("min").get<double>();
    slots[i]->max = d.at("max").get<double>();
    slots[i]->bins = d.at("bins").get<int>();
  }
  g.validate();
  return g;
}

int cmd_build_map(const std::string& out_path, double gamma, double class_mix, double turn_bias,
                  const std::string& grid_flag, double tol, int max_sweeps, int threads) {
  StateGrid grid = grid_from_flag(grid_flag);
  IntruderMotionModel model = IntruderMotionModel::defaults();
  model.class_mix = class_mix;
  model.turn_bias_dps = turn_bias;
  MdpConfig cfg;
  cfg.gamma = gamma;
  cfg.convergence_tol = tol;
  cfg.max_sweeps = max_sweeps;
  cfg.validate();
  model.validate();

  std::cerr << "building wait map: " << grid.cell_count() << " cells, gamma " << gamma << ", class_mix "
            << class_mix << ", turn_bias " << turn_bias << " deg/s\n";
  const WaitMap map = build_wait_map(grid, model, cfg, threads);
  save_map(map, out_path);

  const WaitHistogram h = wait_histogram(map);
  std::cerr << "converged in " << map.vi_sweeps << " sweeps (residual " << map.vi_residual << ")\n";
  std::cerr << "wait times over " << h.included_cells << " waitable cells (" << h.excluded_cells
            << " already in violation): min " << h.min_s << " s, max " << h.max_s << " s, modal bin ["
            << h.mode_bin_lo << ", " << h.mode_bin_hi << ") s\n";
  std::cerr << "mean wait ahead (dx>0) " << h.mean_wait_dx_pos << " s, behind (dx<0) " << h.mean_wait_dx_neg
            << " s\n";
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

int cmd_gen_encounters(int count, std::uint64_t seed, const std::string& out_path) {
  const auto specs = sample_specs(seed, count);
  write_encounters_csv(out_path, specs);
  std::cerr << "wrote " << specs.size() << " encounters to " << out_path << "\n";
  return 0;
}

struct RunArgs {
  std::string group = "all";
  std::string encounters_path;
  std::string map_path;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 0;
  bool dump_traces = false;
};

int run_with_manifest(const RunManifest& manifest, const std::string& out_dir) {
  const auto specs = read_encounters_csv(manifest.encounters_path);
  std::optional<WaitMap> map;
  std::vector<GroupConfig> groups;
  bool needs_map = false;
  for (const auto& name : manifest.groups) {
    groups.push_back(group_preset(group_from_name(name)));
    needs_map = needs_map || groups.back().wait_source == WaitSourceKind::Map;
  }
  if (needs_map) {
    if (manifest.map_path.empty()) throw ConfigError("groups ID-1/ID-2 need --map");
    map = load_map(manifest.map_path);
  }

  fs::create_directories(out_dir);
  const int threads = manifest.threads > 0 ? manifest.threads : omp_get_max_threads();

  BatchReport report;
  report.tool_version = kToolVersion;
  report.base_seed = manifest.base_seed;
  report.encounters_hash = manifest.encounters_hash;
  report.rate_note =
      "rate_per_hr divides a per-step probability by total simulation hours; "
      "likelihood bands follow the standard per-flight-hour table";
  for (const auto& gc : groups) {
    std::cerr << "running group " << group_name(gc.group) << " over " << specs.size() << " encounters\n";
    GroupRun gr = run_group(specs, gc, manifest.params, map ? &*map : nullptr, threads,
                            manifest.dump_traces);
    report.groups.push_back(gr.report);
    if (manifest.dump_traces) {
      const fs::path dir = fs::path(out_dir) / "traces" / group_name(gc.group);
      fs::create_directories(dir);
      for (const auto& log : gr.logs) {
        write_trace_csv(log, (dir / ("enc_" + std::to_string(log.spec.seed) + ".csv")).string());
      }
    }
  }

  write_text_file((fs::path(out_dir) / "report.json").string(), batch_report_to_json(report));
  write_report_tables(report, (fs::path(out_dir) / "tables").string());
  write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest_to_json(manifest));
  std::cerr << "wrote " << (fs::path(out_dir) / "report.json").string() << "\n";
  return 0;
}

int cmd_run(const RunArgs& args) {
  RunManifest manifest;
  manifest.command = "run";
  manifest.base_seed = args.seed;
  manifest.threads = args.threads;
  manifest.dump_traces = args.dump_traces;
  manifest.encounters_path = args.encounters_path;
  manifest.encounters_hash = file_hash_hex(args.encounters_path);
  if (!args.map_path.empty()) {
    manifest.map_path = args.map_path;
    manifest.map_hash = file_hash_hex(args.map_path);
  }
  if (args.group == "all") {
    for (Group g : all_groups()) manifest.groups.push_back(group_name(g));
  } else {
    manifest.groups.push_back(group_name(group_from_name(args.group)));
  }
  manifest.params = args.config_path.empty() ? SimParams{}
                                             : sim_params_from_json(read_text_file(args.config_path));
  return run_with_manifest(manifest, args.out_dir);
}

int cmd_rerun(const std::string& manifest_path, const std::string& out_dir, int threads) {
  RunManifest manifest = manifest_from_json(read_text_file(manifest_path));
  if (file_hash_hex(manifest.encounters_path) != manifest.encounters_hash) {
    throw ValidationError("encounters file no longer matches the manifest hash");
  }
  if (!manifest.map_path.empty() && file_hash_hex(manifest.map_path) != manifest.map_hash) {
    throw ValidationError("wait map no longer matches the manifest hash");
  }
  if (threads > 0) manifest.threads = threads;
  return run_with_manifest(manifest, out_dir);
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& reference,
               const std::string& out_dir) {
  std::vector<BatchReport> reports;
  for (const auto& path : inputs) reports.push_back(batch_report_from_json(read_text_file(path)));
  std::size_t total_groups = 0;
  for (const auto& r : reports) total_groups += r.groups.size();
  if (total_groups < 2) throw ValidationError("report: need at least two group reports to compare");
  write_comparison_tables(reports, reference, out_dir);
  std::cerr << "wrote comparison tables to " << out_dir << "\n";
  return 0;
}

int cmd_print_config() {
  std::cout << sim_params_to_json(SimParams{});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDP wait maps and control-allocation encounter simulation"};
  app.require_subcommand(1);

  // build-map
  auto* build = app.add_subcommand("build-map", "Solve the MDP and write a wait map");
  std::string bm_out;
  double bm_gamma = 0.95, bm_mix = 0.5, bm_bias = 0.0, bm_tol = 1e-6;
  int bm_sweeps = 1000, bm_threads = 0;
  std::string bm_grid = "default";
  build->add_option("--out", bm_out, "Output wait-map path")->required();
  build->add_option("--gamma", bm_gamma, "Discount factor (must be < 1)");
  build->add_option("--class-mix", bm_mix, "Probability of the horizontal maneuver class");
  build->add_option("--turn-bias", bm_bias, "Deterministic turn-rate bias, deg/s");
  build->add_option("--grid", bm_grid, "Grid preset (default|reduced) or JSON file");
  build->add_option("--tol", bm_tol, "Value-iteration convergence tolerance");
  build->add_option("--max-sweeps", bm_sweeps, "Value-iteration sweep cap");
  build->add_option("--threads", bm_threads, "Worker threads (0 = all)");

  // gen-encounters
  auto* gen = app.add_subcommand("gen-encounters", "Sample encounter scenarios to CSV");
  int ge_count = 0;
  std::uint64_t ge_seed = 1;
  std::string ge_out;
  gen->add_option("--count", ge_count, "Number of encounters")->required();
  gen->add_option("--seed", ge_seed, "Base seed (encounter i uses seed+i)");
  gen->add_option("--out", ge_out, "Output CSV path")->required();

  // run
  auto* run = app.add_subcommand("run", "Run experiment groups over an encounter set");
  RunArgs ra;
  std::string run_manifest;
  run->add_option("--group", ra.group, "B-1|B-2|IC-1|ID-1|ID-2|all");
  run->add_option("--encounters", ra.encounters_path, "Encounters CSV");
  run->add_option("--map", ra.map_path, "Wait-map file (required for ID groups)");
  run->add_option("--config", ra.config_path, "Simulation config JSON (defaults otherwise)");
  run->add_option("--seed", ra.seed, "Base seed recorded in the manifest");
  run->add_option("--threads", ra.threads, "Worker threads (0 = all)");
  run->add_option("--out", ra.out_dir, "Output directory");
  run->add_flag("--dump-traces", ra.dump_traces, "Write one CSV trace per encounter");
  run->add_option("--from-manifest", run_manifest, "Re-run exactly as recorded in a manifest");

  // report
  auto* rep = app.add_subcommand("report", "Merge group reports into comparison tables");
  std::vector<std::string> rp_inputs;
  std::string rp_reference = "B-2", rp_out = ".";
  rep->add_option("--inputs", rp_inputs, "report.json files")->required();
  rep->add_option("--reference", rp_reference, "Reference group for percent columns");
  rep->add_option("--out", rp_out, "Output directory");

  auto* pc = app.add_subcommand("print-config", "Emit the fully resolved default config JSON");
  (void)pc;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (build->parsed()) {
      return cmd_build_map(bm_out, bm_gamma, bm_mix, bm_bias, bm_grid, bm_tol, bm_sweeps, bm_threads);
    }
    if (gen->parsed()) {
      if (ge_count < 0) throw ConfigError("--count must be non-negative");
      return cmd_gen_encounters(ge_count, ge_seed, ge_out);
    }
    if (run->parsed()) {
      if (!run_manifest.empty()) return cmd_rerun(run_manifest, ra.out_dir, ra.threads);
      if (ra.encounters_path.empty()) throw ConfigError("run: --encounters is required");
      return cmd_run(ra);
    }
    if (rep->parsed()) return cmd_report(rp_inputs, rp_reference, rp_out);
    if (pc->parsed()) return cmd_print_config();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
