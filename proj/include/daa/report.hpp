#pragma once

#include <string>
#include <vector>

#include "daa/sim.hpp"

namespace daa {

inline constexpr const char* kToolVersion = "0.1.0";

std::string file_hash_hex(const std::string& path);  // FNV-1a over raw bytes

std::string sim_params_to_json(const SimParams& params);
SimParams sim_params_from_json(const std::string& text);

std::string batch_report_to_json(const BatchReport& report);
BatchReport batch_report_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Five CSV tables per report: waiting status, pilot command reception,
/// command execution, risk per flight hour, trajectory deviation.
void write_report_tables(const BatchReport& report, const std::string& out_dir);

/// Merged comparison tables: percent reduction in DAA allocations and
/// percent increment in receptions relative to the reference group.
/// Throws ValidationError when reports disagree on the encounter set.
void write_comparison_tables(const std::vector<BatchReport>& reports, const std::string& reference_group,
                             const std::string& out_dir);

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::uint64_t base_seed = 0;
  int threads = 0;
  std::vector<std::string> groups;
  std::string encounters_path;
  std::string encounters_hash;
  std::string map_path;  // empty when no map is involved
  std::string map_hash;
  bool dump_traces = false;
  SimParams params;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

/// Per-encounter CSV trace, one file per encounter.
void write_trace_csv(const EncounterLog& log, const std::string& path);

}  // namespace daa
