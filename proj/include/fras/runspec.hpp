#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fras/synthesis.hpp"

namespace fras {

/* A problem instance plus every numeric knob, loaded from a JSON file.
 * Omitted optional fields receive the documented defaults; environment
 * invariants are re-checked on load, before any numerics run. */
struct RunSpec {
  Environment env;
  std::string plant_name;
  SynthesisParams params;
  std::vector<Vec> initial_states;
};

RunSpec load_runspec(const std::string& path);
RunSpec parse_runspec(const std::string& json_text, const std::string& origin = "<string>");

/* Comma-separated trajectory exchange format: header row
 *   t,x_1..x_n,u_1..u_m,gammaL_1..n,gammaU_1..n,alpha_1..n
 * then one row per sample, every number with 17 significant digits so
 * 64-bit values round-trip exactly. */
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

void write_report_json(const std::string& path, const RunReport& report,
                       const std::vector<ChoiceLogEntry>& choices, int iterations_used,
                       const Trajectory& traj);
/* gammaL/gammaU tube samples only. */
void write_envelope_csv(const std::string& path, const Trajectory& traj);
/* Labeled series (trajectory, funnel tube, obstacle outlines, boxes) for
 * external plotting. */
void write_plot_json(const std::string& path, const Trajectory& traj, const Environment& env);
void write_error_json(const std::string& path, const std::string& kind,
                      const std::string& message);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::optional<double> horizon;
  bool parallel = false;
  std::string trajectory_path;  // for the check command
};

/* Deterministic per-run seed for the i-th initial state. */
std::uint64_t run_seed(std::uint64_t base_seed, size_t index);

/* reach: funnel-only run per initial state, obstacles not honored.
 * ras:   full synthesis loop per initial state.
 * check: re-validate an existing trajectory file against the environment.
 * Returns the process exit status (0 iff everything is clean). */
int cmd_run(const RunSpec& spec, const std::string& subcommand, const std::string& out_dir,
            const CliOverrides& overrides);

}  // namespace fras
