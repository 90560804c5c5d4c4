#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fras/runspec.hpp"

int main(int argc, char** argv) {
  CLI::App app{"funnel-ras: reach-avoid-stay controller synthesis and simulation"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = "out";
  std::string traj_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double dt = 0.0;
  bool dt_set = false;
  double horizon = 0.0;
  bool horizon_set = false;
  bool parallel = false;

  auto add_common = [&](CLI::App* sub, bool with_traj) {
    sub->add_option("--spec", spec_path, "problem spec (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the synthesis seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--dt", dt, "override the integration step")
        ->each([&](const std::string&) { dt_set = true; });
    sub->add_option("--horizon", horizon, "override the simulation horizon")
        ->each([&](const std::string&) { horizon_set = true; });
    sub->add_flag("--parallel", parallel, "run initial states in parallel");
    if (with_traj) {
      sub->add_option("--traj", traj_path, "trajectory file to validate")->required();
    }
  };

  CLI::App* reach = app.add_subcommand("reach", "funnel-only run, obstacles not honored");
  CLI::App* ras = app.add_subcommand("ras", "full reach-avoid-stay synthesis");
  CLI::App* check = app.add_subcommand("check", "re-validate a trajectory file");
  add_common(reach, false);
  add_common(ras, false);
  add_common(check, true);

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    fras::RunSpec spec = fras::load_runspec(spec_path);
    fras::CliOverrides overrides;
    if (seed_set) overrides.seed = seed;
    if (dt_set) overrides.h = dt;
    if (horizon_set) overrides.horizon = horizon;
    overrides.parallel = parallel;
    overrides.trajectory_path = traj_path;
    return fras::cmd_run(spec, sub, out_dir, overrides);
  } catch (const fras::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.kind(), e.what());
    try {
      fras::write_error_json(out_dir + "/error.json", e.kind(), e.what());
    } catch (...) {
    }
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
