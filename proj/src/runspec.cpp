#include "fras/runspec.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fras/plant.hpp"

namespace fras {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

const json& require_field(const json& j, const char* key, const std::string& origin) {
  auto it = j.find(key);
  if (it == j.end()) parse_fail(origin, std::string("missing required field '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& origin, const char* what) {
  if (!j.is_number()) parse_fail(origin, std::string(what) + " must be a number");
  return j.get<double>();
}

Vec as_vector(const json& j, const std::string& origin, const char* what) {
  if (!j.is_array()) parse_fail(origin, std::string(what) + " must be an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_number(j[i], origin, what);
  return v;
}

/* Scalar broadcasts to all dimensions; array must match n. */
Vec as_broadcast(const json& j, int n, const std::string& origin, const char* what) {
  if (j.is_number()) return Vec::Constant(n, j.get<double>());
  Vec v = as_vector(j, origin, what);
  if (v.size() != n) parse_fail(origin, std::string(what) + " has wrong length");
  return v;
}

HyperRectangle as_box(const json& j, const std::string& origin, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(origin, std::string(what) + " must be a non-empty array of [lo, hi] pairs");
  std::vector<Interval> ivs;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      parse_fail(origin, std::string(what) + " entries must be [lo, hi] pairs");
    }
    ivs.emplace_back(as_number(pair[0], origin, what), as_number(pair[1], origin, what));
  }
  return HyperRectangle(std::move(ivs));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << text;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json violations_json(const std::vector<Violation>& vs, const char* index_name) {
  json arr = json::array();
  for (const auto& v : vs) arr.push_back({{index_name, v.index}, {"time", v.time}});
  return arr;
}

}  // namespace

RunSpec parse_runspec(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    parse_fail(origin, e.what());
  }
  if (!j.is_object()) parse_fail(origin, "top level must be an object");

  HyperRectangle state_space = as_box(require_field(j, "state_space", origin), origin, "state_space");
  const int n = state_space.dim();
  HyperRectangle target = as_box(require_field(j, "target", origin), origin, "target");
  if (target.dim() != n) parse_fail(origin, "target dimension differs from state_space");

  std::vector<ObstacleShape> obstacles;
  if (j.contains("obstacles")) {
    const json& obs = j["obstacles"];
    if (!obs.is_array()) parse_fail(origin, "obstacles must be an array");
    for (const auto& o : obs) {
      const std::string type = require_field(o, "type", origin).get<std::string>();
      if (type == "rect") {
        obstacles.push_back(ObstacleShape::rect(as_box(require_field(o, "bounds", origin), origin, "obstacle bounds")));
      } else if (type == "ball") {
        obstacles.push_back(ObstacleShape::ball(
            as_vector(require_field(o, "center", origin), origin, "ball center"),
            as_number(require_field(o, "radius", origin), origin, "ball radius")));
      } else {
        parse_fail(origin, "unknown obstacle type '" + type + "'");
      }
    }
  }

  Environment env(std::move(state_space), std::move(target), std::move(obstacles));

  std::string plant_name = "single_integrator_" + std::to_string(n) + "d";
  if (j.contains("plant")) plant_name = j["plant"].get<std::string>();
  const Plant plant = plant_by_name(plant_name);
  if (plant.n != n) {
    parse_fail(origin, "plant '" + plant_name + "' has state dimension " +
                           std::to_string(plant.n) + ", environment has " + std::to_string(n));
  }

  SynthesisParams p;
  p.decay = Vec::Constant(n, 0.7);
  p.rho_inf = Vec::Constant(n, 0.05);
  if (j.contains("funnel")) {
    const json& f = j["funnel"];
    if (f.contains("l")) p.decay = as_broadcast(f["l"], n, origin, "funnel.l");
    if (f.contains("rho_inf")) p.rho_inf = as_broadcast(f["rho_inf"], n, origin, "funnel.rho_inf");
  }
  if (j.contains("eta")) {
    p.eta = as_vector(j["eta"], origin, "eta");
    if (p.eta.size() != n) parse_fail(origin, "eta has wrong length");
  }
  if (j.contains("circumvent")) {
    const json& c = j["circumvent"];
    if (c.contains("delta_t")) p.delta_t = as_number(c["delta_t"], origin, "circumvent.delta_t");
    if (c.contains("delta_B")) p.delta_B = as_number(c["delta_B"], origin, "circumvent.delta_B");
    if (c.contains("k")) p.k_bump = as_number(c["k"], origin, "circumvent.k");
  }
  p.adaptive.mu = 10.0;
  p.adaptive.kappa = 0.3;
  p.adaptive.theta0 = 0.1;
  p.adaptive.nu = default_nu(env);
  bool s_given = false;
  if (j.contains("adaptive")) {
    const json& a = j["adaptive"];
    if (a.contains("mu")) p.adaptive.mu = as_number(a["mu"], origin, "adaptive.mu");
    if (a.contains("kappa")) p.adaptive.kappa = as_number(a["kappa"], origin, "adaptive.kappa");
    if (a.contains("theta0")) p.adaptive.theta0 = as_number(a["theta0"], origin, "adaptive.theta0");
    if (a.contains("nu")) p.adaptive.nu = as_number(a["nu"], origin, "adaptive.nu");
    if (a.contains("s")) {
      p.adaptive.s = as_number(a["s"], origin, "adaptive.s");
      s_given = true;
    }
  }
  if (!s_given) p.adaptive.s = default_trigger_slope(p.adaptive.mu);
  if (j.contains("gain")) {
    const json& g = j["gain"];
    if (g.contains("k")) p.gain.k = as_number(g["k"], origin, "gain.k");
    if (g.contains("xi_variant")) {
      const std::string v = g["xi_variant"].get<std::string>();
      if (v == "elementwise") {
        p.gain.xi_variant = XiVariant::Elementwise;
      } else if (v == "scalar") {
        p.gain.xi_variant = XiVariant::Scalar;
      } else {
        parse_fail(origin, "gain.xi_variant must be 'elementwise' or 'scalar'");
      }
    }
  }
  if (j.contains("sim")) {
    const json& s = j["sim"];
    if (s.contains("h")) p.sim.h = as_number(s["h"], origin, "sim.h");
    if (s.contains("horizon")) p.sim.horizon = as_number(s["horizon"], origin, "sim.horizon");
    if (s.contains("record_every")) p.sim.record_every = s["record_every"].get<int>();
    if (s.contains("stop_on_reach")) p.sim.stop_on_reach = s["stop_on_reach"].get<bool>();
    if (s.contains("substepping")) p.sim.stiff_substepping = s["substepping"].get<bool>();
  }
  if (j.contains("synthesis")) {
    const json& s = j["synthesis"];
    if (s.contains("max_iterations")) p.max_iterations = s["max_iterations"].get<int>();
    if (s.contains("seed")) p.seed = s["seed"].get<std::uint64_t>();
  }
  p.validate();

  std::vector<Vec> initial_states;
  const json& xs = require_field(j, "initial_states", origin);
  if (!xs.is_array() || xs.empty()) parse_fail(origin, "initial_states must be a non-empty array");
  for (const auto& x : xs) {
    Vec v = as_vector(x, origin, "initial state");
    if (v.size() != n) parse_fail(origin, "initial state has wrong length");
    initial_states.push_back(std::move(v));
  }

  return RunSpec{std::move(env), std::move(plant_name), std::move(p), std::move(initial_states)};
}

RunSpec load_runspec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open spec file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_runspec(buf.str(), path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  const int n = traj.state_dim();
  const int m = traj.input_dim();
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int i = 1; i <= m; ++i) out << ",u_" << i;
  for (int i = 1; i <= n; ++i) out << ",gammaL_" << i;
  for (int i = 1; i <= n; ++i) out << ",gammaU_" << i;
  for (int i = 1; i <= n; ++i) out << ",alpha_" << i;
  out << "\n";
  for (Eigen::Index r = 0; r < traj.samples(); ++r) {
    out << fmt17(traj.t[r]);
    for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.x(r, i));
    for (int i = 0; i < m; ++i) out << ',' << fmt17(traj.u(r, i));
    for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.gamma_lo(r, i));
    for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.gamma_hi(r, i));
    for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.alpha(r, i));
    out << "\n";
  }
  write_text(path, out.str());
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open trajectory file " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError(path + ": empty trajectory file");

  int n = 0;
  int m = 0;
  {
    std::stringstream hs(header);
    std::string name;
    std::vector<std::string> names;
    while (std::getline(hs, name, ',')) names.push_back(name);
    if (names.empty() || names[0] != "t") throw ParseError(path + ": first column must be t");
    for (const auto& c : names) {
      if (c.rfind("x_", 0) == 0) ++n;
      if (c.rfind("u_", 0) == 0) ++m;
    }
    if (n < 1) throw ParseError(path + ": no state columns found");
    if (static_cast<int>(names.size()) != 1 + n + m + 3 * n) {
      throw ParseError(path + ": column count does not match t, x, u, gammaL, gammaU, alpha");
    }
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  const size_t n_cols = static_cast<size_t>(1 + n + m + 3 * n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(n_cols);
    const char* p = line.c_str();
    char* end = nullptr;
    while (true) {
      const double v = std::strtod(p, &end);
      if (end == p) throw ParseError(path + ": malformed number in row " + std::to_string(rows.size() + 1));
      row.push_back(v);
      p = end;
      if (*p == ',') {
        ++p;
      } else {
        break;
      }
    }
    if (row.size() != n_cols) {
      throw ParseError(path + ": row " + std::to_string(rows.size() + 1) + " has " +
                       std::to_string(row.size()) + " fields, expected " + std::to_string(n_cols));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no samples");

  Trajectory traj;
  const auto N = static_cast<Eigen::Index>(rows.size());
  traj.t.resize(N);
  traj.x.resize(N, n);
  traj.u.resize(N, m);
  traj.gamma_lo.resize(N, n);
  traj.gamma_hi.resize(N, n);
  traj.alpha.resize(N, n);
  for (Eigen::Index r = 0; r < N; ++r) {
    const auto& row = rows[static_cast<size_t>(r)];
    size_t c = 0;
    traj.t[r] = row[c++];
    for (int i = 0; i < n; ++i) traj.x(r, i) = row[c++];
    for (int i = 0; i < m; ++i) traj.u(r, i) = row[c++];
    for (int i = 0; i < n; ++i) traj.gamma_lo(r, i) = row[c++];
    for (int i = 0; i < n; ++i) traj.gamma_hi(r, i) = row[c++];
    for (int i = 0; i < n; ++i) traj.alpha(r, i) = row[c++];
  }
  if (N >= 2) {
    traj.step = traj.t[1] - traj.t[0];
    for (Eigen::Index r = 1; r < N; ++r) {
      if (std::abs(traj.t[r] - traj.t[r - 1] - traj.step) > 1e-9 * std::max(1.0, std::abs(traj.t[r]))) {
        throw ParseError(path + ": sample times are not uniformly spaced");
      }
    }
  }
  return traj;
}

namespace {

json report_to_json(const RunReport& report) {
  json j;
  j["accepted"] = report.accepted();
  j["reached_target_at"] =
      report.reached_target_at ? json(*report.reached_target_at) : json(nullptr);
  j["obstacle_violations"] = violations_json(report.obstacle_violations, "obstacle");
  j["funnel_violations"] = violations_json(report.funnel_violations, "dimension");
  j["state_space_violations"] = violations_json(report.state_space_violations, "dimension");
  j["peak_control_norm"] = report.peak_control_norm;
  j["peak_alpha"] = std::vector<double>(report.peak_alpha.begin(), report.peak_alpha.end());
  j["min_psi_plus_alpha"] = std::isfinite(report.min_psi_plus_alpha)
                                ? json(report.min_psi_plus_alpha)
                                : json(nullptr);
  j["dual_side_dims"] = report.dual_side_dims;
  j["aborted_at"] = report.aborted_at ? json(*report.aborted_at) : json(nullptr);
  j["abort_kind"] = report.abort_kind;
  j["abort_message"] = report.abort_message;
  return j;
}

}  // namespace

void write_report_json(const std::string& path, const RunReport& report,
                       const std::vector<ChoiceLogEntry>& choices, int iterations_used,
                       const Trajectory& traj) {
  json j = report_to_json(report);
  j["iterations_used"] = iterations_used;
  json cs = json::array();
  for (const auto& c : choices) {
    cs.push_back({{"obstacle", c.obstacle},
                  {"dimension", c.dim},
                  {"side", side_name(c.side)},
                  {"widened", c.widened},
                  {"window", {c.window_lo, c.window_hi}}});
  }
  j["choices"] = cs;
  j["metadata"] = {{"plant", traj.plant_label},
                   {"seed", traj.seed},
                   {"samples", traj.samples()},
                   {"step", traj.step}};
  write_text(path, j.dump(2) + "\n");
}

void write_envelope_csv(const std::string& path, const Trajectory& traj) {
  const int n = traj.state_dim();
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",gammaL_" << i;
  for (int i = 1; i <= n; ++i) out << ",gammaU_" << i;
  out << "\n";
  for (Eigen::Index r = 0; r < traj.samples(); ++r) {
    out << fmt17(traj.t[r]);
    for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.gamma_lo(r, i));
    for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.gamma_hi(r, i));
    out << "\n";
  }
  write_text(path, out.str());
}

void write_plot_json(const std::string& path, const Trajectory& traj, const Environment& env) {
  const int n = traj.state_dim();
  json j;
  j["time"] = std::vector<double>(traj.t.begin(), traj.t.end());
  auto cols = [&](const SampleMatrix& mat) {
    json outer = json::array();
    for (int i = 0; i < static_cast<int>(mat.cols()); ++i) {
      std::vector<double> col(static_cast<size_t>(mat.rows()));
      for (Eigen::Index r = 0; r < mat.rows(); ++r) col[static_cast<size_t>(r)] = mat(r, i);
      outer.push_back(col);
    }
    return outer;
  };
  j["state"] = cols(traj.x);
  j["control"] = cols(traj.u);
  j["gamma_lo"] = cols(traj.gamma_lo);
  j["gamma_hi"] = cols(traj.gamma_hi);
  j["alpha"] = cols(traj.alpha);
  auto box_json = [](const HyperRectangle& b) {
    const Vec lo = b.lower();
    const Vec hi = b.upper();
    json o;
    o["lo"] = std::vector<double>(lo.begin(), lo.end());
    o["hi"] = std::vector<double>(hi.begin(), hi.end());
    return o;
  };
  j["state_space"] = box_json(env.state_space);
  j["target"] = box_json(env.target);
  json obs = json::array();
  for (const auto& o : env.obstacles) {
    if (o.is_rect()) {
      json e = box_json(o.as_rect());
      e["type"] = "rect";
      obs.push_back(e);
    } else {
      const Ball& b = o.as_ball();
      obs.push_back({{"type", "ball"},
                     {"center", std::vector<double>(b.center.begin(), b.center.end())},
                     {"radius", b.radius}});
    }
  }
  j["obstacles"] = obs;
  (void)n;
  write_text(path, j.dump(2) + "\n");
}

void write_error_json(const std::string& path, const std::string& kind,
                      const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  write_text(path, j.dump(2) + "\n");
}

std::uint64_t run_seed(std::uint64_t base_seed, size_t index) {
  std::uint64_t x = base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

struct RunArtifacts {
  Trajectory trajectory;
  RunReport report;
  std::vector<ChoiceLogEntry> choices;
  int iterations = 0;
  bool ok = false;
  std::string error_kind;
  std::string error_message;
};

void export_run(const std::string& out_dir, size_t idx, const RunArtifacts& art,
                const Environment& env) {
  const std::string stem = out_dir + "/";
  const std::string suffix = std::to_string(idx);
  if (!art.ok) {
    write_error_json(stem + "error_" + suffix + ".json", art.error_kind, art.error_message);
    return;
  }
  write_trajectory_csv(stem + "trajectory_" + suffix + ".csv", art.trajectory);
  write_report_json(stem + "report_" + suffix + ".json", art.report, art.choices, art.iterations,
                    art.trajectory);
  write_envelope_csv(stem + "envelope_" + suffix + ".csv", art.trajectory);
  write_plot_json(stem + "plot_" + suffix + ".json", art.trajectory, env);
}

}  // namespace

int cmd_run(const RunSpec& spec, const std::string& subcommand, const std::string& out_dir,
            const CliOverrides& overrides) {
  std::filesystem::create_directories(out_dir);

  SynthesisParams params = spec.params;
  if (overrides.seed) params.seed = *overrides.seed;
  if (overrides.h) params.sim.h = *overrides.h;
  if (overrides.horizon) params.sim.horizon = *overrides.horizon;
  params.validate();
  const Plant plant = plant_by_name(spec.plant_name);

  if (subcommand == "check") {
    if (overrides.trajectory_path.empty()) {
      throw ParameterError("check needs --traj <trajectory.csv>");
    }
    Trajectory traj = read_trajectory_csv(overrides.trajectory_path);
    if (traj.state_dim() != spec.env.dim()) {
      throw DimensionError("trajectory state dimension does not match the environment");
    }
    const RunReport report = check_recorded(traj, spec.env);
    write_report_json(out_dir + "/report_check.json", report, {}, 0, traj);
    return report.accepted() ? 0 : 1;
  }
  if (subcommand != "reach" && subcommand != "ras") {
    throw ParameterError("unknown subcommand '" + subcommand + "' (expected reach, ras, check)");
  }

  const bool reach_only = subcommand == "reach";
  const Environment* env = &spec.env;
  std::optional<Environment> env_free;
  if (reach_only) {
    env_free.emplace(spec.env.state_space, spec.env.target, std::vector<ObstacleShape>{});
    env = &*env_free;
  }

  const auto n_runs = spec.initial_states.size();
  std::vector<RunArtifacts> artifacts(n_runs);

#pragma omp parallel for if (overrides.parallel) schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n_runs); ++idx) {
    RunArtifacts& art = artifacts[static_cast<size_t>(idx)];
    try {
      const Vec& x0 = spec.initial_states[static_cast<size_t>(idx)];
      if (reach_only) {
        ModifiedFunnel mf;
        const Vec eta = params.eta.size() ? params.eta : default_eta(*env);
        mf.reach = make_reach_funnel(*env, eta, params.decay, params.rho_inf);
        mf.params = params.adaptive;
        SimOutcome outcome = simulate(plant, mf, params.gain, *env, x0, params.sim);
        art.trajectory = std::move(outcome.trajectory);
        art.report = std::move(outcome.report);
        art.ok = true;
      } else {
        SynthesisParams run_params = params;
        run_params.seed = run_seed(params.seed, static_cast<size_t>(idx));
        SynthesisResult result = synthesize(spec.env, plant, x0, run_params);
        art.trajectory = std::move(result.trajectory);
        art.trajectory.seed = run_params.seed;
        art.report = std::move(result.report);
        art.choices = std::move(result.choice_log);
        art.iterations = result.iterations_used;
        art.ok = true;
      }
    } catch (const Error& e) {
      art.ok = false;
      art.error_kind = e.kind();
      art.error_message = e.what();
    } catch (const std::exception& e) {
      art.ok = false;
      art.error_kind = "error";
      art.error_message = e.what();
    }
  }

  int exit_status = 0;
  json summary;
  summary["runs"] = json::array();
  for (size_t idx = 0; idx < n_runs; ++idx) {
    const RunArtifacts& art = artifacts[idx];
    export_run(out_dir, idx, art, *env);
    const bool clean = art.ok && art.report.accepted();
    if (!clean) exit_status = 1;
    json entry = {{"index", idx}, {"accepted", clean}};
    if (!art.ok) entry["error"] = {{"kind", art.error_kind}, {"message", art.error_message}};
    summary["runs"].push_back(entry);
  }
  summary["exit_status"] = exit_status;
  write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
  return exit_status;
}

}  // namespace fras
