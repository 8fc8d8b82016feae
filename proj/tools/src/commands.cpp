#include "muskat/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "muskat/cli/run_config.hpp"
#include "muskat/cli/verify.hpp"
#include "muskat/errors.hpp"
#include "muskat/io.hpp"

namespace muskat::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json base_manifest(const RunConfig& cfg) {
  return {{"version", kVersion},
          {"config", cfg.to_json()},
          {"grid", {{"n", cfg.n}, {"L", cfg.length}}},
          {"method", cfg.method},
          {"scheme", cfg.solve.scheme == Scheme::ETDRK2 ? "etdrk2" : "etd1"},
          {"experiment", cfg.experiment.name}};
}

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int run_trajectory(const RunConfig& cfg, const Field& eta0, const fs::path& dir, json manifest, std::ostream& out,
                   bool quiet) {
  Trajectory traj;
  if (cfg.method == "picard") {
    try {
      auto pr = picard_solve(eta0, cfg.params, cfg.picard, cfg.model);
      manifest["picard"] = {{"iterations", pr.iterations}, {"distances", pr.distances}};
      traj = std::move(pr.trajectory);
    } catch (const SolverError& e) {
      manifest["completed"] = false;
      manifest["abort_reason"] = e.what();
      write_json(dir / "manifest.json", manifest);
      if (!quiet) out << "aborted: " << e.what() << '\n';
      return 2;
    }
  } else {
    traj = solve(eta0, cfg.params, cfg.solve, cfg.model);
  }
  manifest["completed"] = traj.completed;
  manifest["abort_reason"] = traj.abort_reason;
  manifest["steps"] = traj.monitors.empty() ? 0 : traj.monitors.size() - 1;
  manifest["final_time"] = traj.monitors.empty() ? 0.0 : traj.monitors.back().t;
  manifest["stats"] = traj.stats.to_json();
  write_trajectory(dir, traj, manifest, cfg.solve.sobolev_indices);
  if (!quiet) {
    if (traj.completed)
      out << "completed " << manifest["steps"].get<std::size_t>() << " steps to t = "
          << format_number(manifest["final_time"].get<double>()) << ", output in " << dir.string() << '\n';
    else
      out << "aborted: " << traj.abort_reason << '\n';
  }
  return traj.completed ? 0 : 2;
}

int run_stability(const RunConfig& cfg, const Field& eta0, const fs::path& dir, json manifest, std::ostream& out,
                  bool quiet) {
  const Field direction = modes_field(eta0.grid(), cfg.experiment.direction);
  try {
    const auto report =
        stability_experiment(eta0, direction, cfg.solve.T, cfg.params, cfg.experiment.magnitudes, cfg.solve, cfg.model);
    manifest["completed"] = true;
    manifest["abort_reason"] = "";
    manifest["results"] = report.to_json();
    write_json(dir / "report.json", report.to_json());
    write_json(dir / "manifest.json", manifest);
    if (!quiet) out << "stability ratio variation " << format_number(report.variation) << '\n';
    return 0;
  } catch (const SolverError& e) {
    manifest["completed"] = false;
    manifest["abort_reason"] = e.what();
    write_json(dir / "manifest.json", manifest);
    if (!quiet) out << "aborted: " << e.what() << '\n';
    return 2;
  }
}

int run_scaling(const RunConfig& cfg, const Field& eta0, const fs::path& dir, json manifest, std::ostream& out,
                bool quiet) {
  try {
    const auto report =
        scaling_experiment(eta0, cfg.experiment.lambda, cfg.solve.T, cfg.params, cfg.experiment.steps, cfg.model);
    manifest["completed"] = true;
    manifest["abort_reason"] = "";
    manifest["results"] = report.to_json();
    write_json(dir / "report.json", report.to_json());
    write_json(dir / "manifest.json", manifest);
    if (!quiet) out << "scaling defect " << format_number(report.defect) << '\n';
    return 0;
  } catch (const SolverError& e) {
    manifest["completed"] = false;
    manifest["abort_reason"] = e.what();
    write_json(dir / "manifest.json", manifest);
    if (!quiet) out << "aborted: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int cmd_simulate(const fs::path& config, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 1;
  }
  const fs::path dir = opts.output.value_or(fs::path(cfg.output.directory));
  try {
    const Field eta0 = initial_field(cfg);
    const double dist = boundary_distance(eta0, cfg.params);
    if (std::isfinite(dist) && cfg.solve.separation > 0.0)
      check_initial_separation(eta0, cfg.params, cfg.solve.separation);
    const json manifest = base_manifest(cfg);
    if (cfg.experiment.name == "stability") return run_stability(cfg, eta0, dir, manifest, out, opts.quiet);
    if (cfg.experiment.name == "scaling") return run_scaling(cfg, eta0, dir, manifest, out, opts.quiet);
    return run_trajectory(cfg, eta0, dir, manifest, out, opts.quiet);
  } catch (const std::invalid_argument& e) {
    err << "invalid run: " << e.what() << '\n';
    return 1;
  }
}

int cmd_verify(const std::string& suite, const std::optional<fs::path>& config, const CommandOptions& opts,
               std::ostream& out, std::ostream& err) {
  fs::path dir = ".";
  if (config) {
    try {
      dir = load_run_config(*config).output.directory;
    } catch (const std::exception& e) {
      err << e.what() << '\n';
      return 1;
    }
  }
  if (opts.output) dir = *opts.output;

  std::vector<CheckRow> rows;
  try {
    rows = run_suite(suite);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "; available:";
    for (const auto& s : suite_names()) err << ' ' << s;
    err << '\n';
    return 1;
  }
  write_report(dir / "report.csv", rows);

  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    if (opts.quiet) continue;
    out << (r.pass ? "PASS " : "FAIL ") << r.check << ": measured " << format_number(r.measured) << ", expected "
        << format_number(r.expected) << ", tolerance " << format_number(r.tolerance);
    if (!r.note.empty()) out << " (" << r.note << ')';
    out << '\n';
  }
  return all ? 0 : 1;
}

}  // namespace muskat::cli
