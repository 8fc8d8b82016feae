#include "muskat/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "muskat/elastic.hpp"
#include "muskat/errors.hpp"
#include "muskat/io.hpp"
#include "muskat/littlewood_paley.hpp"

namespace muskat {
namespace {

constexpr const char* kSubsystem = "evolution";

Field apply_symbol(const Field& eta, const LinearSymbol& L) {
  auto s = to_spectrum(eta);
  for (int m = 0; m < eta.grid().mode_count(); ++m) s[m] *= L(eta.grid().abs_wavenumber(m));
  return to_field(s);
}

void require_converged(const DNResult& r) {
  if (!r.converged) {
    std::ostringstream msg;
    msg << "Dirichlet-Neumann iteration stopped after " << r.iterations << " iterations at residual "
        << (r.residuals.empty() ? 0.0 : r.residuals.back());
    throw SolverError(SolverErrorKind::NotContracting, "dirichlet_neumann", msg.str());
  }
}

bool all_finite(const Field& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

Monitor make_monitor(const Field& eta, double t, double dt, const PhysicalParams& params,
                     const std::vector<double>& indices) {
  Monitor m;
  m.t = t;
  m.dt = dt;
  m.mean = mean(eta);
  for (double s : indices) m.sobolev.push_back(sobolev_norm(eta, s));
  m.min_distance = boundary_distance(eta, params);
  const auto lip = lipschitz_norms(eta);
  m.lipschitz = lip.lipschitz;
  m.w1eps = lip.w1eps;
  return m;
}

// Mode-by-mode map k -> lambda k with amplitude 1/lambda.
Field dilate(const Field& f, int lambda) {
  if (lambda == 1) return f;
  const auto& grid = f.grid();
  const auto s = to_spectrum(f);
  double peak = 0.0;
  for (int m = 1; m < grid.mode_count(); ++m) peak = std::max(peak, std::abs(s[m]));
  Spectrum out(grid);
  out[0] = s[0] / static_cast<double>(lambda);
  for (int m = 1; m < grid.mode_count(); ++m) {
    if (std::abs(s[m]) <= 1e-14 * peak) continue;
    const long target = static_cast<long>(m) * lambda;
    if (target >= grid.size() / 2)
      throw std::invalid_argument("scaling: mode " + std::to_string(m) + " maps beyond the grid for lambda = " +
                                  std::to_string(lambda));
    out[static_cast<int>(target)] = s[m] / static_cast<double>(lambda);
  }
  return to_field(out);
}

}  // namespace

LinearSymbol LinearSymbol::from(const PhysicalParams& params) {
  const double mu = params.mu_eff();
  const double gravity = params.phase == Phase::One ? params.rho_minus * params.g : params.g * params.delta_rho();
  return {params.sigma / mu, gravity / mu};
}

nlohmann::json SolverStats::to_json() const {
  return {{"rhs_calls", rhs_calls},           {"dn_solves", dn_solves},
          {"dn_iterations", dn_iterations},   {"pressure_solves", pressure_solves},
          {"pressure_iterations", pressure_iterations}, {"oracle_fallbacks", oracle_fallbacks}};
}

MuskatModel::MuskatModel(PhysicalParams params, ModelConfig cfg)
    : params_(params), cfg_(cfg), symbol_(LinearSymbol::from(params)) {
  params_.validate();
}

Field MuskatModel::rhs(const Field& eta) {
  ++stats_.rhs_calls;
  Field f(eta.grid());
  if (params_.phase == Phase::One) {
    f = params_.sigma * elastic_E(eta) + (params_.rho_minus * params_.g) * eta;
  } else {
    const PressurePair p = pressure_solve(eta, params_, cfg_.pressure);
    ++stats_.pressure_solves;
    stats_.pressure_iterations += p.iterations;
    if (p.used_oracle) ++stats_.oracle_fallbacks;
    if (!p.converged)
      throw SolverError(SolverErrorKind::NotContracting, "two_phase", "pressure iteration did not converge");
    f = p.f_minus;
  }
  const DNResult r = dn_fixed_point(eta, f, params_.lower, cfg_.dn);
  ++stats_.dn_solves;
  stats_.dn_iterations += r.iterations;
  require_converged(r);
  return (-1.0 / params_.mu_minus) * r.gf;
}

Field MuskatModel::nonlinear_remainder(const Field& eta) { return rhs(eta) + apply_symbol(eta, symbol_); }

Field MuskatModel::duhamel_integrand(const Field& eta) {
  if (params_.phase != Phase::One) return nonlinear_remainder(eta);
  ++stats_.rhs_calls;
  const ElasticSplit split = elastic_split(eta);
  const Field elastic = split.principal + split.remainder;
  const Field f = params_.sigma * elastic + (params_.rho_minus * params_.g) * eta;
  const DNResult r = dn_fixed_point(eta, f, params_.lower, cfg_.dn);
  ++stats_.dn_solves;
  stats_.dn_iterations += r.iterations;
  require_converged(r);
  const Field flat = params_.sigma * abs_derivative(elastic - derivative(eta, 4), 1.0);
  return (-1.0 / params_.mu_minus) * (r.remainder + flat);
}

Field rhs(const Field& eta, const PhysicalParams& params) {
  MuskatModel model(params);
  return model.rhs(eta);
}

Field nonlinear_remainder(const Field& eta, const PhysicalParams& params) {
  MuskatModel model(params);
  return model.nonlinear_remainder(eta);
}

Field etd_step(const Field& eta, double dt, MuskatModel& model, Scheme scheme, bool linear_only) {
  if (!(dt > 0.0)) throw std::invalid_argument("etd_step: dt must be positive");
  const auto& grid = eta.grid();
  const int modes = grid.mode_count();
  const auto& L = model.symbol();
  const Field n0 = linear_only ? Field(grid) : model.nonlinear_remainder(eta);
  const auto es = to_spectrum(eta);
  const auto ns = to_spectrum(n0);
  Spectrum a(grid);
  std::vector<double> z(modes);
  for (int m = 0; m < modes; ++m) {
    z[m] = dt * L(grid.abs_wavenumber(m));
    a[m] = std::exp(-z[m]) * es[m] + dt * phi1(z[m]) * ns[m];
  }
  const Field predictor = to_field(a);
  if (scheme == Scheme::ETD1 || linear_only) return predictor;
  const auto ds = to_spectrum(model.nonlinear_remainder(predictor) - n0);
  for (int m = 0; m < modes; ++m) a[m] += dt * phi2(z[m]) * ds[m];
  return to_field(a);
}

Field etd_step(const Field& eta, double dt, const PhysicalParams& params, Scheme scheme) {
  MuskatModel model(params);
  return etd_step(eta, dt, model, scheme);
}

double default_dt(const PeriodicGrid& grid, const LinearSymbol& symbol) {
  const double rate = std::abs(symbol(grid.fundamental()));
  return rate > 0.0 ? 0.05 / rate : 0.05;
}

double boundary_distance(const Field& eta, const PhysicalParams& params) {
  double d = std::numeric_limits<double>::infinity();
  const auto v = eta.values();
  if (params.lower.is_strip()) d = std::min(d, *std::min_element(v.begin(), v.end()) + params.lower.depth);
  if (params.phase == Phase::Two && params.upper.is_strip())
    d = std::min(d, params.upper.depth - *std::max_element(v.begin(), v.end()));
  return d;
}

void check_initial_separation(const Field& eta0, const PhysicalParams& params, double h) {
  const double d = boundary_distance(eta0, params);
  if (!std::isfinite(d)) return;
  if (!(d > 2.0 * h) || !(d > 0.0)) {
    std::ostringstream msg;
    msg << "initial interface is " << d << " from a rigid boundary; at least 2h = " << 2.0 * h << " is required";
    throw std::invalid_argument(msg.str());
  }
}

Trajectory solve(const Field& eta0, const PhysicalParams& params, const SolveConfig& cfg,
                 const ModelConfig& model_cfg) {
  MuskatModel model(params, model_cfg);
  return solve(eta0, model, cfg);
}

Trajectory solve(const Field& eta0, MuskatModel& model, const SolveConfig& cfg) {
  if (!(cfg.T >= 0.0)) throw std::invalid_argument("solve: T must be non-negative");
  if (cfg.snapshot_stride < 1) throw std::invalid_argument("solve: snapshot stride must be >= 1");
  const auto& params = model.params();
  const double dist0 = boundary_distance(eta0, params);
  double h = cfg.separation;
  if (std::isfinite(dist0)) {
    if (h <= 0.0) h = 0.5 * dist0;
    check_initial_separation(eta0, params, cfg.separation > 0.0 ? cfg.separation : 0.25 * dist0);
  }
  double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(eta0.grid(), model.symbol());

  Trajectory traj;
  Field eta = eta0;
  double t = 0.0, sup_hs = 0.0, dissipation = 0.0;
  int step = 0;
  auto record = [&](double step_dt) {
    Monitor m = make_monitor(eta, t, step_dt, params, cfg.sobolev_indices);
    sup_hs = std::max(sup_hs, sobolev_norm(eta, cfg.regularity));
    m.dissipation = dissipation;
    m.zs = sup_hs + std::sqrt(dissipation);
    traj.monitors.push_back(std::move(m));
  };
  auto snapshot = [&] {
    traj.times.push_back(t);
    traj.states.push_back(eta);
    traj.snapshot_steps.push_back(step);
  };
  record(0.0);
  snapshot();

  const double end_slack = 1e-12 * std::max(cfg.T, 1.0);
  while (t < cfg.T - end_slack) {
    double step_dt = std::min(dt, cfg.T - t);
    const double rate = std::pow(sobolev_norm(eta, cfg.regularity + 2.5), 2);
    Field next(eta.grid());
    try {
      if (cfg.step_tol > 0.0) {
        for (int halving = 0;; ++halving) {
          const Field full = etd_step(eta, step_dt, model, cfg.scheme, cfg.linear_only);
          const Field half = etd_step(etd_step(eta, 0.5 * step_dt, model, cfg.scheme, cfg.linear_only),
                                      0.5 * step_dt, model, cfg.scheme, cfg.linear_only);
          const double scale = std::max(sobolev_norm(half, 0.0), std::numeric_limits<double>::min());
          const double err = sobolev_norm(full - half, 0.0) / scale;
          if (err <= cfg.step_tol || halving >= cfg.max_halvings) {
            next = half;
            break;
          }
          step_dt *= 0.5;
          dt = step_dt;
        }
      } else {
        next = etd_step(eta, step_dt, model, cfg.scheme, cfg.linear_only);
      }
    } catch (const SolverError& e) {
      traj.abort_reason = e.what();
      break;
    }
    if (!all_finite(next)) {
      traj.abort_reason = "NotContracting [evolution]: non-finite state";
      break;
    }
    dissipation += step_dt * rate;
    eta = std::move(next);
    t += step_dt;
    ++step;
    record(step_dt);
    const double dist = traj.monitors.back().min_distance;
    if (std::isfinite(dist) && dist <= h) {
      std::ostringstream msg;
      msg << "interface came within " << dist << " of a rigid boundary (limit " << h << ") at t = " << t;
      traj.abort_reason = SolverError(SolverErrorKind::SeparationLost, kSubsystem, msg.str()).what();
      snapshot();
      break;
    }
    if (step % cfg.snapshot_stride == 0) snapshot();
  }
  if (traj.snapshot_steps.back() != step) snapshot();
  traj.completed = traj.abort_reason.empty();
  traj.stats = model.stats();
  return traj;
}

double zs_functional(const std::vector<double>& times, const std::vector<Field>& states, double s) {
  if (times.size() != states.size() || states.empty())
    throw std::invalid_argument("zs_functional: times and states must match");
  double sup = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    sup = std::max(sup, sobolev_norm(states[i], s));
    if (i + 1 < states.size()) integral += (times[i + 1] - times[i]) * std::pow(sobolev_norm(states[i], s + 2.5), 2);
  }
  return sup + std::sqrt(integral);
}

PicardResult picard_solve(const Field& eta0, const PhysicalParams& params, const PicardConfig& cfg,
                          const ModelConfig& model_cfg) {
  MuskatModel model(params, model_cfg);
  const double size = sobolev_norm(eta0, cfg.regularity);
  if (size > cfg.gate) {
    std::ostringstream msg;
    msg << "||eta0||_{H^" << cfg.regularity << "} = " << size << " exceeds the smallness gate " << cfg.gate;
    throw SolverError(SolverErrorKind::NotContracting, "picard", msg.str());
  }
  if (!(cfg.T > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
  const auto& grid = eta0.grid();
  const int modes = grid.mode_count();
  const auto& L = model.symbol();
  const double dt0 = cfg.dt > 0.0 ? cfg.dt : default_dt(grid, L);
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.T / dt0 - 1e-9)));
  const double dt = cfg.T / steps;

  std::vector<double> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = i * dt;
  std::vector<double> decay(modes), w_new(modes), w_old(modes);
  for (int m = 0; m < modes; ++m) {
    const double lam = L(grid.abs_wavenumber(m));
    decay[m] = std::exp(-dt * lam);
    const double m0 = exp_moment(lam, dt, 0), m1 = exp_moment(lam, dt, 1);
    w_new[m] = m0 - m1 / dt;
    w_old[m] = m1 / dt;
  }
  std::vector<Field> free_flow;
  for (int i = 0; i <= steps; ++i) {
    const double t = times[i];
    auto s = to_spectrum(eta0);
    for (int m = 0; m < modes; ++m) s[m] *= std::exp(-t * L(grid.abs_wavenumber(m)));
    free_flow.push_back(to_field(s));
  }

  PicardResult out;
  std::vector<Field> current = free_flow;
  int rising = 0;
  bool converged = false;
  for (int it = 1; it <= cfg.max_iter && !converged; ++it) {
    std::vector<Spectrum> ns;
    ns.reserve(steps + 1);
    for (const auto& state : current) ns.push_back(to_spectrum(model.duhamel_integrand(state)));
    std::vector<Field> next;
    next.push_back(eta0);
    Spectrum acc(grid);
    for (int i = 1; i <= steps; ++i) {
      for (int m = 0; m < modes; ++m) acc[m] = decay[m] * acc[m] + w_new[m] * ns[i][m] + w_old[m] * ns[i - 1][m];
      next.push_back(free_flow[i] + to_field(acc));
    }
    std::vector<Field> diff;
    for (int i = 0; i <= steps; ++i) diff.push_back(next[i] - current[i]);
    const double scale = zs_functional(times, next, cfg.regularity);
    const double dist = zs_functional(times, diff, cfg.regularity);
    const double rel = scale > 0.0 ? dist / scale : dist;
    current = std::move(next);
    out.iterations = it;
    if (!std::isfinite(rel))
      throw SolverError(SolverErrorKind::NotContracting, "picard", "iterates are not finite");
    if (!out.distances.empty() && rel >= out.distances.back() && rel > 0.0) {
      if (++rising >= cfg.stall_window) {
        std::ostringstream msg;
        msg << "iterates diverge: distance rose for " << rising << " iterations (last " << rel << ")";
        throw SolverError(SolverErrorKind::NotContracting, "picard", msg.str());
      }
    } else {
      rising = 0;
    }
    out.distances.push_back(rel);
    converged = rel < cfg.tol;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "no convergence after " << cfg.max_iter << " iterations (distance " << out.distances.back() << ")";
    throw SolverError(SolverErrorKind::NotContracting, "picard", msg.str());
  }

  Trajectory& traj = out.trajectory;
  double sup_hs = 0.0, dissipation = 0.0;
  for (int i = 0; i <= steps; ++i) {
    Monitor m = make_monitor(current[i], times[i], i == 0 ? 0.0 : dt, params, {0.0, 1.0, 2.0});
    sup_hs = std::max(sup_hs, sobolev_norm(current[i], cfg.regularity));
    m.dissipation = dissipation;
    m.zs = sup_hs + std::sqrt(dissipation);
    dissipation += dt * std::pow(sobolev_norm(current[i], cfg.regularity + 2.5), 2);
    traj.monitors.push_back(std::move(m));
    traj.snapshot_steps.push_back(i);
  }
  traj.times = times;
  traj.states = std::move(current);
  traj.completed = true;
  traj.stats = model.stats();
  return out;
}

nlohmann::json StabilityReport::to_json() const {
  return {{"magnitudes", magnitudes}, {"ratios", ratios}, {"variation", variation}, {"exact_match", exact_match}};
}

StabilityReport stability_experiment(const Field& eta0, const Field& direction, double T,
                                     const PhysicalParams& params, const std::vector<double>& magnitudes,
                                     const SolveConfig& cfg, const ModelConfig& model_cfg) {
  SolveConfig run_cfg = cfg;
  run_cfg.T = T;
  run_cfg.snapshot_stride = 1;
  run_cfg.step_tol = 0.0;
  StabilityReport rep;
  rep.magnitudes = magnitudes;
  const double dnorm = sobolev_norm(direction, run_cfg.regularity);
  if (dnorm == 0.0) {
    rep.exact_match = true;
    rep.ratios.assign(magnitudes.size(), 0.0);
    rep.variation = 1.0;
    return rep;
  }
  const Trajectory base = solve(eta0, params, run_cfg, model_cfg);
  if (!base.completed) throw std::runtime_error("stability reference run aborted: " + base.abort_reason);
  for (double mag : magnitudes) {
    const Trajectory pert = solve(eta0 + (mag / dnorm) * direction, params, run_cfg, model_cfg);
    if (!pert.completed) throw std::runtime_error("stability perturbed run aborted: " + pert.abort_reason);
    if (pert.states.size() != base.states.size()) throw std::logic_error("stability runs took different steps");
    std::vector<Field> diff;
    for (std::size_t i = 0; i < base.states.size(); ++i) diff.push_back(pert.states[i] - base.states[i]);
    rep.ratios.push_back(zs_functional(base.times, diff, run_cfg.regularity) / mag);
  }
  const auto [lo, hi] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  rep.variation = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  return rep;
}

nlohmann::json ScalingReport::to_json() const {
  return {{"lambda", lambda}, {"defect", defect}, {"reference_time", reference_time},
          {"scaled_time", scaled_time}, {"steps", steps}};
}

ScalingReport scaling_experiment(const Field& eta0, int lambda, double T, const PhysicalParams& params,
                                 int steps, const ModelConfig& model_cfg) {
  if (lambda < 1) throw std::invalid_argument("scaling: lambda must be a positive integer");
  if (params.g != 0.0 || params.phase != Phase::One || params.lower.is_strip())
    throw std::invalid_argument("scaling: requires g = 0, one phase and no rigid boundary");
  if (steps < 1 || !(T > 0.0)) throw std::invalid_argument("scaling: need T > 0 and steps >= 1");
  ScalingReport rep;
  rep.lambda = lambda;
  rep.steps = steps;
  rep.scaled_time = T;
  rep.reference_time = std::pow(static_cast<double>(lambda), 5) * T;
  const Field scaled0 = dilate(eta0, lambda);

  SolveConfig a;
  a.T = rep.reference_time;
  a.dt = rep.reference_time / steps;
  SolveConfig b = a;
  b.T = T;
  b.dt = T / steps;
  const Trajectory ra = solve(eta0, params, a, model_cfg);
  const Trajectory rb = solve(scaled0, params, b, model_cfg);
  if (!ra.completed) throw std::runtime_error("scaling reference run aborted: " + ra.abort_reason);
  if (!rb.completed) throw std::runtime_error("scaling scaled run aborted: " + rb.abort_reason);
  const Field mapped = dilate(ra.final_state(), lambda);
  const double scale = sobolev_norm(rb.final_state(), 0.0);
  rep.defect = sobolev_norm(mapped - rb.final_state(), 0.0) / (scale > 0.0 ? scale : 1.0);
  return rep;
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const nlohmann::json& manifest,
                      const std::vector<double>& sobolev_indices) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "monitors.csv");
    if (!out) throw std::runtime_error("cannot write " + (dir / "monitors.csv").string());
    out << "step,t,dt,mean";
    for (double s : sobolev_indices) out << ",h" << format_number(s);
    out << ",min_distance,lipschitz,w1eps,dissipation,zs\n";
    for (std::size_t i = 0; i < traj.monitors.size(); ++i) {
      const Monitor& m = traj.monitors[i];
      out << i << ',' << format_number(m.t) << ',' << format_number(m.dt) << ',' << format_number(m.mean);
      for (double v : m.sobolev) out << ',' << format_number(v);
      out << ',' << format_number(m.min_distance) << ',' << format_number(m.lipschitz) << ','
          << format_number(m.w1eps) << ',' << format_number(m.dissipation) << ',' << format_number(m.zs) << '\n';
    }
  }
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%06d.csv", traj.snapshot_steps[i]);
    write_field_csv(dir / name, traj.states[i]);
  }
}

}  // namespace muskat
