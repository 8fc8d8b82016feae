#include "muskat/cli/verify.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "muskat/elastic.hpp"
#include "muskat/errors.hpp"
#include "muskat/evolution.hpp"
#include "muskat/io.hpp"

namespace muskat::cli {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Rows = std::vector<CheckRow>;

Field wave(const PeriodicGrid& g, double amp, int k, bool sine = true) {
  return Field::from_function(g, [=](double x) { return amp * (sine ? std::sin(k * x) : std::cos(k * x)); });
}

double rel_h0(const Field& a, const Field& b) { return sobolev_norm(a - b, 0.0) / sobolev_norm(b, 0.0); }

// |measured - expected| <= tol * |expected|
void relative(Rows& rows, int criterion, const std::string& check, double expected, double measured, double tol) {
  const bool ok = std::abs(measured - expected) <= tol * std::abs(expected);
  rows.push_back({criterion, check, expected, measured, tol, ok, ""});
}

// measured < tol, expected 0
void below(Rows& rows, int criterion, const std::string& check, double measured, double tol) {
  rows.push_back({criterion, check, 0.0, measured, tol, measured < tol, ""});
}

// Runs `body`; a throw becomes a failed row carrying the message.
void guarded(Rows& rows, int criterion, const std::string& check, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    rows.push_back({criterion, check, kNaN, kNaN, kNaN, false, e.what()});
  }
}

// Growth/decay rate of mode k from a short run.
double modal_rate(const PhysicalParams& p, int k, double predicted) {
  const PeriodicGrid g(128, 2 * kPi);
  const Field eta = wave(g, 1e-6, k, false);
  SolveConfig cfg;
  cfg.T = 0.5 / std::abs(predicted);
  cfg.dt = cfg.T / 20;
  const auto traj = solve(eta, p, cfg);
  if (!traj.completed) throw std::runtime_error(traj.abort_reason);
  const double a0 = std::abs(to_spectrum(eta)[k]);
  const double a1 = std::abs(to_spectrum(traj.final_state())[k]);
  return -std::log(a1 / a0) / cfg.T;
}

PhysicalParams two_phase_params(double g) {
  PhysicalParams p;
  p.phase = Phase::Two;
  p.mu_plus = 2.0;
  p.mu_minus = 3.0;
  p.g = g;
  return p;
}

Rows dispersion() {
  Rows rows;
  for (double g : {0.0, 1.0}) {
    for (int k : {1, 2, 3}) {
      PhysicalParams p;
      p.g = g;
      const double pred = k * (std::pow(k, 4) + g);
      const std::string name = "one_phase rate g=" + format_number(g) + " k=" + std::to_string(k);
      guarded(rows, 1, name, [&] { relative(rows, 1, name, pred, modal_rate(p, k, pred), 1e-3); });
    }
  }
  for (double g : {0.0, 1.0}) {
    for (int k : {1, 2, 3}) {
      const auto p = two_phase_params(g);
      const double pred = k * (std::pow(k, 4) + g) / 5.0;
      const std::string name = "two_phase rate g=" + format_number(g) + " k=" + std::to_string(k);
      guarded(rows, 2, name, [&] { relative(rows, 2, name, pred, modal_rate(p, k, pred), 1e-3); });
    }
  }
  // Heavier fluid on top: sigma k^4 < g (rho+ - rho-) grows for k = 1 only.
  for (int k : {1, 2}) {
    auto p = two_phase_params(4.0);
    p.rho_plus = 2.0;
    p.allow_unstable = true;
    const double pred = k * (std::pow(k, 4) - 4.0) / 5.0;
    const std::string name = "unstable rate k=" + std::to_string(k) + (pred < 0 ? " (growth)" : " (decay)");
    guarded(rows, 2, name, [&] { relative(rows, 2, name, pred, modal_rate(p, k, pred), 1e-2); });
  }
  return rows;
}

Rows dn() {
  Rows rows;
  const PeriodicGrid g(128, 2 * kPi);
  const struct {
    Field eta, f;
    const char* name;
  } pairs[] = {
      {wave(g, 0.05, 1), wave(g, 1.0, 1, false), "oracle eta=0.05 sin x f=cos x"},
      {wave(g, 0.1, 1), wave(g, 1.0, 2, false), "oracle eta=0.1 sin x f=cos 2x"},
      {wave(g, 0.1, 2, false), wave(g, 1.0, 1), "oracle eta=0.1 cos 2x f=sin x"},
  };
  for (const auto& pr : pairs) {
    guarded(rows, 3, pr.name, [&] {
      const auto r = dn_fixed_point(pr.eta, pr.f);
      if (!r.converged) throw std::runtime_error("fixed point did not converge");
      const Field fd = oracle_dn(pr.eta, pr.f, Geometry::infinite(), {128, 64, 1.0});
      below(rows, 3, pr.name, rel_h0(r.gf, fd), 1e-3);
    });
  }
  for (double h : {0.5, 1.0, 2.0}) {
    for (int k : {1, 2, 3}) {
      const std::string name = "flat strip h=" + format_number(h) + " k=" + std::to_string(k);
      guarded(rows, 3, name, [&] {
        const Field f = wave(g, 1.0, k, false);
        const auto r = dn_fixed_point(Field(g), f, Geometry::strip(h));
        below(rows, 3, name, rel_h0(r.gf, (k * std::tanh(h * k)) * f), 1e-6);
      });
    }
  }
  return rows;
}

Field random_profile(const PeriodicGrid& g, std::mt19937& rng, double h2_target) {
  std::normal_distribution<double> dist;
  std::vector<double> a(6), b(6);
  for (int k = 1; k < 6; ++k) a[k] = dist(rng) / (k * k * k), b[k] = dist(rng) / (k * k * k);
  const Field f = Field::from_function(g, [&](double x) {
    double v = 0.0;
    for (int k = 1; k < 6; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return v;
  });
  return (h2_target / sobolev_norm(f, 2.0)) * f;
}

Rows gateaux() {
  Rows rows;
  const PeriodicGrid g(128, 2 * kPi);
  const double eps = 1e-4;
  std::mt19937 rng(2024);
  for (int i = 0; i < 5; ++i) {
    const Field eta = random_profile(g, rng, 0.3);
    const Field d = random_profile(g, rng, 1.0);
    const std::string name = "central difference pair " + std::to_string(i);
    guarded(rows, 4, name, [&] {
      const Field fd = (0.5 / eps) * (elastic_E(eta + eps * d) - elastic_E(eta - eps * d));
      below(rows, 4, name, rel_h0(fd, gateaux_dE(eta, d)), 1e-6);
    });
  }
  double mismatch256 = kNaN;
  guarded(rows, 6, "form identity n=256", [&] {
    const PeriodicGrid g256(256, 2 * kPi);
    const Field eta = wave(g256, 0.3, 1);
    const Field a = elastic_E(eta, ElasticForm::Curvature);
    mismatch256 = rel_h0(elastic_E(eta, ElasticForm::Divergence), a);
    below(rows, 6, "form identity n=256", mismatch256, 1e-8);
  });
  guarded(rows, 6, "form identity improves n=512", [&] {
    const PeriodicGrid g512(512, 2 * kPi);
    const Field eta = wave(g512, 0.3, 1);
    const Field a = elastic_E(eta, ElasticForm::Curvature);
    const double m512 = rel_h0(elastic_E(eta, ElasticForm::Divergence), a);
    rows.push_back({6, "form identity improves n=512", mismatch256, m512, 0.0, m512 <= mismatch256, ""});
  });
  return rows;
}

Rows paralinearization() {
  Rows rows;
  const PeriodicGrid g(128, 2 * kPi);
  guarded(rows, 5, "remainder slope", [&] {
    const double eps[] = {1e-1, 3e-2, 1e-2, 3e-3};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double e : eps) {
      const auto split = elastic_split(wave(g, e, 2));
      const double x = std::log(e), y = std::log(sobolev_norm(split.remainder, 0.5));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    rows.push_back({5, "remainder slope", 2.0, slope, 0.0, slope >= 2.0, ""});
  });
  guarded(rows, 5, "split reconstructs E", [&] {
    const Field eta = wave(g, 0.1, 2) + wave(g, 0.03, 1, false);
    const auto split = elastic_split(eta);
    const double err = rel_h0(split.principal + split.remainder, elastic_E(eta));
    below(rows, 5, "split reconstructs E", err, 1e-13);
  });
  return rows;
}

Rows scaling() {
  Rows rows;
  const PhysicalParams p;
  auto defect = [&](int n, int panels) {
    const PeriodicGrid g(n, 2 * kPi);
    ModelConfig mc;
    mc.dn.panels = panels;
    return scaling_experiment(wave(g, 0.02, 1), 2, 1e-3, p, 10, mc).defect;
  };
  guarded(rows, 7, "lambda=2 defect n=128", [&] { below(rows, 7, "lambda=2 defect n=128", defect(128, 32), 1e-3); });
  guarded(rows, 7, "lambda=1 defect", [&] {
    const PeriodicGrid g(64, 2 * kPi);
    const double d = scaling_experiment(wave(g, 0.02, 1), 1, 1e-3, p, 5).defect;
    rows.push_back({7, "lambda=1 defect", 0.0, d, 0.0, d == 0.0, ""});
  });
  guarded(rows, 7, "refinement", [&] {
    const double d[] = {defect(64, 32), defect(128, 64), defect(256, 128)};
    std::ostringstream horizontal;
    horizontal << "n-only refinement (32 panels): " << defect(64, 32) << ", " << defect(128, 32) << ", "
               << defect(256, 32);
    for (int i = 0; i < 2; ++i) {
      const std::string name = "defect ratio n=" + std::to_string(64 << i) + "->" + std::to_string(128 << i);
      const double ratio = d[i] / d[i + 1];
      rows.push_back({7, name, 2.0, ratio, 0.0, ratio >= 2.0, horizontal.str()});
    }
  });
  return rows;
}

Rows stability() {
  Rows rows;
  guarded(rows, 10, "ratio variation", [&] {
    const PeriodicGrid g(128, 2 * kPi);
    const auto r = stability_experiment(wave(g, 0.05, 1), wave(g, 1.0, 2, false) + wave(g, 0.5, 3), 0.5,
                                        PhysicalParams{}, {1e-6, 1e-5, 1e-4});
    rows.push_back({10, "ratio variation", 1.0, r.variation, 2.0, r.variation < 2.0, ""});
  });
  return rows;
}

Rows two_phase() {
  Rows rows;
  const PeriodicGrid g(64, 2 * kPi);
  const auto params = two_phase_params(1.0);
  const Field eta = wave(g, 1e-3, 2) + wave(g, 5e-4, 1, false);
  guarded(rows, 8, "pressure", [&] {
    const auto fp = pressure_fixed_point(eta, params);
    const auto dense = pressure_oracle(eta, params);
    below(rows, 8, "fixed point vs dense oracle", rel_h0(fp.f_minus, dense.f_minus), 1e-8);
    below(rows, 8, "jump residual", fp.jump_residual, 1e-9);
    below(rows, 8, "flux residual", fp.flux_residual, 1e-6);
    const double gauge = std::abs(mean(fp.f_minus)) / sup_norm(fp.f_minus);
    rows.push_back({8, "mean gauge", 0.0, gauge, 1e-14, gauge <= 1e-14, ""});
  });
  return rows;
}

Rows evolution() {
  Rows rows;
  const PeriodicGrid g(128, 2 * kPi);
  const PhysicalParams p;
  guarded(rows, 9, "mean drift T=1", [&] {
    PhysicalParams pg;
    pg.g = 1.0;
    const Field eta = wave(g, 0.05, 1) + wave(g, 0.02, 2, false) + Field::from_function(g, [](double) { return 0.01; });
    SolveConfig cfg;
    cfg.T = 1.0;
    const auto traj = solve(eta, pg, cfg);
    if (!traj.completed) throw std::runtime_error(traj.abort_reason);
    double drift = 0.0;
    for (const auto& m : traj.monitors) drift = std::max(drift, std::abs(m.mean - mean(eta)));
    below(rows, 9, "mean drift T=1", drift, 1e-10);
  });
  guarded(rows, 9, "smoothing rate", [&] {
    Spectrum s0(g);
    for (int m = 1; m < g.size() / 2; ++m) s0[m] = {1e-3 / (m * m), 0.0};
    SolveConfig cfg;
    cfg.T = 1e-3;
    cfg.dt = 1e-4;
    const auto traj = solve(to_field(s0), p, cfg);
    if (!traj.completed) throw std::runtime_error(traj.abort_reason);
    const auto s1 = to_spectrum(traj.final_state());
    double sxy = 0.0, sxx = 0.0;
    bool all_decay = true;
    for (int m = g.size() / 4; m < g.size() / 2; ++m) {
      const double x = cfg.T * std::pow(m, 5), y = std::log(std::abs(s1[m]) / std::abs(s0[m]));
      all_decay = all_decay && y < 0.0;
      sxy += x * y;
      sxx += x * x;
    }
    const double c = -sxy / sxx;
    rows.push_back({9, "smoothing rate", 0.0, c, 0.0, c > 0.0 && all_decay, all_decay ? "" : "a tail mode grew"});
  });
  guarded(rows, 11, "picard vs etd", [&] {
    const Field eta = wave(g, 1e-4, 1);
    PicardConfig pc;
    pc.T = 0.5;
    const auto pr = picard_solve(eta, p, pc);
    SolveConfig sc;
    sc.T = 0.5;
    const auto traj = solve(eta, p, sc);
    if (pr.trajectory.states.size() != traj.states.size()) throw std::runtime_error("time grids differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i)
      worst = std::max(worst, sobolev_norm(pr.trajectory.states[i] - traj.states[i], 2.0) /
                                  sobolev_norm(traj.states[i], 2.0));
    below(rows, 11, "picard vs etd", worst, 1e-6);
  });
  {
    double thrown = 0.0;
    std::string note;
    try {
      PicardConfig pc;
      pc.T = 0.5;
      picard_solve(wave(g, 1.0, 1), p, pc);
      note = "no failure reported";
    } catch (const SolverError& e) {
      thrown = e.kind() == SolverErrorKind::NotContracting ? 1.0 : 0.0;
      note = thrown == 1.0 ? "" : e.what();
    }
    rows.push_back({11, "picard NotContracting at amplitude 1", 1.0, thrown, 0.0, thrown == 1.0, note});
  }
  guarded(rows, 12, "etdrk2 order", [&] {
    const Field eta = wave(g, 0.05, 1);
    std::vector<Field> finals;
    for (int steps : {10, 20, 40}) {
      SolveConfig cfg;
      cfg.T = 0.01;
      cfg.dt = cfg.T / steps;
      finals.push_back(solve(eta, p, cfg).final_state());
    }
    const double order =
        std::log2(sobolev_norm(finals[0] - finals[1], 0.0) / sobolev_norm(finals[1] - finals[2], 0.0));
    rows.push_back({12, "etdrk2 order", 2.0, order, 0.2, std::abs(order - 2.0) <= 0.2, ""});
  });
  guarded(rows, 12, "exact linear propagation", [&] {
    PhysicalParams pg;
    pg.g = 1.0;
    MuskatModel model(pg);
    const Field eta = wave(g, 0.05, 1) + wave(g, 0.01, 5, false);
    const Field a = etd_step(eta, 0.02, model, Scheme::ETDRK2, true);
    const Field b = semigroup_apply(eta, 0.02, 1.0, 5.0, 1.0, 1.0);
    below(rows, 12, "exact linear propagation", sup_norm(a - b) / sup_norm(b), 1e-14);
  });
  return rows;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dispersion", "dn",        "gateaux",   "paralinearization",
                                              "scaling",    "stability", "two_phase", "evolution"};
  return names;
}

std::vector<CheckRow> run_suite(const std::string& name) {
  if (name == "dispersion") return dispersion();
  if (name == "dn") return dn();
  if (name == "gateaux") return gateaux();
  if (name == "paralinearization") return paralinearization();
  if (name == "scaling") return scaling();
  if (name == "stability") return stability();
  if (name == "two_phase") return two_phase();
  if (name == "evolution") return evolution();
  throw std::invalid_argument("unknown suite '" + name + "'");
}

void write_report(const std::filesystem::path& path, const std::vector<CheckRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "check,expected,measured,tolerance,pass\n";
  for (const auto& r : rows)
    out << '"' << r.check << "\"," << format_number(r.expected) << ',' << format_number(r.measured) << ','
        << format_number(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace muskat::cli
