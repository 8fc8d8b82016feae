#pragma once

// Interface evolution
//
//     one-phase:  d_t eta = -(1/mu-) G-(eta) (sigma E(eta) + rho- g eta)
//     two-phase:  d_t eta = -(1/mu-) G-(eta) f-
//
// split as d_t eta = -L eta + N(eta) with the flat symbol
// L = nu1 |k|^5 + nu2 |k|, nu1 = sigma / mu_eff, nu2 = g drho / mu_eff.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/params.hpp"
#include "muskat/two_phase.hpp"

namespace muskat {

struct LinearSymbol {
  double nu1 = 0.0;
  double nu2 = 0.0;

  static LinearSymbol from(const PhysicalParams& params);
  double operator()(double k) const noexcept { return nu1 * k * k * k * k * k + nu2 * k; }
};

struct ModelConfig {
  DNConfig dn{};
  PressureConfig pressure{};
};

struct SolverStats {
  std::int64_t rhs_calls = 0;
  std::int64_t dn_solves = 0;
  std::int64_t dn_iterations = 0;
  std::int64_t pressure_solves = 0;
  std::int64_t pressure_iterations = 0;
  std::int64_t oracle_fallbacks = 0;

  nlohmann::json to_json() const;
};

class MuskatModel {
 public:
  explicit MuskatModel(PhysicalParams params, ModelConfig cfg = {});

  const PhysicalParams& params() const noexcept { return params_; }
  const ModelConfig& config() const noexcept { return cfg_; }
  const LinearSymbol& symbol() const noexcept { return symbol_; }
  const SolverStats& stats() const noexcept { return stats_; }
  void reset_stats() noexcept { stats_ = {}; }

  /// d_t eta.
  Field rhs(const Field& eta);
  /// N(eta) = rhs(eta) + L eta.
  Field nonlinear_remainder(const Field& eta);
  /// One-phase N(eta) assembled from the paralinearized pieces:
  /// -(1/mu-) [ R-(eta)(sigma (T_l eta + R_E eta) + rho- g eta) + sigma |D| (T_l eta + R_E eta - |D|^4 eta) ].
  Field duhamel_integrand(const Field& eta);

 private:
  PhysicalParams params_;
  ModelConfig cfg_;
  LinearSymbol symbol_;
  SolverStats stats_;
};

Field rhs(const Field& eta, const PhysicalParams& params);
Field nonlinear_remainder(const Field& eta, const PhysicalParams& params);

enum class Scheme { ETD1, ETDRK2 };

/// Exponential time differencing step. With `linear_only` the nonlinear
/// remainder is replaced by zero and the step is the exact linear flow.
Field etd_step(const Field& eta, double dt, MuskatModel& model, Scheme scheme = Scheme::ETDRK2,
               bool linear_only = false);
Field etd_step(const Field& eta, double dt, const PhysicalParams& params, Scheme scheme = Scheme::ETDRK2);

/// Time step used when none is configured: 0.05 / L(k_min), the e-folding
/// time of the slowest mode divided by 20.
double default_dt(const PeriodicGrid& grid, const LinearSymbol& symbol);

struct Monitor {
  double t = 0.0;
  double dt = 0.0;
  double mean = 0.0;
  std::vector<double> sobolev;   ///< H^s norms for SolveConfig::sobolev_indices
  double min_distance = 0.0;     ///< distance to the nearest rigid boundary (inf if none)
  double lipschitz = 0.0;        ///< ||eta_x||_inf
  double w1eps = 0.0;            ///< W^{1+1/2,inf} proxy
  double dissipation = 0.0;      ///< sum dt ||eta||^2_{H^{s+5/2}}, left endpoint
  double zs = 0.0;               ///< sup_t ||eta||_{H^s} + sqrt(dissipation)
};

struct SolveConfig {
  double T = 1.0;
  double dt = 0.0;                          ///< 0 selects default_dt
  Scheme scheme = Scheme::ETDRK2;
  double step_tol = 0.0;                    ///< > 0 enables step-doubling control
  int max_halvings = 20;
  int snapshot_stride = 1;                  ///< store every k-th state (the final state is always stored)
  std::vector<double> sobolev_indices{0.0, 1.0, 2.0};
  double regularity = 2.0;                  ///< s in the Z^s functional
  double separation = 0.0;                  ///< abort distance h; 0 uses half the initial distance
  bool linear_only = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;        ///< snapshots at `snapshot_steps`
  std::vector<int> snapshot_steps;
  std::vector<Monitor> monitors;    ///< one per step, including t = 0
  bool completed = false;
  std::string abort_reason;
  SolverStats stats;

  const Field& final_state() const { return states.back(); }
};

/// Distance from eta to the rigid boundaries of `params` (infinity if none).
double boundary_distance(const Field& eta, const PhysicalParams& params);

/// Throws std::invalid_argument if a rigid boundary is within 2h of eta0.
void check_initial_separation(const Field& eta0, const PhysicalParams& params, double h);

/// Time loop with monitors. Solver failures and separation loss end the run
/// early; the partial trajectory carries the reason.
Trajectory solve(const Field& eta0, const PhysicalParams& params, const SolveConfig& cfg,
                 const ModelConfig& model_cfg = {});
Trajectory solve(const Field& eta0, MuskatModel& model, const SolveConfig& cfg);

struct PicardConfig {
  double T = 1.0;
  double dt = 0.0;           ///< time grid spacing; 0 selects default_dt
  double tol = 1e-8;         ///< relative X^s distance between iterates (roundoff floor ~1e-9 at n = 128)
  int max_iter = 50;
  int stall_window = 3;
  double gate = 0.1;         ///< smallness gate on ||eta0||_{H^s}
  double regularity = 2.0;
};

struct PicardResult {
  Trajectory trajectory;
  int iterations = 0;
  std::vector<double> distances;
};

/// Fixed-point iteration on the time-discretized Duhamel formula
///     eta(t_i) = e^{-t_i L} eta0 + int_0^{t_i} e^{-(t_i - tau) L} N(eta(tau)) dtau,
/// with N linearly interpolated between grid times and integrated exactly
/// against the exponential. Throws NotContracting outside the gate or when
/// the iterates diverge.
PicardResult picard_solve(const Field& eta0, const PhysicalParams& params, const PicardConfig& cfg,
                          const ModelConfig& model_cfg = {});

/// sup_i ||u_i||_{H^s} + (sum_i dt_i ||u_i||^2_{H^{s+5/2}})^{1/2} over a
/// sequence of states on the times of a trajectory (left endpoint rule).
double zs_functional(const std::vector<double>& times, const std::vector<Field>& states, double s);

struct StabilityReport {
  std::vector<double> magnitudes;
  std::vector<double> ratios;     ///< Z^s(eta1 - eta2) / ||delta eta0||_{H^s}
  double variation = 0.0;         ///< max ratio / min ratio
  bool exact_match = false;       ///< delta eta0 == 0: both runs coincide

  nlohmann::json to_json() const;
};

/// Runs eta0 and eta0 + m * d / ||d||_{H^s} for every magnitude m.
StabilityReport stability_experiment(const Field& eta0, const Field& direction, double T,
                                     const PhysicalParams& params, const std::vector<double>& magnitudes,
                                     const SolveConfig& cfg = {}, const ModelConfig& model_cfg = {});

struct ScalingReport {
  int lambda = 1;
  double defect = 0.0;      ///< relative H^0 defect
  double reference_time = 0.0;
  double scaled_time = 0.0;
  int steps = 0;

  nlohmann::json to_json() const;
};

/// Compares the run from lambda^{-1} eta0(lambda x) to time T with the
/// rescaled run from eta0 to time lambda^5 T. Requires g = 0, one phase and
/// no rigid boundary; both runs take `steps` steps.
ScalingReport scaling_experiment(const Field& eta0, int lambda, double T, const PhysicalParams& params,
                                 int steps, const ModelConfig& model_cfg = {});

/// manifest.json, monitors.csv and state_%06d.csv in `dir`.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const nlohmann::json& manifest,
                      const std::vector<double>& sobolev_indices);

}  // namespace muskat
