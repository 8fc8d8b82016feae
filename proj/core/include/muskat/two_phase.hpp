#pragma once

// Interface pressures of the two-phase problem. With J = sigma E(eta) +
// g (rho- - rho+) eta the traces f- and f+ satisfy
//
//     f- - f+ = J,     (1/mu+) G+(eta) f+ = (1/mu-) G-(eta) f-,     mean(f-) = 0.
//
// Eliminating f+ gives f- = u0 + K f- with
//
//     u0  = -(mu- / (mu+ + mu-)) |D|^{-1} G+(eta) J,
//     K f = (mu- |D|^{-1} R+(eta) f - mu+ |D|^{-1} R-(eta) f) / (mu+ + mu-).

#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/dirichlet_neumann.hpp"
#include "muskat/params.hpp"

namespace muskat {

struct PressureConfig {
  DNConfig dn{.tol = 1e-12};
  double tol = 1e-12;     ///< relative successive-iterate H^0 residual
  int max_iter = 100;
  int stall_window = 5;
  double gate = 0.1;      ///< smallness gate on ||eta||_{H^2}
  int oracle_modes = 0;   ///< basis size of the dense oracle; 0 uses every mode
};

struct PressurePair {
  Field f_minus;
  Field f_plus;
  double jump_residual = 0.0;  ///< ||f- - f+ - J||_{H^0} / ||J||_{H^0}
  double flux_residual = 0.0;  ///< ||G+ f+ / mu+ - G- f- / mu-||_{H^0} / ||G- f- / mu-||_{H^0}
  int iterations = 0;
  bool converged = false;
  bool used_oracle = false;
  double condition = 0.0;      ///< dense oracle only
  std::vector<double> residuals;

  nlohmann::json report() const;
};

/// J = sigma E(eta) + g (rho- - rho+) eta.
Field pressure_jump(const Field& eta, const PhysicalParams& params);

/// u0, with zero mode removed.
Field pressure_forcing(const Field& eta, const PhysicalParams& params, const DNConfig& dn = {.tol = 1e-12});

/// Picard iteration f <- u0 + K f. Throws NotContracting outside the
/// smallness gate or when the residuals stall.
PressurePair pressure_fixed_point(const Field& eta, const PhysicalParams& params, const PressureConfig& cfg = {});

/// Dense least-squares solve of the flux-matching equation on a mean-free
/// real Fourier basis, with G+ and G- assembled column by column. Throws
/// SingularSystem with the condition estimate when the system is singular.
PressurePair pressure_oracle(const Field& eta, const PhysicalParams& params, const PressureConfig& cfg = {});

/// Fixed point inside the gate, dense oracle otherwise (used_oracle = true).
PressurePair pressure_solve(const Field& eta, const PhysicalParams& params, const PressureConfig& cfg = {});

}  // namespace muskat
