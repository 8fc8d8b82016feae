#pragma once

#include <nlohmann/json.hpp>

#include "muskat/dirichlet_neumann.hpp"

namespace muskat {

enum class Phase { One, Two };

struct PhysicalParams {
  double sigma = 1.0;      ///< flexural rigidity
  double g = 0.0;          ///< gravity
  double mu_minus = 1.0;
  double mu_plus = 0.0;
  double rho_minus = 1.0;
  double rho_plus = 0.0;
  Phase phase = Phase::One;
  Geometry lower = Geometry::infinite();  ///< fluid below: bottomless or flat bottom at -h-
  Geometry upper = Geometry::infinite();  ///< fluid above (two-phase): bottomless or flat top at +h+
  bool allow_unstable = false;            ///< required when rho+ > rho-

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool stable() const noexcept { return rho_plus <= rho_minus; }
  double delta_rho() const noexcept { return rho_minus - rho_plus; }
  /// mu- (one-phase) or mu+ + mu- (two-phase).
  double mu_eff() const noexcept { return phase == Phase::One ? mu_minus : mu_plus + mu_minus; }

  nlohmann::json to_json() const;
};

}  // namespace muskat
