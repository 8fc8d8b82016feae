#include "muskat/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace muskat {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

nlohmann::json geometry_json(const Geometry& g) {
  if (!g.is_strip()) return {{"kind", "infinite"}};
  return {{"kind", "flat"}, {"depth", g.depth}};
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(sigma) && sigma > 0.0, "params.sigma must be positive");
  require(std::isfinite(g) && g >= 0.0, "params.g must be non-negative");
  require(std::isfinite(mu_minus) && mu_minus > 0.0, "params.mu_minus must be positive");
  require(std::isfinite(rho_minus) && rho_minus > 0.0, "params.rho_minus must be positive");
  require(std::isfinite(mu_plus) && mu_plus >= 0.0, "params.mu_plus must be non-negative");
  require(std::isfinite(rho_plus) && rho_plus >= 0.0, "params.rho_plus must be non-negative");
  if (phase == Phase::One) {
    require(mu_plus == 0.0 && rho_plus == 0.0, "one-phase runs require mu_plus = rho_plus = 0");
    require(!upper.is_strip(), "one-phase runs have no upper boundary");
  } else {
    require(mu_plus > 0.0, "two-phase runs require mu_plus > 0");
  }
  require(stable() || allow_unstable,
          "rho_plus > rho_minus is the unstable regime; set params.allow_unstable to run it");
}

nlohmann::json PhysicalParams::to_json() const {
  return {{"sigma", sigma},
          {"g", g},
          {"mu_minus", mu_minus},
          {"mu_plus", mu_plus},
          {"rho_minus", rho_minus},
          {"rho_plus", rho_plus},
          {"phase", phase == Phase::One ? "one" : "two"},
          {"lower", geometry_json(lower)},
          {"upper", geometry_json(upper)},
          {"allow_unstable", allow_unstable}};
}

}  // namespace muskat
