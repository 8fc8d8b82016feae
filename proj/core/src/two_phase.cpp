#include "muskat/two_phase.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "muskat/elastic.hpp"
#include "muskat/errors.hpp"

namespace muskat {
namespace {

constexpr const char* kSubsystem = "two_phase";

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : num; }

Field inverse_abs(const Field& f) { return fractional_multiplier(f, MultiplierKind::InverseAbs); }

Field without_mean(Field f) {
  const double m = mean(f);
  for (double& v : f.values()) v -= m;
  return f;
}

void require_two_phase(const PhysicalParams& params) {
  params.validate();
  if (params.phase != Phase::Two) throw std::invalid_argument("pressure solve needs two-phase parameters");
}

void fill_residuals(PressurePair& p, const Field& eta, const PhysicalParams& params, const DNConfig& dn) {
  const Field jump = pressure_jump(eta, params);
  p.jump_residual = ratio_or_zero(sobolev_norm(p.f_minus - p.f_plus - jump, 0.0), sobolev_norm(jump, 0.0));
  const Field lower = (1.0 / params.mu_minus) * dn_fixed_point(eta, p.f_minus, params.lower, dn).gf;
  const Field upper = (1.0 / params.mu_plus) * dn_upper(eta, p.f_plus, params.upper, dn).gf;
  p.flux_residual = ratio_or_zero(sobolev_norm(upper - lower, 0.0), sobolev_norm(lower, 0.0));
}

}  // namespace

nlohmann::json PressurePair::report() const {
  return {{"jump_residual", jump_residual}, {"flux_residual", flux_residual}, {"iterations", iterations},
          {"converged", converged},         {"used_oracle", used_oracle},     {"condition", condition},
          {"residuals", residuals}};
}

Field pressure_jump(const Field& eta, const PhysicalParams& params) {
  return params.sigma * elastic_E(eta) + (params.g * params.delta_rho()) * eta;
}

Field pressure_forcing(const Field& eta, const PhysicalParams& params, const DNConfig& dn) {
  require_two_phase(params);
  const double share = params.mu_minus / (params.mu_plus + params.mu_minus);
  const Field gj = dn_upper(eta, pressure_jump(eta, params), params.upper, dn).gf;
  return without_mean(-share * inverse_abs(gj));
}

PressurePair pressure_fixed_point(const Field& eta, const PhysicalParams& params, const PressureConfig& cfg) {
  require_two_phase(params);
  const double size = sobolev_norm(eta, 2.0);
  if (size >= cfg.gate) {
    std::ostringstream msg;
    msg << "||eta||_{H^2} = " << size << " is outside the smallness gate " << cfg.gate;
    throw SolverError(SolverErrorKind::NotContracting, kSubsystem, msg.str());
  }
  const double total = params.mu_plus + params.mu_minus;
  const Field u0 = pressure_forcing(eta, params, cfg.dn);

  PressurePair out{u0, u0, 0.0, 0.0, 0, false, false, 0.0, {}};
  Field phi = u0;
  int stalled = 0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Field rplus = dn_upper(eta, phi, params.upper, cfg.dn).remainder;
    const Field rminus = dn_fixed_point(eta, phi, params.lower, cfg.dn).remainder;
    Field next = u0 + (1.0 / total) * inverse_abs(params.mu_minus * rplus - params.mu_plus * rminus);
    next = without_mean(std::move(next));
    const double scale = sobolev_norm(next, 0.0);
    const double diff = sobolev_norm(next - phi, 0.0);
    const double residual = scale > 0.0 ? diff / scale : diff;
    phi = std::move(next);
    if (!std::isfinite(residual))
      throw SolverError(SolverErrorKind::NotContracting, kSubsystem, "non-finite pressure residual");
    if (!out.residuals.empty() && residual >= out.residuals.back() && residual > 0.0) {
      if (++stalled >= cfg.stall_window) {
        std::ostringstream msg;
        msg << "pressure residual did not decrease for " << stalled << " iterations (last " << residual << ")";
        throw SolverError(SolverErrorKind::NotContracting, kSubsystem, msg.str());
      }
    } else {
      stalled = 0;
    }
    out.residuals.push_back(residual);
    out.iterations = it;
    if (residual < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.f_minus = phi;
  out.f_plus = phi - pressure_jump(eta, params);
  fill_residuals(out, eta, params, cfg.dn);
  return out;
}

PressurePair pressure_oracle(const Field& eta, const PhysicalParams& params, const PressureConfig& cfg) {
  require_two_phase(params);
  const auto& grid = eta.grid();
  const int n = grid.size();
  const int kmax = cfg.oracle_modes > 0 ? std::min(cfg.oracle_modes, n / 2) : n / 2;

  // Mean-free real basis: cos(kx), sin(kx) for k < n/2 and cos(n x / 2).
  std::vector<Field> basis;
  const double k0 = grid.fundamental();
  for (int k = 1; k <= kmax; ++k) {
    basis.push_back(Field::from_function(grid, [&](double x) { return std::cos(k * k0 * x); }));
    if (k < n / 2) basis.push_back(Field::from_function(grid, [&](double x) { return std::sin(k * k0 * x); }));
  }
  const int cols = static_cast<int>(basis.size());
  Eigen::MatrixXd A(n, cols);
  for (int c = 0; c < cols; ++c) {
    const Field lower = dn_fixed_point(eta, basis[c], params.lower, cfg.dn).gf;
    const Field upper = dn_upper(eta, basis[c], params.upper, cfg.dn).gf;
    for (int r = 0; r < n; ++r) A(r, c) = params.mu_plus * lower[r] - params.mu_minus * upper[r];
  }
  // mu+ G- f- - mu- G+ f- = -mu- G+ J
  const Field jump = pressure_jump(eta, params);
  const Field gj = dn_upper(eta, jump, params.upper, cfg.dn).gf;
  Eigen::VectorXd b(n);
  for (int r = 0; r < n; ++r) b[r] = -params.mu_minus * gj[r];

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv[0], smin = sv[sv.size() - 1];
  PressurePair out{Field(grid), Field(grid), 0.0, 0.0, 0, false, false, 0.0, {}};
  out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smin > 1e-13 * smax)) {
    std::ostringstream msg;
    msg << "flux-matching system is singular (condition estimate " << out.condition << ")";
    throw SolverError(SolverErrorKind::SingularSystem, kSubsystem, msg.str());
  }
  const Eigen::VectorXd coef = svd.solve(b);
  Field fm(grid);
  for (int c = 0; c < cols; ++c) fm += coef[c] * basis[c];
  out.f_minus = without_mean(std::move(fm));
  out.f_plus = out.f_minus - jump;
  out.iterations = 1;
  out.converged = true;
  out.used_oracle = true;
  fill_residuals(out, eta, params, cfg.dn);
  return out;
}

PressurePair pressure_solve(const Field& eta, const PhysicalParams& params, const PressureConfig& cfg) {
  try {
    return pressure_fixed_point(eta, params, cfg);
  } catch (const SolverError& e) {
    if (e.kind() != SolverErrorKind::NotContracting || e.subsystem() != kSubsystem) throw;
  }
  return pressure_oracle(eta, params, cfg);
}

}  // namespace muskat
