#include "muskat/dirichlet_neumann.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "muskat/errors.hpp"
#include "muskat/io.hpp"
#include "muskat/littlewood_paley.hpp"

namespace muskat {
namespace {

constexpr const char* kSubsystem = "dirichlet_neumann";

using Levels = std::vector<Spectrum>;

// Quadratic Lagrange weights of exp(-lambda s) over one sub-interval of a
// three-node panel, for the upward (source at the upper end) and downward
// (source at the lower end) recurrences.
struct Step {
  double decay = 1.0;
  double up[3] = {0, 0, 0};
  double down[3] = {0, 0, 0};
};

class VerticalOperator {
 public:
  VerticalOperator(const PeriodicGrid& grid, const VerticalGrid& zg) : modes_(grid.mode_count()) {
    const auto& z = zg.levels();
    const int intervals = zg.size() - 1;
    steps_.resize(static_cast<std::size_t>(intervals) * modes_);
    for (int i = 0; i < intervals; ++i) {
      const int base = 2 * (i / 2);
      const double t[3] = {z[base], z[base + 1], z[base + 2]};
      const double d = z[i + 1] - z[i];
      for (int m = 0; m < modes_; ++m) {
        const double lambda = grid.abs_wavenumber(m);
        const double M[3] = {exp_moment(lambda, d, 0), exp_moment(lambda, d, 1), exp_moment(lambda, d, 2)};
        Step& st = steps_[static_cast<std::size_t>(i) * modes_ + m];
        st.decay = std::exp(-lambda * d);
        for (int j = 0; j < 3; ++j) {
          const int a = (j + 1) % 3, b = (j + 2) % 3;
          const double den = (t[j] - t[a]) * (t[j] - t[b]);
          const double ua = t[a] - z[i + 1], ub = t[b] - z[i + 1];
          st.up[j] = (M[2] + (ua + ub) * M[1] + ua * ub * M[0]) / den;
          const double da = t[a] - z[i], db = t[b] - z[i];
          st.down[j] = (M[2] - (da + db) * M[1] + da * db * M[0]) / den;
        }
      }
    }
  }

  const Step& step(int interval, int m) const { return steps_[static_cast<std::size_t>(interval) * modes_ + m]; }

 private:
  int modes_;
  std::vector<Step> steps_;
};

// Coefficient fields of one level, sampled on the 2x padded grid.
struct LevelCoefficients {
  std::vector<double> a, b, c;
  double min_jacobian = 1.0;
};

LevelCoefficients level_coefficients(const Spectrum& H, const Spectrum& Hz) {
  LevelCoefficients lc;
  Spectrum hx = H;
  apply_derivative(hx, 1);
  lc.b = padded_values(hx);
  lc.a = padded_values(Hz);
  lc.c.resize(lc.a.size());
  for (std::size_t j = 0; j < lc.a.size(); ++j) {
    const double a = lc.a[j], b = lc.b[j];
    lc.c[j] = (b * b - a) / (1.0 + a);
    lc.min_jacobian = std::min(lc.min_jacobian, 1.0 + a);
  }
  return lc;
}

void level_q(const LevelCoefficients& lc, const Spectrum& v, const Spectrum& vz, Spectrum& qa, Spectrum& qb) {
  Spectrum vx = v;
  apply_derivative(vx, 1);
  const auto px = padded_values(vx);
  const auto pz = padded_values(vz);
  std::vector<double> fa(px.size()), fb(px.size());
  for (std::size_t j = 0; j < px.size(); ++j) {
    fa[j] = lc.b[j] * px[j] - lc.c[j] * pz[j];
    fb[j] = lc.b[j] * pz[j] - lc.a[j] * px[j];
  }
  qa = truncate_padded(fa, v.grid());
  qb = truncate_padded(fb, v.grid());
  apply_hilbert_derivative(qb);
}

// Lift profiles of one mode and their z-derivatives, written with decaying
// exponentials only.
struct Profile {
  double value;
  double slope;
};

Profile lift_profile(double lambda, double z, const Geometry& geom, bool flattening) {
  if (!geom.is_strip()) {
    const double e = std::exp(z * lambda);
    return {e, lambda * e};
  }
  const double h = geom.depth;
  if (lambda == 0.0) return flattening ? Profile{(z + h) / h, 1.0 / h} : Profile{1.0, 0.0};
  const double e = std::exp(z * lambda);
  const double refl = std::exp(-2.0 * (z + h) * lambda);
  const double minus = -std::expm1(-2.0 * (z + h) * lambda);
  const double bottom = std::exp(-2.0 * h * lambda);
  if (flattening) {
    // sinh((z+h) lambda) / sinh(h lambda)
    const double den = -std::expm1(-2.0 * h * lambda);
    return {e * minus / den, lambda * e * (1.0 + refl) / den};
  }
  // cosh((z+h) lambda) / cosh(h lambda)
  return {e * (1.0 + refl) / (1.0 + bottom), lambda * e * minus / (1.0 + bottom)};
}

// Lift of a boundary datum and its z-derivative. `flattening` selects the
// sinh profile in a strip; otherwise the cosh (Neumann) profile is used.
void lift(const Spectrum& s, const VerticalGrid& zg, const Geometry& geom, bool flattening, Levels& out,
          Levels& out_z) {
  const auto& grid = s.grid();
  out.assign(zg.size(), Spectrum(grid));
  out_z.assign(zg.size(), Spectrum(grid));
  for (int l = 0; l < zg.size(); ++l) {
    for (int m = 0; m < grid.mode_count(); ++m) {
      const auto p = lift_profile(grid.abs_wavenumber(m), zg.levels()[l], geom, flattening);
      out[l][m] = p.value * s[m];
      out_z[l][m] = p.slope * s[m];
    }
  }
}

std::vector<Field> to_fields(const Levels& levels) {
  std::vector<Field> out;
  out.reserve(levels.size());
  for (const auto& s : levels) out.push_back(to_field(s));
  return out;
}

double h1_sq(const Spectrum& s) {
  const auto& g = s.grid();
  double acc = std::norm(s[0]);
  for (int m = 1; m < g.mode_count(); ++m) {
    const double k = g.abs_wavenumber(m);
    const double mult = (m == g.size() / 2) ? 1.0 : 2.0;
    acc += mult * (1.0 + k * k) * std::norm(s[m]);
  }
  return acc;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace

VerticalGrid::VerticalGrid(std::vector<double> edges) {
  if (edges.size() < 2) throw std::invalid_argument("vertical grid needs at least one panel");
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    if (!(hi > lo)) throw std::invalid_argument("vertical panel edges must increase");
    const double d = hi - lo;
    if (p == 0) {
      levels_.push_back(lo);
      weights_.push_back(0.0);
    }
    levels_.push_back(0.5 * (lo + hi));
    levels_.push_back(hi);
    weights_.back() += d / 6.0;
    weights_.push_back(4.0 * d / 6.0);
    weights_.push_back(d / 6.0);
  }
  levels_.back() = 0.0;
}

VerticalGrid VerticalGrid::geometric(double depth, int panels, double top_width) {
  if (!(depth > 0.0) || panels < 1 || !(top_width > 0.0))
    throw std::invalid_argument("geometric vertical grid needs depth > 0, panels >= 1, top_width > 0");
  double ratio = 1.0;
  if (top_width * panels < depth) {
    // Solve top_width * (r^P - 1) / (r - 1) = depth for r > 1.
    auto total = [&](double r) { return top_width * (std::pow(r, panels) - 1.0) / (r - 1.0); };
    double lo = 1.0 + 1e-12, hi = 2.0;
    while (total(hi) < depth) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (total(mid) < depth ? lo : hi) = mid;
    }
    ratio = 0.5 * (lo + hi);
  } else {
    top_width = depth / panels;
  }
  std::vector<double> edges(panels + 1);
  edges[panels] = 0.0;
  double width = top_width;
  for (int p = panels - 1; p >= 0; --p) {
    edges[p] = edges[p + 1] - width;
    width *= ratio;
  }
  edges[0] = -depth;
  return VerticalGrid(std::move(edges));
}

VerticalGrid VerticalGrid::cosine(double depth, int panels) {
  if (!(depth > 0.0) || panels < 1) throw std::invalid_argument("cosine vertical grid needs depth > 0, panels >= 1");
  std::vector<double> edges(panels + 1);
  for (int p = 0; p <= panels; ++p)
    edges[p] = -depth * 0.5 * (1.0 + std::cos(std::numbers::pi * p / panels));
  edges[0] = -depth;
  edges[panels] = 0.0;
  return VerticalGrid(std::move(edges));
}

Geometry Geometry::strip(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("strip depth must be positive");
  return {Kind::Strip, h};
}

VerticalGrid make_vertical_grid(const PeriodicGrid& grid, const Geometry& geom, const DNConfig& cfg) {
  if (geom.is_strip()) return VerticalGrid::cosine(geom.depth, cfg.panels);
  const double kmin = grid.fundamental();
  double depth = cfg.depth;
  if (depth <= 0.0) depth = std::log(1.0 / cfg.tail_tol) / kmin;
  const double tail = std::exp(-depth * kmin);
  if (tail > cfg.tail_tol) {
    std::ostringstream msg;
    msg << "exp(-Z k_min) = " << tail << " exceeds tail tolerance " << cfg.tail_tol << " at Z = " << depth;
    throw SolverError(SolverErrorKind::DepthTruncationInsufficient, kSubsystem, msg.str());
  }
  return VerticalGrid::geometric(depth, cfg.panels, 0.5 / grid.max_wavenumber());
}

std::vector<Field> harmonic_lift(const Field& f, const VerticalGrid& zgrid, const Geometry& geom) {
  Levels v, vz;
  lift(to_spectrum(f), zgrid, geom, false, v, vz);
  return to_fields(v);
}

std::vector<Field> flattening_lift(const Field& eta, const VerticalGrid& zgrid, const Geometry& geom) {
  Levels h, hz;
  lift(to_spectrum(eta), zgrid, geom, true, h, hz);
  return to_fields(h);
}

void ExtensionState::write_csv(std::ostream& out) const {
  out << "x,z,v\n";
  for (int l = 0; l < zgrid.size(); ++l) {
    const Field& f = v[l];
    for (int j = 0; j < f.size(); ++j)
      out << format_number(f.grid().node(j)) << ',' << format_number(zgrid.levels()[l]) << ','
          << format_number(f[j]) << '\n';
  }
}

void ExtensionState::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_csv(out);
}

QTerms q_terms(const ExtensionState& state, double min_jacobian) {
  const int levels = state.zgrid.size();
  if (static_cast<int>(state.v.size()) != levels || state.vz.size() != state.v.size() ||
      state.H.size() != state.v.size() || state.Hz.size() != state.v.size())
    throw std::invalid_argument("q_terms: extension state is inconsistent with its vertical grid");
  QTerms out;
  for (int l = 0; l < levels; ++l) {
    const auto lc = level_coefficients(to_spectrum(state.H[l]), to_spectrum(state.Hz[l]));
    if (lc.min_jacobian < min_jacobian) {
      std::ostringstream msg;
      msg << "min(1 + H_z) = " << lc.min_jacobian << " at z = " << state.zgrid.levels()[l];
      throw SolverError(SolverErrorKind::DegenerateJacobian, kSubsystem, msg.str());
    }
    Spectrum qa(state.v[l].grid()), qb(state.v[l].grid());
    level_q(lc, to_spectrum(state.v[l]), to_spectrum(state.vz[l]), qa, qb);
    out.qa.push_back(to_field(qa));
    out.qb.push_back(to_field(qb));
  }
  return out;
}

nlohmann::json DNResult::report() const {
  return {{"iterations", iterations},
          {"converged", converged},
          {"residuals", residuals},
          {"tail_bound", tail_bound}};
}

DNResult dn_fixed_point(const Field& eta, const Field& f, const Geometry& geom, const DNConfig& cfg,
                        ExtensionState* state) {
  require_same_grid(eta, f, "dn_fixed_point");
  const auto& grid = f.grid();
  const auto proxy = lipschitz_norms(eta).w1eps;
  if (proxy > cfg.contraction_gate) {
    std::ostringstream msg;
    msg << "W^{1+1/2,inf} proxy of eta is " << proxy << ", above the contraction gate " << cfg.contraction_gate;
    throw SolverError(SolverErrorKind::NotContracting, kSubsystem, msg.str());
  }
  const VerticalGrid zg = make_vertical_grid(grid, geom, cfg);
  const VerticalOperator op(grid, zg);
  const int levels = zg.size();
  const int modes = grid.mode_count();
  const int top = levels - 1;

  Levels H, Hz;
  lift(to_spectrum(eta), zg, geom, true, H, Hz);
  std::vector<LevelCoefficients> coeffs;
  coeffs.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    coeffs.push_back(level_coefficients(H[l], Hz[l]));
    if (coeffs.back().min_jacobian < cfg.min_jacobian) {
      std::ostringstream msg;
      msg << "min(1 + H_z) = " << coeffs.back().min_jacobian << " at z = " << zg.levels()[l];
      throw SolverError(SolverErrorKind::DegenerateJacobian, kSubsystem, msg.str());
    }
  }

  const Spectrum fs = to_spectrum(f);
  Levels v, vz;
  lift(fs, zg, geom, false, v, vz);
  Levels qa(levels, Spectrum(grid)), qb(levels, Spectrum(grid)), w(levels, Spectrum(grid));
  Levels next(levels, Spectrum(grid));

  DNResult result{Field(grid), Field(grid), 0, false, {}, 0.0};
  result.tail_bound = geom.is_strip() ? 0.0 : std::exp(-zg.depth() * grid.fundamental());
  int stalled = 0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    for (int l = 0; l < levels; ++l) level_q(coeffs[l], v[l], vz[l], qa[l], qb[l]);

    // Upward sweep: w_z + lambda w = lambda (Q_b - Q_a), w = 0 at the bottom.
    for (int m = 0; m < modes; ++m) w[0][m] = 0.0;
    for (int i = 0; i < top; ++i) {
      const int base = 2 * (i / 2);
      for (int m = 0; m < modes; ++m) {
        const Step& st = op.step(i, m);
        Complex src = 0.0;
        for (int j = 0; j < 3; ++j) src += st.up[j] * (qb[base + j][m] - qa[base + j][m]);
        w[i + 1][m] = st.decay * w[i][m] + grid.abs_wavenumber(m) * src;
      }
    }
    // Downward sweep: v_z - lambda v = w + Q_a, v = f at the top.
    for (int m = 0; m < modes; ++m) next[top][m] = fs[m];
    for (int i = top - 1; i >= 0; --i) {
      const int base = 2 * (i / 2);
      for (int m = 0; m < modes; ++m) {
        const Step& st = op.step(i, m);
        Complex src = 0.0;
        for (int j = 0; j < 3; ++j) src += st.down[j] * (w[base + j][m] + qa[base + j][m]);
        next[i][m] = st.decay * next[i + 1][m] - src;
      }
    }
    if (geom.is_strip()) {
      // Homogeneous correction enforcing v_z = 0 at z = -h (mode by mode).
      const double h = geom.depth;
      for (int m = 1; m < modes; ++m) {
        const double lambda = grid.abs_wavenumber(m);
        const Complex vz_bottom = lambda * next[0][m] + qa[0][m];
        const Complex c = -2.0 * vz_bottom / (1.0 + std::exp(-2.0 * h * lambda));
        for (int l = 0; l < levels; ++l) {
          const double z = zg.levels()[l];
          const double down = std::exp(-(z + h) * lambda);
          w[l][m] += c * down;
          next[l][m] -= c * (down - std::exp((z - h) * lambda)) / (2.0 * lambda);
        }
      }
    }

    double diff = 0.0, norm = 0.0;
    for (int l = 0; l < levels; ++l) {
      Spectrum delta = next[l];
      for (int m = 0; m < modes; ++m) delta[m] -= v[l][m];
      diff += zg.weights()[l] * h1_sq(delta);
      norm += zg.weights()[l] * h1_sq(next[l]);
    }
    const double residual = norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
    std::swap(v, next);
    for (int l = 0; l < levels; ++l)
      for (int m = 0; m < modes; ++m) vz[l][m] = grid.abs_wavenumber(m) * v[l][m] + w[l][m] + qa[l][m];

    if (!std::isfinite(residual))
      throw SolverError(SolverErrorKind::NotContracting, kSubsystem, "non-finite residual");
    if (!result.residuals.empty() && residual >= result.residuals.back()) {
      if (++stalled >= cfg.stall_window) {
        std::ostringstream msg;
        msg << "residual did not decrease for " << stalled << " consecutive iterations (last " << residual << ")";
        throw SolverError(SolverErrorKind::NotContracting, kSubsystem, msg.str());
      }
    } else {
      stalled = 0;
    }
    result.residuals.push_back(residual);
    result.iterations = it;
    if (residual < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  // G- f = |D| f + w(0) with w from the final source terms.
  Spectrum gf(grid), rem(grid);
  for (int m = 0; m < modes; ++m) {
    rem[m] = w[top][m];
    gf[m] = grid.abs_wavenumber(m) * fs[m] + w[top][m];
  }
  gf[0] = 0.0;
  rem[0] = 0.0;
  result.gf = to_field(gf);
  result.remainder = to_field(rem);

  if (state) {
    state->zgrid = zg;
    state->v = to_fields(v);
    state->vz = to_fields(vz);
    state->H = to_fields(H);
    state->Hz = to_fields(Hz);
    state->residuals = result.residuals;
  }
  return result;
}

DNResult dn_upper(const Field& eta, const Field& f, const Geometry& geom, const DNConfig& cfg) {
  DNResult r = dn_fixed_point(-eta, f, geom, cfg);
  r.gf = -r.gf;
  r.remainder = r.gf + abs_derivative(f, 1.0);
  return r;
}

Field oracle_dn(const Field& eta, const Field& f, const Geometry& geom, const OracleResolution& res) {
  require_same_grid(eta, f, "oracle_dn");
  const PeriodicGrid fine(res.nx, f.grid().length());
  const int nx = res.nx, nz = res.nz;
  if (nz < 3) throw std::invalid_argument("oracle_dn: need at least 3 vertical intervals");
  const double D = geom.is_strip() ? geom.depth : res.depth;
  if (!(D > 0.0)) throw std::invalid_argument("oracle_dn: depth must be positive");

  const Field h = resample(eta, fine);
  const Field top = resample(f, fine);
  const Field hx = derivative(h, 1);
  const Field hxx = derivative(h, 2);
  if (*std::min_element(h.values().begin(), h.values().end()) <= -D)
    throw SolverError(SolverErrorKind::SingularSystem, "oracle_dn", "interface reaches the truncation depth");

  const double dx = fine.spacing(), dz = D / nz;
  const int unknowns = nx * nz;
  auto id = [&](int i, int j) { return j * nx + ((i % nx) + nx) % nx; };

  // Dense |D| on the bottom row for the decaying-solution condition.
  std::vector<double> absd;
  if (!geom.is_strip()) {
    absd.resize(static_cast<std::size_t>(nx) * nx);
    for (int c = 0; c < nx; ++c) {
      Field e(fine);
      e[c] = 1.0;
      const Field col = abs_derivative(e, 1.0);
      for (int r = 0; r < nx; ++r) absd[static_cast<std::size_t>(r) * nx + c] = col[r];
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(unknowns) * 10 + (geom.is_strip() ? 0 : nx * nx));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);

  for (int j = 0; j < nz; ++j) {
    const double z = -D + j * dz;
    const double s = 1.0 + z / D;
    for (int i = 0; i < nx; ++i) {
      const int row = id(i, j);
      const double rz = 1.0 + h[i] / D;
      const double rx = hx[i] * s;
      const double A = rz;
      const double B = -2.0 * rx;
      const double C = (1.0 + rx * rx) / rz;
      const double E = 2.0 * rx * hx[i] / (D * rz) - hxx[i] * s;

      auto add = [&](int ii, int jj, double coeff) {
        if (coeff == 0.0) return;
        if (jj == nz) {
          rhs[row] -= coeff * top[((ii % nx) + nx) % nx];
        } else if (jj == -1) {
          // Ghost level below the bottom (only reached with ii == i since B = 0 there).
          trip.emplace_back(row, id(ii, 1), coeff);
          if (!geom.is_strip()) {
            for (int c = 0; c < nx; ++c)
              trip.emplace_back(row, id(c, 0), -coeff * 2.0 * dz * rz * absd[static_cast<std::size_t>(i) * nx + c]);
          }
        } else {
          trip.emplace_back(row, id(ii, jj), coeff);
        }
      };

      add(i + 1, j, A / (dx * dx));
      add(i - 1, j, A / (dx * dx));
      add(i, j, -2.0 * A / (dx * dx) - 2.0 * C / (dz * dz));
      add(i, j + 1, C / (dz * dz) + E / (2.0 * dz));
      add(i, j - 1, C / (dz * dz) - E / (2.0 * dz));
      const double cross = B / (4.0 * dx * dz);
      add(i + 1, j + 1, cross);
      add(i - 1, j + 1, -cross);
      add(i + 1, j - 1, -cross);
      add(i - 1, j - 1, cross);
    }
  }

  Eigen::SparseMatrix<double> mat(unknowns, unknowns);
  mat.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(mat);
  if (lu.info() != Eigen::Success)
    throw SolverError(SolverErrorKind::SingularSystem, "oracle_dn", "sparse LU factorization failed");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite())
    throw SolverError(SolverErrorKind::SingularSystem, "oracle_dn", "sparse solve failed");

  Field g(fine);
  for (int i = 0; i < nx; ++i) {
    const double vz = (3.0 * top[i] - 4.0 * sol[id(i, nz - 1)] + sol[id(i, nz - 2)]) / (2.0 * dz);
    const double vx = (top[(i + 1) % nx] - top[(i + nx - 1) % nx]) / (2.0 * dx);
    const double rz = 1.0 + h[i] / D;
    g[i] = (1.0 + hx[i] * hx[i]) / rz * vz - hx[i] * vx;
  }
  return resample(g, f.grid());
}

ShapeDifference dn_shape_difference(const Field& eta1, const Field& eta2, const Field& f, const Geometry& geom,
                                    const DNConfig& cfg) {
  require_same_grid(eta1, eta2, "dn_shape_difference");
  ShapeDifference out{dn_fixed_point(eta1, f, geom, cfg).gf - dn_fixed_point(eta2, f, geom, cfg).gf};
  const double deta = sobolev_norm(eta1 - eta2, 2.0);
  out.ratio = deta > 0.0 ? sobolev_norm(out.difference, 0.0) / deta : 0.0;
  return out;
}

}  // namespace muskat
