#pragma once

// Dirichlet-Neumann operators of a graph interface y = eta(x) bounding a
// fluid below (G-) or above (G+), normalized as sqrt(1 + eta_x^2) times the
// normal derivative along the common upward normal:
//
//     G-(eta) f =  |D| f + R-(eta) f,      G+(eta) f = -|D| f + R+(eta) f.
//
// G- is computed by flattening the fluid domain with rho(x, z) = z + H(x, z),
// H the harmonic lift of eta, and iterating on the resulting first-order
// system in z. With lambda = |k|, a = H_z, b = H_x and
//
//     Q_a = b v_x - (b^2 - a) / (1 + a) v_z,
//     Q_b = |D|^{-1} d_x (b v_z - a v_x),
//
// each mode satisfies v_z = lambda v + w + Q_a, where w solves
// w_z + lambda w = lambda (Q_b - Q_a) with w = 0 at the bottom. Then
// G- f = lambda f + w(0), so R- f = w(0).

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/spectral.hpp"

namespace muskat {

/// Nodes of a composite three-point rule on [-depth, 0]. Consecutive panels
/// share endpoints, so there are 2 * panels + 1 levels.
class VerticalGrid {
 public:
  VerticalGrid() = default;

  /// Panel widths grow geometrically from `top_width` at z = 0.
  static VerticalGrid geometric(double depth, int panels, double top_width);
  /// Panel edges at -depth (1 + cos(pi t)) / 2, t = 0..1: clustered at both ends.
  static VerticalGrid cosine(double depth, int panels);

  int size() const noexcept { return static_cast<int>(levels_.size()); }
  int panels() const noexcept { return (size() - 1) / 2; }
  double depth() const noexcept { return -levels_.front(); }
  const std::vector<double>& levels() const noexcept { return levels_; }
  /// Composite Simpson weights; exact for cubics on each panel.
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  explicit VerticalGrid(std::vector<double> edges);
  std::vector<double> levels_;
  std::vector<double> weights_;
};

struct Geometry {
  enum class Kind { Infinite, Strip };
  Kind kind = Kind::Infinite;
  double depth = 0.0;  ///< strip depth h; unused when infinite

  static Geometry infinite() { return {}; }
  static Geometry strip(double h);
  bool is_strip() const noexcept { return kind == Kind::Strip; }
};

struct DNConfig {
  double tol = 1e-10;               ///< relative successive-iterate H^1 residual
  int max_iter = 60;
  int stall_window = 5;             ///< non-decreasing residuals tolerated
  double contraction_gate = 1.0;    ///< bound on the W^{1+1/2,inf} proxy of eta
  double min_jacobian = 0.1;        ///< bound on min(1 + H_z)
  double tail_tol = 1e-10;          ///< bound on exp(-Z k_min), infinite depth
  double depth = 0.0;               ///< truncation depth Z; 0 picks it from tail_tol
  int panels = 32;
};

/// Vertical grid used by dn_fixed_point for this geometry and grid.
VerticalGrid make_vertical_grid(const PeriodicGrid& grid, const Geometry& geom, const DNConfig& cfg);

/// Harmonic extension of f: e^{z|D|} f, or cosh((z+h)|D|)/cosh(h|D|) f in a
/// strip (zero normal derivative at the bottom). One field per level.
std::vector<Field> harmonic_lift(const Field& f, const VerticalGrid& zgrid, const Geometry& geom);

/// Flattening lift of eta: e^{z|D|} eta, or sinh((z+h)|D|)/sinh(h|D|) eta in
/// a strip, so that the bottom stays at z = -h.
std::vector<Field> flattening_lift(const Field& eta, const VerticalGrid& zgrid, const Geometry& geom);

struct ExtensionState {
  VerticalGrid zgrid;
  std::vector<Field> v;   ///< flattened potential per level
  std::vector<Field> vz;  ///< its z-derivative
  std::vector<Field> H;   ///< flattening lift per level
  std::vector<Field> Hz;  ///< d_z H per level
  std::vector<double> residuals;

  /// CSV with header x,z,v.
  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;
};

struct QTerms {
  std::vector<Field> qa;
  std::vector<Field> qb;
};

/// Source terms of the flattened Laplace equation. Throws DegenerateJacobian
/// if min(1 + H_z) falls below `min_jacobian`.
QTerms q_terms(const ExtensionState& state, double min_jacobian = 0.1);

struct DNResult {
  Field gf;
  Field remainder;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;
  double tail_bound = 0.0;

  nlohmann::json report() const;
};

/// G-(eta) f for the fluid below the interface.
DNResult dn_fixed_point(const Field& eta, const Field& f, const Geometry& geom = Geometry::infinite(),
                        const DNConfig& cfg = {}, ExtensionState* state = nullptr);

/// G+(eta) f = -G-(-eta) f for the fluid above; `geom` is the upper geometry
/// (a flat top at height h+ is a strip of depth h+). remainder = G+ f + |D| f.
DNResult dn_upper(const Field& eta, const Field& f, const Geometry& geom = Geometry::infinite(),
                  const DNConfig& cfg = {});

struct OracleResolution {
  int nx = 256;         ///< horizontal points (power of two)
  int nz = 64;          ///< vertical intervals
  double depth = 1.0;   ///< truncation depth of the infinite case; ignored for strips
};

/// Second-order finite-difference G-(eta) f on the linearly flattened domain
/// y = z + eta(x)(1 + z/D), z in [-D, 0]. The bottom carries the exact
/// decaying-solution condition phi_y = |D| phi (infinite) or phi_y = 0 (strip).
/// The result is returned on the grid of `f`.
Field oracle_dn(const Field& eta, const Field& f, const Geometry& geom = Geometry::infinite(),
                const OracleResolution& res = {});

struct ShapeDifference {
  Field difference;   ///< G-(eta1) f - G-(eta2) f
  double ratio = 0.0; ///< ||difference||_{H^0} / ||eta1 - eta2||_{H^2}; 0 when eta1 == eta2
};

ShapeDifference dn_shape_difference(const Field& eta1, const Field& eta2, const Field& f,
                                    const Geometry& geom = Geometry::infinite(),
                                    const DNConfig& cfg = {});

}  // namespace muskat
