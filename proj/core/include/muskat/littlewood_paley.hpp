#pragma once

#include "muskat/spectral.hpp"

namespace muskat {

/// Dyadic Littlewood-Paley partition on a periodic grid.
///
/// With chi(r) = 1 for r <= 1, 0 for r >= 2 and a raised-cosine transition in
/// log2(r) between, S_j = chi(|k| / 2^j), P_0 = S_0 and P_j = S_j - S_{j-1}.
/// P_0 covers |k| <= 1 and P_j (j >= 1) lives in 2^{j-1} <= |k| <= 2^{j+1}.
/// The top block absorbs every remaining mode, so sum_j P_j = I exactly.
class DyadicPartition {
 public:
  explicit DyadicPartition(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  /// Blocks are indexed 0 .. block_count() - 1.
  int block_count() const noexcept { return blocks_; }
  /// Weight of block j at slot m.
  double weight(int j, int m) const;
  /// Symbol of S_j (sum of blocks 0..j) at slot m; 0 for j < 0.
  double low_weight(int j, int m) const;

  Field project(const Field& f, int j) const;
  Field low_pass(const Field& f, int j) const;
  void project(Spectrum& s, int j) const;
  void low_pass(Spectrum& s, int j) const;

 private:
  PeriodicGrid grid_;
  int blocks_;
};

double dyadic_cutoff(double r);

Field lp_project(const Field& f, int j);

/// sup_j 2^{js} ||P_j f||_inf.
double zygmund_norm(const Field& f, double s);

struct LipschitzNorms {
  double lipschitz = 0.0;  ///< ||f_x||_inf
  double w1eps = 0.0;      ///< ||f_x||_inf + sup_{j>=1} 2^{j eps} ||P_j f_x||_inf
};

/// Lipschitz monitors with the W^{1+eps,inf} proxy at eps = 1/2.
LipschitzNorms lipschitz_norms(const Field& f, double eps = 0.5);

}  // namespace muskat
