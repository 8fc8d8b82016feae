#pragma once

#include "muskat/paracalc.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

/// Two algebraically equivalent ways of writing the bending operator.
enum class ElasticForm {
  /// (1+h_x^2)^{-1/2} [ (1+h_x^2)^{-1/2} kappa_x ]_x + kappa^3 / 2
  Curvature,
  /// ( (1+h_x^2)^{-1} (h_x (1+h_x^2)^{-1/2})_x )_xx + 5/2 ( h_x h_xx^2 (1+h_x^2)^{-7/2} )_x
  Divergence,
};

/// kappa = h_xx / (1 + h_x^2)^{3/2}.
Field curvature(const Field& eta);

/// Nonlinear elastic operator E(eta). Derivatives are spectral; every
/// nonlinear combination is formed on a 2x padded grid and truncated.
Field elastic_E(const Field& eta, ElasticForm form = ElasticForm::Curvature);

/// Principal symbol l(x, xi) of E: a degree-4 polynomial in xi whose
/// coefficients are the linearization coefficients of E around eta.
/// Identically-zero coefficient fields are omitted.
OrderedSymbol symbol_ell(const Field& eta);

struct ElasticSplit {
  Field principal;  ///< T_l eta
  Field remainder;  ///< E(eta) - T_l eta
  Field total;      ///< E(eta)
};

ElasticSplit elastic_split(const Field& eta);

/// Closed-form Gateaux derivative d_eta E(eta) applied to `direction`.
Field gateaux_dE(const Field& eta, const Field& direction);

}  // namespace muskat
