#ifndef MANCOVA_COVARIANCE_HPP
#define MANCOVA_COVARIANCE_HPP

#include <vector>

#include "mancova/model.hpp"
#include "mancova/types.hpp"

namespace mancova {

// Per-subject residual scale factors for the requested flavor. HC0 is all
// ones. HC4 gives (1 - p_ij)^(-delta_ij / 2) with
// delta_ij = min(4, p_ij / mean leverage); the mean runs over all N
// subjects and uses the unscaled hat diagonals. Throws LeverageAtOne when
// any p_ij >= 1 - 1e-12.
Vector hc_scale_factors(const Vector& hat_diag, HcFlavor flavor);

// Residual vectors scaled per flavor; the same scaled residuals feed both
// the sandwich blocks u u' and the diagonal variances.
Matrix hc_scaled_residuals(const MancovaFit& fit, HcFlavor flavor);

// Upper-left (ap x ap) block of the sandwich
// (X~'X~)^{-1} X~' S^ X~ (X~'X~)^{-1}, computed by rank-one accumulation
// over subjects: sum_ij (g_ij g_ij') (x) (u~_ij u~_ij') restricted to the
// mean coefficients, with g_ij = (X'X)^{-1} x_ij. The Np-dimensional
// block-diagonal S^ is never materialized.
Matrix sandwich_sigma(const MancovaFit& fit, const DesignMatrices& design,
                      HcFlavor flavor);

// Diagonal entries n_i^{-1} sigma^2_ik in mu ordering (group-major,
// coordinate-minor), sigma^2_ik = sum_j u~_ijk^2 / (n_i - c - 1).
// Throws DegenerateVariance when a variance falls below
// 1e-14 * (coordinate scale)^2.
Vector diagonal_d_hat(const MancovaFit& fit, HcFlavor flavor);

// Group residual covariance matrices sigma^_i = sum_j u~ u~' / (n_i - c - 1).
std::vector<Matrix> group_sigmas(const MancovaFit& fit, HcFlavor flavor);

struct CovarianceEstimates {
  Matrix sigma_big;                 // ap x ap sandwich block
  Vector d_hat;                     // ap diagonal
  std::vector<Matrix> group_sigma;  // a matrices, p x p
  HcFlavor flavor = HcFlavor::HC4;
};

CovarianceEstimates covariance_estimates(const MancovaFit& fit,
                                         const DesignMatrices& design,
                                         HcFlavor flavor);

}  // namespace mancova

#endif  // MANCOVA_COVARIANCE_HPP
