#ifndef MANCOVA_MODEL_HPP
#define MANCOVA_MODEL_HPP

#include <vector>

#include "mancova/dataset.hpp"
#include "mancova/types.hpp"

namespace mancova {

// Design for the linear model Y = X B + E with X = (group indicators, Z).
// The Kronecker-expanded design X (x) I_p is never materialized; every
// operation that needs it works row-by-row through x_ij' (x) I_p.
//
// Holds the pieces reused across refits: the thin QR factors of X, the hat
// diagonals, and the mu-block of X (X'X)^{-1} used by the sandwich.
struct DesignMatrices {
  Matrix X;                      // N x (a+c)
  Matrix q1;                     // N x (a+c), thin Q of X
  Matrix r;                      // (a+c) x (a+c), upper triangular
  Vector hat_diag;               // N, p_ij = row norms^2 of q1
  Matrix g_mu;                   // N x a, first a columns of X (X'X)^{-1}
  std::vector<int> group_sizes;
  std::vector<int> offsets;
  int n_covariates = 0;
  double min_singular = 0.0;
  double max_singular = 0.0;

  int n_groups() const { return static_cast<int>(group_sizes.size()); }
  int n_total() const { return static_cast<int>(X.rows()); }
};

// Builds X = (direct sum of 1_{n_i}, Z), rows group-major subject-minor,
// and checks rank: X is rejected when min singular value
// < 1e-10 * max singular value.
DesignMatrices build_design(const std::vector<int>& group_sizes,
                            const Matrix& covariates);
DesignMatrices build_design(const Dataset& data);

// Hat-matrix diagonal for subject j of group i.
double hat_diagonal(const DesignMatrices& design, int group, int subject);

// OLS fit of the MANCOVA model. Because the model has no cross-coordinate
// coupling, the p coordinates are p independent regressions on X; the QR
// solve on the N x p right-hand side is exactly that.
struct MancovaFit {
  Matrix coefficients;   // (a+c) x p; rows 0..a-1 adjusted means, then nu
  Matrix residuals;      // N x p
  Vector mu_hat;         // a*p, group-major coordinate-minor
  Vector nu_hat;         // c*p, covariate-major coordinate-minor
  Vector hat_diag;       // N
  Vector outcome_scale;  // p, rms of the centered outcome per coordinate
  std::vector<int> group_sizes;
  std::vector<int> offsets;
  int n_covariates = 0;

  int n_groups() const { return static_cast<int>(group_sizes.size()); }
  int n_outcomes() const { return static_cast<int>(residuals.cols()); }
  int n_total() const { return static_cast<int>(residuals.rows()); }
};

MancovaFit fit_ols(const Dataset& data, const DesignMatrices& design);

// Lean refit used by the bootstrap: no validation, caller supplies buffers.
// qty must be (a+c) x p. Outputs coefficients and residuals of the least
// squares fit of Y on the design.
void refit(const DesignMatrices& design, const Matrix& outcomes,
           Matrix& qty, Matrix& coefficients, Matrix& residuals);

}  // namespace mancova

#endif  // MANCOVA_MODEL_HPP
