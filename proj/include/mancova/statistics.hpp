#ifndef MANCOVA_STATISTICS_HPP
#define MANCOVA_STATISTICS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "mancova/covariance.hpp"
#include "mancova/hypothesis.hpp"
#include "mancova/model.hpp"
#include "mancova/types.hpp"

namespace mancova {

enum class ReferenceDist {
  None,                // statistic only; reference supplied elsewhere
  ChiSquare,           // chi^2_f upper tail
  FApprox,             // Rao's F approximation (Wilks)
  BootstrapEmpirical,  // conditional bootstrap distribution
  WeightedChiSquare,   // Theorem-2 style weighted sum oracle
};

const char* to_string(ReferenceDist r);

struct Diagnostics {
  bool singular_covariance = false;  // projected middle matrix lost rank
  bool leverage_warning = false;
  long redraws = 0;                  // degenerate bootstrap replicates redrawn
};

struct TestResult {
  double statistic = 0.0;
  ReferenceDist reference = ReferenceDist::None;
  std::optional<double> p_value;
  int rank_used = 0;  // numerical rank of the projected middle matrix
  int df = 0;         // f = rank(T) for quadratic forms
  Diagnostics diagnostics;
};

// Moore-Penrose inverse of a symmetric matrix via eigendecomposition,
// zeroing eigenvalues below rtol * max |eigenvalue|. Returns the inverse
// and the numerical rank. The projected matrices T Sigma T are rank
// deficient by construction, so this is the normal path.
std::pair<Matrix, int> sym_pseudo_inverse(const Matrix& m,
                                          double rtol = 1e-10);

// W(T) = mu' T' (T Sigma T)^+ T mu with a chi^2_f reference, f = rank(T).
// Flags singular_covariance when rank(T Sigma T) < f.
TestResult wald_statistic(const Vector& mu_hat, const Matrix& sigma_big,
                          const HypothesisProjector& projector);

// A(T) = mu' T' (T D T)^+ T mu. The limiting weights are not computable
// from data, so no p-value is attached; calibration comes from the
// bootstrap (or the simulation-only weighted chi-square oracle).
TestResult mancats_statistic(const Vector& mu_hat, const Vector& d_hat,
                             const HypothesisProjector& projector);

// Wilks' Lambda = det(E) / det(E + H) for the covariate-adjusted one-way
// comparison, E the residual SSCP of the full model and H the extra SSCP
// explained by the group labels beyond the covariates. P-value by Rao's F
// approximation (exact for p <= 2 or a <= 3). Throws SingularCovariance
// when det(E) <= 1e-12 * (trace(E)/p)^p.
TestResult wilks_lambda(const Dataset& data, const DesignMatrices& design,
                        const MancovaFit& fit);

// Eigenvalues of T (T D T)^+ T Lambda11 given the true diagonal limit D
// (entries kappa_i sigma^2_ik, kappa_i = N / n_i) and the true asymptotic
// covariance Lambda11 of mu^. Simulation-only oracle; imaginary parts must
// vanish to 1e-8. Returned sorted descending.
std::vector<double> theorem2_weights(const HypothesisProjector& projector,
                                     const Vector& d_true,
                                     const Matrix& lambda11);

// N times the sandwich upper block evaluated with known group covariance
// matrices in place of the residual outer products: the finite-N stand-in
// for Lambda11 used by the Theorem-2 oracle and consistency checks.
Matrix true_sandwich(const DesignMatrices& design,
                     const std::vector<Matrix>& sigmas);

// Upper-tail helpers.
double chi_square_upper(double x, double df);
double f_upper(double x, double df1, double df2);

}  // namespace mancova

#endif  // MANCOVA_STATISTICS_HPP
