#include "mancova/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace mancova {

Vector hc_scale_factors(const Vector& hat_diag, HcFlavor flavor) {
  const int n = static_cast<int>(hat_diag.size());
  if (flavor == HcFlavor::HC0) return Vector::Ones(n);
  const double mean_leverage = hat_diag.mean();
  Vector scale(n);
  for (int l = 0; l < n; ++l) {
    const double h = hat_diag(l);
    if (h >= 1.0 - 1e-12)
      throw LeverageAtOne(
          "leverage at one: an observation predicts itself exactly");
    const double delta = std::min(4.0, h / mean_leverage);
    scale(l) = std::pow(1.0 - h, -0.5 * delta);
  }
  return scale;
}

Matrix hc_scaled_residuals(const MancovaFit& fit, HcFlavor flavor) {
  if (flavor == HcFlavor::HC0) return fit.residuals;
  Vector scale = hc_scale_factors(fit.hat_diag, flavor);
  return fit.residuals.array().colwise() * scale.array();
}

Matrix sandwich_sigma(const MancovaFit& fit, const DesignMatrices& design,
                      HcFlavor flavor) {
  const int a = fit.n_groups();
  const int p = fit.n_outcomes();
  const int n = fit.n_total();
  if (design.n_total() != n || design.n_groups() != a)
    throw DimensionMismatch("design does not match the fit");
  Matrix scaled = hc_scaled_residuals(fit, flavor);
  Matrix sigma = Matrix::Zero(a * p, a * p);
  Vector w(a * p);
  for (int l = 0; l < n; ++l) {
    for (int q = 0; q < a; ++q)
      w.segment(q * p, p) = design.g_mu(l, q) * scaled.row(l).transpose();
    sigma.noalias() += w * w.transpose();
  }
  return sigma;
}

std::vector<Matrix> group_sigmas(const MancovaFit& fit, HcFlavor flavor) {
  const int a = fit.n_groups();
  const int p = fit.n_outcomes();
  const int c = fit.n_covariates;
  Matrix scaled = hc_scaled_residuals(fit, flavor);
  std::vector<Matrix> sigmas(a);
  for (int i = 0; i < a; ++i) {
    Matrix s = Matrix::Zero(p, p);
    const int off = fit.offsets[i];
    const int ni = fit.group_sizes[i];
    for (int j = 0; j < ni; ++j)
      s.noalias() += scaled.row(off + j).transpose() * scaled.row(off + j);
    sigmas[i] = s / static_cast<double>(ni - c - 1);
  }
  return sigmas;
}

Vector diagonal_d_hat(const MancovaFit& fit, HcFlavor flavor) {
  const int a = fit.n_groups();
  const int p = fit.n_outcomes();
  // Taking the diagonals of the group covariance accumulation keeps the
  // D-hat entries exactly equal to diag(sigma_i).
  std::vector<Matrix> sigmas = group_sigmas(fit, flavor);
  Vector d(a * p);
  for (int i = 0; i < a; ++i) {
    for (int k = 0; k < p; ++k) {
      const double s2 = sigmas[i](k, k);
      const double scale = fit.outcome_scale(k);
      const double threshold = std::max(1e-14 * scale * scale, 1e-300);
      if (s2 < threshold) {
        std::ostringstream msg;
        msg << "degenerate variance in group " << i + 1 << ", coordinate "
            << k + 1 << " (sigma^2=" << s2
            << "); outcome is constant or nearly discrete";
        throw DegenerateVariance(msg.str());
      }
      d(i * p + k) = s2 / fit.group_sizes[i];
    }
  }
  return d;
}

CovarianceEstimates covariance_estimates(const MancovaFit& fit,
                                         const DesignMatrices& design,
                                         HcFlavor flavor) {
  CovarianceEstimates est;
  est.flavor = flavor;
  est.sigma_big = sandwich_sigma(fit, design, flavor);
  est.group_sigma = group_sigmas(fit, flavor);
  est.d_hat = diagonal_d_hat(fit, flavor);

  Eigen::SelfAdjointEigenSolver<Matrix> es(est.sigma_big);
  const Vector& ev = es.eigenvalues();
  const double max_ev = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -1e-8 * max_ev)
    throw NumericalFailure("sandwich covariance is not PSD");
  return est;
}

}  // namespace mancova
