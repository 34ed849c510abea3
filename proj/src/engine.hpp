#ifndef MANCOVA_SRC_ENGINE_HPP
#define MANCOVA_SRC_ENGINE_HPP

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mancova/bootstrap.hpp"
#include "mancova/covariance.hpp"
#include "mancova/hypothesis.hpp"
#include "mancova/model.hpp"
#include "mancova/types.hpp"

namespace mancova::detail {

// Reusable evaluator: fit + variance estimator + projected quadratic form,
// with every buffer preallocated so replicate evaluation is allocation-free.
// One instance per thread.
class StatisticEngine {
 public:
  StatisticEngine(const DesignMatrices& design,
                  const HypothesisProjector& projector, HcFlavor flavor,
                  int n_outcomes, StatisticKind kind)
      : design_(&design),
        t_(projector.matrix()),
        f_(projector.rank()),
        kind_(kind),
        a_(design.n_groups()),
        p_(n_outcomes),
        c_(design.n_covariates),
        n_(design.n_total()),
        es_(a_ * p_) {
    hc_scale_ = hc_scale_factors(design.hat_diag, flavor);
    const int k = a_ + c_;
    const int ap = a_ * p_;
    qty_.resize(k, p_);
    coef_.resize(k, p_);
    resid_.resize(n_, p_);
    scaled_.resize(n_, p_);
    mu_.resize(ap);
    sigma2_.resize(ap);
    dvec_.resize(ap);
    w_.resize(ap);
    mid_.resize(ap, ap);
    tmt_.resize(ap, ap);
    tv_.resize(ap);
    y_.resize(ap);
  }

  // Fits Y by least squares and evaluates the configured statistic.
  // Throws DegenerateVariance for a near-zero per-coordinate variance
  // (MANCATS only; the Wald path pseudo-inverts whatever rank remains).
  double evaluate(const Matrix& outcomes, int* rank_out = nullptr) {
    refit(*design_, outcomes, qty_, coef_, resid_);
    for (int i = 0; i < a_; ++i)
      for (int k = 0; k < p_; ++k) mu_(i * p_ + k) = coef_(i, k);
    scaled_ = resid_.array().colwise() * hc_scale_.array();
    if (kind_ == StatisticKind::Mancats) {
      accumulate_sigma2(outcomes);
      for (int i = 0; i < a_; ++i)
        for (int k = 0; k < p_; ++k)
          dvec_(i * p_ + k) = sigma2_(i * p_ + k) / design_->group_sizes[i];
      mid_.noalias() = t_ * dvec_.asDiagonal();
      tmt_.noalias() = mid_ * t_;
    } else {
      accumulate_sandwich();
      mid_.noalias() = t_ * sandwich();
      tmt_.noalias() = mid_ * t_;
    }
    return quadform(rank_out);
  }

  const Matrix& residuals() const { return resid_; }
  const Matrix& scaled_residuals() const { return scaled_; }
  const Matrix& sandwich() const { return sandwich_; }
  const Vector& mu() const { return mu_; }
  const Vector& hc_scale() const { return hc_scale_; }

 private:
  void accumulate_sigma2(const Matrix& outcomes) {
    for (int i = 0; i < a_; ++i) {
      const int off = design_->offsets[i];
      const int ni = design_->group_sizes[i];
      const double denom = ni - c_ - 1;
      for (int k = 0; k < p_; ++k) {
        double s = 0.0;
        for (int j = 0; j < ni; ++j) {
          const double u = scaled_(off + j, k);
          s += u * u;
        }
        sigma2_(i * p_ + k) = s / denom;
      }
    }
    for (int k = 0; k < p_; ++k) {
      const double mean = outcomes.col(k).mean();
      const double scale2 =
          (outcomes.col(k).array() - mean).square().sum() / n_;
      const double threshold = std::max(1e-14 * scale2, 1e-300);
      for (int i = 0; i < a_; ++i)
        if (sigma2_(i * p_ + k) < threshold)
          throw DegenerateVariance("degenerate variance in replicate");
    }
  }

  void accumulate_sandwich() {
    if (sandwich_.rows() == 0) sandwich_.resize(a_ * p_, a_ * p_);
    sandwich_.setZero();
    for (int l = 0; l < n_; ++l) {
      for (int q = 0; q < a_; ++q)
        w_.segment(q * p_, p_) =
            design_->g_mu(l, q) * scaled_.row(l).transpose();
      sandwich_.noalias() += w_ * w_.transpose();
    }
  }

  double quadform(int* rank_out) {
    tmt_ = 0.5 * (tmt_ + tmt_.transpose().eval());
    es_.compute(tmt_);
    if (es_.info() != Eigen::Success)
      throw NumericalFailure("eigendecomposition failed in statistic");
    const Vector& ev = es_.eigenvalues();
    const double max_abs = ev.cwiseAbs().maxCoeff();
    tv_.noalias() = t_ * mu_;
    y_.noalias() = es_.eigenvectors().transpose() * tv_;
    double stat = 0.0;
    int rank = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (max_abs > 0.0 && std::abs(ev(i)) > 1e-10 * max_abs) {
        stat += y_(i) * y_(i) / ev(i);
        ++rank;
      }
    }
    if (rank_out) *rank_out = rank;
    return stat < 0.0 && stat > -1e-12 ? 0.0 : stat;
  }

  const DesignMatrices* design_;
  Matrix t_;
  int f_;
  StatisticKind kind_;
  int a_, p_, c_, n_;
  Vector hc_scale_;
  Matrix qty_, coef_, resid_, scaled_, sandwich_, mid_, tmt_;
  Vector mu_, sigma2_, dvec_, w_, tv_, y_;
  Eigen::SelfAdjointEigenSolver<Matrix> es_;
};

}  // namespace mancova::detail

#endif  // MANCOVA_SRC_ENGINE_HPP
