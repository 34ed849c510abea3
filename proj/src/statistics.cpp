#include "mancova/statistics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>

namespace mancova {

const char* to_string(ReferenceDist r) {
  switch (r) {
    case ReferenceDist::None: return "none";
    case ReferenceDist::ChiSquare: return "chi-square";
    case ReferenceDist::FApprox: return "f-approximation";
    case ReferenceDist::BootstrapEmpirical: return "bootstrap-empirical";
    case ReferenceDist::WeightedChiSquare: return "weighted-chi-square";
  }
  return "none";
}

double chi_square_upper(double x, double df) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double f_upper(double x, double df1, double df2) {
  if (x <= 0.0) return 1.0;
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, x));
}

std::pair<Matrix, int> sym_pseudo_inverse(const Matrix& m, double rtol) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("pseudo-inverse input must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("symmetric eigendecomposition failed");
  const Vector& ev = es.eigenvalues();
  const double max_abs = ev.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(ev.size());
  int rank = 0;
  if (max_abs > 0.0) {
    for (int i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) > rtol * max_abs) {
        inv(i) = 1.0 / ev(i);
        ++rank;
      }
    }
  }
  Matrix pinv =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  return {std::move(pinv), rank};
}

namespace {

// v' (T M T)^+ v with v = T mu, via the eigendecomposition of T M T.
double projected_quadform(const Matrix& t, const Vector& mu, const Matrix& m,
                          int* rank_out) {
  Matrix tmt = t * m * t;
  tmt = 0.5 * (tmt + tmt.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(tmt);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition of projected matrix failed");
  const Vector& ev = es.eigenvalues();
  const double max_abs = ev.cwiseAbs().maxCoeff();
  Vector y = es.eigenvectors().transpose() * (t * mu);
  double stat = 0.0;
  int rank = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (max_abs > 0.0 && std::abs(ev(i)) > 1e-10 * max_abs) {
      stat += y(i) * y(i) / ev(i);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return stat;
}

}  // namespace

TestResult wald_statistic(const Vector& mu_hat, const Matrix& sigma_big,
                          const HypothesisProjector& projector) {
  const Matrix& t = projector.matrix();
  if (mu_hat.size() != t.rows() || sigma_big.rows() != t.rows() ||
      sigma_big.cols() != t.cols())
    throw DimensionMismatch("wald statistic: dimensions do not agree");
  TestResult res;
  res.df = projector.rank();
  res.reference = ReferenceDist::ChiSquare;
  res.statistic = projected_quadform(t, mu_hat, sigma_big, &res.rank_used);
  if (res.statistic < 0.0 && res.statistic > -1e-12) res.statistic = 0.0;
  res.diagnostics.singular_covariance = res.rank_used < res.df;
  res.p_value = chi_square_upper(res.statistic, res.df);
  return res;
}

TestResult mancats_statistic(const Vector& mu_hat, const Vector& d_hat,
                             const HypothesisProjector& projector) {
  const Matrix& t = projector.matrix();
  if (mu_hat.size() != t.rows() || d_hat.size() != t.rows())
    throw DimensionMismatch("mancats statistic: dimensions do not agree");
  for (int i = 0; i < d_hat.size(); ++i)
    if (!(d_hat(i) > 0.0))
      throw DegenerateVariance("mancats statistic: non-positive variance");
  TestResult res;
  res.df = projector.rank();
  res.reference = ReferenceDist::None;  // calibrated by bootstrap / oracle
  Matrix d = d_hat.asDiagonal();
  res.statistic = projected_quadform(t, mu_hat, d, &res.rank_used);
  if (res.statistic < 0.0 && res.statistic > -1e-12) res.statistic = 0.0;
  return res;
}

TestResult wilks_lambda(const Dataset& data, const DesignMatrices& design,
                        const MancovaFit& fit) {
  const int n = data.n_total();
  const int p = data.n_outcomes();
  const int a = data.n_groups();
  const int c = data.n_covariates();
  if (fit.n_total() != n || design.n_total() != n)
    throw DimensionMismatch("wilks lambda: fit does not match the data");

  Matrix e = fit.residuals.transpose() * fit.residuals;

  // Reduced model: common intercept plus covariates.
  Matrix x0(n, 1 + c);
  x0.col(0).setOnes();
  if (c > 0) x0.rightCols(c) = data.covariates();
  Eigen::HouseholderQR<Matrix> qr0(x0);
  Matrix q0 = qr0.householderQ() * Matrix::Identity(n, 1 + c);
  Matrix u0 = data.outcomes() - q0 * (q0.transpose() * data.outcomes());
  Matrix e0 = u0.transpose() * u0;

  const double scale = e.trace() / p;
  const double det_e = e.determinant();
  if (det_e <= 1e-12 * std::pow(scale, p))
    throw SingularCovariance(
        "within-group residual SSCP is singular; Wilks' Lambda is undefined");
  const double det_e0 = e0.determinant();
  if (!(det_e0 > 0.0))
    throw NumericalFailure("reduced-model SSCP has non-positive determinant");
  double lambda = det_e / det_e0;
  lambda = std::min(1.0, std::max(lambda, 1e-300));

  const double q = a - 1;
  const double v = n - a - c;
  const double t3 = p * p + q * q - 5.0;
  const double s = t3 > 0.0 ? std::sqrt((p * p * q * q - 4.0) / t3) : 1.0;
  const double df1 = p * q;
  const double df2 = (v - 0.5 * (p - q + 1.0)) * s - 0.5 * (p * q - 2.0);
  if (df2 <= 0.0)
    throw NumericalFailure("Rao F approximation needs more error df");
  double fstat = (std::pow(lambda, -1.0 / s) - 1.0) * df2 / df1;
  if (fstat < 0.0) fstat = 0.0;

  TestResult res;
  res.statistic = lambda;
  res.reference = ReferenceDist::FApprox;
  res.df = static_cast<int>(df1);
  res.rank_used = p;
  res.p_value = f_upper(fstat, df1, df2);
  return res;
}

std::vector<double> theorem2_weights(const HypothesisProjector& projector,
                                     const Vector& d_true,
                                     const Matrix& lambda11) {
  const Matrix& t = projector.matrix();
  if (d_true.size() != t.rows() || lambda11.rows() != t.rows() ||
      lambda11.cols() != t.cols())
    throw DimensionMismatch("theorem2 weights: dimensions do not agree");
  Matrix d = d_true.asDiagonal();
  auto [tdt_pinv, rank] = sym_pseudo_inverse(t * d * t);
  (void)rank;
  Matrix m = t * tdt_pinv * t * lambda11;
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition of weight matrix failed");
  std::vector<double> weights(m.rows());
  double max_abs = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    max_abs = std::max(max_abs, std::abs(es.eigenvalues()(i)));
  const double tol = 1e-8 * std::max(1.0, max_abs);
  for (int i = 0; i < m.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) > tol)
      throw NumericalFailure("theorem2 weights have non-real eigenvalues");
    weights[i] = es.eigenvalues()(i).real();
  }
  std::sort(weights.begin(), weights.end(), std::greater<double>());
  return weights;
}

Matrix true_sandwich(const DesignMatrices& design,
                     const std::vector<Matrix>& sigmas) {
  const int a = design.n_groups();
  if (static_cast<int>(sigmas.size()) != a)
    throw DimensionMismatch("one covariance matrix per group required");
  const int p = static_cast<int>(sigmas[0].rows());
  const int n = design.n_total();
  Matrix out = Matrix::Zero(a * p, a * p);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < design.group_sizes[i]; ++j) {
      const int l = design.offsets[i] + j;
      for (int qi = 0; qi < a; ++qi)
        for (int ri = 0; ri < a; ++ri)
          out.block(qi * p, ri * p, p, p) +=
              design.g_mu(l, qi) * design.g_mu(l, ri) * sigmas[i];
    }
  }
  return static_cast<double>(n) * out;
}

}  // namespace mancova
