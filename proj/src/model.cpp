#include "mancova/model.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mancova {

Dataset::Dataset(Matrix outcomes, Matrix covariates,
                 std::vector<int> group_sizes,
                 std::vector<std::string> group_labels)
    : outcomes_(std::move(outcomes)),
      covariates_(std::move(covariates)),
      group_sizes_(std::move(group_sizes)),
      labels_(std::move(group_labels)) {
  const int a = static_cast<int>(group_sizes_.size());
  if (a < 2) throw InvalidData("dataset needs at least 2 groups");
  const int p = static_cast<int>(outcomes_.cols());
  if (p < 1) throw InvalidData("dataset needs at least 1 outcome coordinate");
  const int c = static_cast<int>(covariates_.cols());
  long total = 0;
  offsets_.resize(a);
  for (int i = 0; i < a; ++i) {
    offsets_[i] = static_cast<int>(total);
    if (group_sizes_[i] < c + 2) {
      std::ostringstream msg;
      msg << "group " << i + 1 << " has n=" << group_sizes_[i]
          << " subjects; need at least c+2=" << c + 2;
      throw GroupTooSmall(msg.str());
    }
    total += group_sizes_[i];
  }
  if (outcomes_.rows() != total)
    throw InvalidData("outcome rows do not match the group sizes");
  if (covariates_.rows() != total && c > 0)
    throw InvalidData("covariate rows do not match the group sizes");
  if (c == 0) covariates_.resize(total, 0);
  if (!outcomes_.allFinite() || !covariates_.allFinite())
    throw InvalidData("dataset contains non-finite entries");
  if (labels_.empty()) {
    labels_.resize(a);
    for (int i = 0; i < a; ++i) labels_[i] = "group" + std::to_string(i + 1);
  }
  if (static_cast<int>(labels_.size()) != a)
    throw InvalidData("group label count does not match the group count");
}

DesignMatrices build_design(const std::vector<int>& group_sizes,
                            const Matrix& covariates) {
  const int a = static_cast<int>(group_sizes.size());
  if (a < 1) throw InvalidData("design needs at least one group");
  long total = 0;
  std::vector<int> offsets(a);
  for (int i = 0; i < a; ++i) {
    if (group_sizes[i] < 1) throw InvalidData("empty group in design");
    offsets[i] = static_cast<int>(total);
    total += group_sizes[i];
  }
  const int n = static_cast<int>(total);
  const int c = static_cast<int>(covariates.cols());
  if (c > 0 && covariates.rows() != n)
    throw InvalidData("covariate rows do not match the group sizes");
  const int k = a + c;
  if (n < k) throw RankDeficientDesign("fewer subjects than design columns");

  DesignMatrices design;
  design.group_sizes = group_sizes;
  design.offsets = std::move(offsets);
  design.n_covariates = c;
  design.X = Matrix::Zero(n, k);
  for (int i = 0; i < a; ++i)
    design.X.col(i).segment(design.offsets[i], group_sizes[i]).setOnes();
  if (c > 0) design.X.rightCols(c) = covariates;

  Eigen::JacobiSVD<Matrix> svd(design.X);
  design.max_singular = svd.singularValues()(0);
  design.min_singular = svd.singularValues()(k - 1);
  if (design.min_singular < 1e-10 * design.max_singular)
    throw RankDeficientDesign(
        "design matrix is rank deficient: covariate columns are collinear "
        "with each other or with the group indicators");

  Eigen::HouseholderQR<Matrix> qr(design.X);
  design.q1 = qr.householderQ() * Matrix::Identity(n, k);
  design.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  design.hat_diag = design.q1.rowwise().squaredNorm();

  // g_l = (X'X)^{-1} x_l, restricted to the mean coefficients:
  // X (X'X)^{-1} = Q1 R^{-T}, i.e. its transpose solves R w = Q1'.
  Matrix g_all = design.r.triangularView<Eigen::Upper>()
                     .solve(design.q1.transpose())
                     .transpose();
  design.g_mu = g_all.leftCols(a);

  const double trace_err =
      std::abs(design.hat_diag.sum() - static_cast<double>(k));
  if (trace_err > 1e-8)
    throw NumericalFailure("hat matrix trace deviates from a+c");
  for (int l = 0; l < n; ++l) {
    double h = design.hat_diag(l);
    if (!(h >= 0.0) || h >= 1.0 + 1e-12)
      throw NumericalFailure("hat diagonal outside [0, 1)");
  }
  return design;
}

DesignMatrices build_design(const Dataset& data) {
  return build_design(data.group_sizes(), data.covariates());
}

double hat_diagonal(const DesignMatrices& design, int group, int subject) {
  if (group < 0 || group >= design.n_groups())
    throw IndexOutOfRange("group index out of range");
  if (subject < 0 || subject >= design.group_sizes[group])
    throw IndexOutOfRange("subject index out of range");
  return design.hat_diag(design.offsets[group] + subject);
}

void refit(const DesignMatrices& design, const Matrix& outcomes, Matrix& qty,
           Matrix& coefficients, Matrix& residuals) {
  qty.noalias() = design.q1.transpose() * outcomes;
  residuals.noalias() = outcomes - design.q1 * qty;
  coefficients = qty;
  design.r.triangularView<Eigen::Upper>().solveInPlace(coefficients);
}

MancovaFit fit_ols(const Dataset& data, const DesignMatrices& design) {
  const int n = data.n_total();
  const int p = data.n_outcomes();
  const int a = data.n_groups();
  const int c = data.n_covariates();
  if (design.n_total() != n || design.n_groups() != a ||
      design.n_covariates != c)
    throw DimensionMismatch("design does not match the dataset");

  MancovaFit fit;
  fit.group_sizes = data.group_sizes();
  fit.offsets.resize(a);
  for (int i = 0; i < a; ++i) fit.offsets[i] = data.group_offset(i);
  fit.n_covariates = c;
  Matrix qty(a + c, p);
  fit.coefficients.resize(a + c, p);
  fit.residuals.resize(n, p);
  refit(design, data.outcomes(), qty, fit.coefficients, fit.residuals);

  fit.mu_hat.resize(a * p);
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < p; ++k) fit.mu_hat(i * p + k) = fit.coefficients(i, k);
  fit.nu_hat.resize(c * p);
  for (int w = 0; w < c; ++w)
    for (int k = 0; k < p; ++k)
      fit.nu_hat(w * p + k) = fit.coefficients(a + w, k);
  fit.hat_diag = design.hat_diag;

  fit.outcome_scale.resize(p);
  for (int k = 0; k < p; ++k) {
    double mean = data.outcomes().col(k).mean();
    fit.outcome_scale(k) =
        std::sqrt((data.outcomes().col(k).array() - mean).square().sum() / n);
  }

  const double ynorm = data.outcomes().norm();
  const double orth =
      (design.X.transpose() * fit.residuals).cwiseAbs().maxCoeff();
  if (orth > 1e-10 * std::max(1.0, ynorm))
    throw NumericalFailure("residuals are not orthogonal to the design");
  return fit;
}

}  // namespace mancova
