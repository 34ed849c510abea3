#include "mancova/hypothesis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace mancova {

ContrastMatrix::ContrastMatrix(Matrix h) : h_(std::move(h)) {
  if (h_.rows() < 1 || h_.cols() < 1)
    throw InvalidData("contrast matrix is empty");
  const double scale = std::max(1.0, h_.cwiseAbs().maxCoeff());
  const double rowsum = (h_ * Vector::Ones(h_.cols())).cwiseAbs().maxCoeff();
  if (rowsum > 1e-8 * scale)
    throw InvalidData("contrast rows must sum to zero (H 1 = 0)");
  Eigen::JacobiSVD<Matrix> svd(h_);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) < 1e-10 * s(0))
    throw InvalidData("contrast matrix must have full row rank");
}

HypothesisProjector::HypothesisProjector(Matrix t, int rank)
    : t_(std::move(t)), rank_(rank) {
  if (t_.rows() != t_.cols()) throw DimensionMismatch("projector not square");
  const int m = static_cast<int>(t_.rows());
  if ((t_ - t_.transpose()).cwiseAbs().maxCoeff() >= 1e-12)
    throw NumericalFailure("projector is not symmetric");
  if ((t_ * t_ - t_).cwiseAbs().maxCoeff() >= 1e-10)
    throw NumericalFailure("projector is not idempotent");
  if ((t_ * Vector::Ones(m)).cwiseAbs().maxCoeff() >= 1e-8)
    throw NumericalFailure("projector does not annihilate the constant");
  const double tr = t_.trace();
  if (std::abs(tr - std::round(tr)) >= 1e-8)
    throw NumericalFailure("projector trace is not near an integer");
  if (static_cast<int>(std::lround(tr)) != rank_)
    throw NumericalFailure("projector rank does not match its trace");
}

HypothesisProjector projector_from_contrast(const ContrastMatrix& contrast) {
  const Matrix& h = contrast.matrix();
  Matrix gram = h * h.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition of HH' failed");
  const Vector& ev = es.eigenvalues();
  const double cutoff = 1e-12 * ev.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
  Matrix gram_pinv =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  Matrix t = h.transpose() * gram_pinv * h;
  t = 0.5 * (t + t.transpose());
  int rank = static_cast<int>(std::lround(t.trace()));
  return HypothesisProjector(std::move(t), rank);
}

HypothesisProjector one_way_projector(int n_groups, int n_outcomes) {
  if (n_groups < 2) throw InvalidData("one-way projector needs a >= 2");
  if (n_outcomes < 1) throw InvalidData("one-way projector needs p >= 1");
  const int a = n_groups, p = n_outcomes;
  Matrix pa = Matrix::Identity(a, a) - Matrix::Constant(a, a, 1.0 / a);
  Matrix t = Matrix::Zero(a * p, a * p);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j)
      t.block(i * p, j * p, p, p) = pa(i, j) * Matrix::Identity(p, p);
  return HypothesisProjector(std::move(t), (a - 1) * p);
}

}  // namespace mancova
