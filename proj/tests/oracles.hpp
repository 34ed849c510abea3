#ifndef MANCOVA_TESTS_ORACLES_HPP
#define MANCOVA_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. Each oracle
// deliberately takes the slow, textbook route (extended precision normal
// equations, explicit Kronecker assembly, SVD projectors) so that it shares
// no code with the library paths it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mancova/dataset.hpp"
#include "mancova/rng.hpp"
#include "mancova/types.hpp"

namespace oracles {

using mancova::Matrix;
using mancova::Vector;
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Gaussian elimination with partial pivoting in long double.
inline LongMatrix solve_long(LongMatrix a, LongMatrix b) {
  const int n = static_cast<int>(a.rows());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    a.row(col).swap(a.row(pivot));
    b.row(col).swap(b.row(pivot));
    for (int r = col + 1; r < n; ++r) {
      const long double m = a(r, col) / a(col, col);
      a.row(r) -= m * a.row(col);
      b.row(r) -= m * b.row(col);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    b.row(col) /= a(col, col);
    for (int r = 0; r < col; ++r) b.row(r) -= a(r, col) * b.row(col);
  }
  return b;
}

// (X'X)^{-1} X' Y by normal equations in long double.
inline Matrix normal_equations_fit(const Matrix& x, const Matrix& y) {
  LongMatrix xl = x.cast<long double>();
  LongMatrix yl = y.cast<long double>();
  LongMatrix coef = solve_long(xl.transpose() * xl, xl.transpose() * yl);
  return coef.cast<double>();
}

// Hat diagonal x_l' (X'X)^{-1} x_l in long double.
inline double hat_diagonal_long(const Matrix& x, int row) {
  LongMatrix xl = x.cast<long double>();
  LongMatrix gram = xl.transpose() * xl;
  LongMatrix rhs = xl.row(row).transpose();
  LongMatrix sol = solve_long(gram, rhs);
  return static_cast<double>((xl.row(row) * sol)(0, 0));
}

// Orthogonal projector onto the row space of H via SVD.
inline Matrix svd_row_space_projector(const Matrix& h) {
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-12 * s(0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  Matrix v = svd.matrixV().leftCols(rank);
  return v * v.transpose();
}

// Upper-left (a p x a p) block of the full Np-dimensional sandwich
// (X~'X~)^{-1} X~' S^ X~ (X~'X~)^{-1}, assembled explicitly.
inline Matrix kronecker_sandwich(const Matrix& x, const Matrix& scaled_resid,
                                 int a) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  const int p = static_cast<int>(scaled_resid.cols());
  Matrix xt(n * p, k * p);
  xt.setZero();
  for (int l = 0; l < n; ++l)
    for (int q = 0; q < k; ++q)
      xt.block(l * p, q * p, p, p) = x(l, q) * Matrix::Identity(p, p);
  Matrix shat = Matrix::Zero(n * p, n * p);
  for (int l = 0; l < n; ++l) {
    Vector u = scaled_resid.row(l).transpose();
    shat.block(l * p, l * p, p, p) = u * u.transpose();
  }
  Matrix gram_inv = (xt.transpose() * xt).inverse();
  Matrix full = gram_inv * xt.transpose() * shat * xt * gram_inv;
  return full.topLeftCorner(a * p, a * p);
}

// Quadratic form v' (M)^+ v via an explicitly assembled pseudo-inverse.
inline double quadform_pinv(const Vector& v, const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector& ev = es.eigenvalues();
  const double cutoff = 1e-10 * ev.cwiseAbs().maxCoeff();
  Matrix inv = Matrix::Zero(m.rows(), m.cols());
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff)
      inv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
             ev(i);
  return v.dot(inv * v);
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// One-sample KS distance against a cdf.
template <class Cdf>
double ks_distance_cdf(std::vector<double> a, Cdf cdf) {
  std::sort(a.begin(), a.end());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / a.size()));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / a.size() - f));
  }
  return d;
}

// Draws sum_i lambda_i U_i with U_i iid chi^2_1.
inline std::vector<double> sample_weighted_chisq(
    const std::vector<double>& weights, long count, std::uint64_t seed) {
  std::vector<double> out(count);
  mancova::RngEngine rng = mancova::make_stream(seed, 0x57454948ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (long i = 0; i < count; ++i) {
    double s = 0.0;
    for (double w : weights) {
      const double z = normal(rng);
      s += w * z * z;
    }
    out[i] = s;
  }
  return out;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m.variance = m2 / (n - 1);
  m.skewness = (m3 / n) / std::pow(m2 / n, 1.5);
  return m;
}

// Random small MANCOVA dataset for property tests.
inline mancova::Dataset random_dataset(std::uint64_t seed,
                                       std::vector<int> sizes, int p, int c,
                                       double effect_scale = 1.0) {
  mancova::RngEngine rng = mancova::make_stream(seed, 0x44415441ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  int n = 0;
  for (int s : sizes) n += s;
  Matrix z(n, c);
  for (int l = 0; l < n; ++l)
    for (int w = 0; w < c; ++w) z(l, w) = 3.0 * normal(rng);
  Matrix y(n, p);
  Matrix nu(c, p);
  for (int w = 0; w < c; ++w)
    for (int k = 0; k < p; ++k) nu(w, k) = effect_scale * normal(rng);
  int off = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Vector mu(p);
    for (int k = 0; k < p; ++k) mu(k) = effect_scale * normal(rng);
    for (int j = 0; j < sizes[i]; ++j) {
      for (int k = 0; k < p; ++k) y(off + j, k) = mu(k) + normal(rng);
    }
    off += sizes[i];
  }
  if (c > 0) y += z * nu;
  return mancova::Dataset(std::move(y), std::move(z), std::move(sizes));
}

}  // namespace oracles

#endif  // MANCOVA_TESTS_ORACLES_HPP
