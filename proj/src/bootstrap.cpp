#include "mancova/bootstrap.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>

#include "engine.hpp"
#include "mancova/parallel.hpp"

namespace mancova {

const char* to_string(BootstrapScheme s) {
  return s == BootstrapScheme::WildRademacher ? "wild-rademacher"
                                              : "parametric-gaussian";
}

const char* to_string(StatisticKind s) {
  return s == StatisticKind::Mancats ? "mancats" : "wts";
}

Matrix psd_sqrt(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols())
    throw DimensionMismatch("psd_sqrt input must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in psd_sqrt");
  Vector ev = es.eigenvalues();
  const double max_abs = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      if (max_abs > 0.0 && ev(i) < -1e-8 * max_abs)
        throw NotPSD("matrix has a substantially negative eigenvalue");
      ev(i) = 0.0;
    }
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Matrix wild_bootstrap_sample(const MancovaFit& fit,
                             const Vector& multipliers) {
  const int n = fit.n_total();
  if (multipliers.size() != n)
    throw DimensionMismatch("one multiplier per subject required");
  Matrix out(n, fit.n_outcomes());
  for (int l = 0; l < n; ++l) {
    const double h = fit.hat_diag(l);
    if (h >= 1.0 - 1e-12) throw LeverageAtOne("leverage at one");
    out.row(l) = fit.residuals.row(l) * (multipliers(l) / std::sqrt(1.0 - h));
  }
  return out;
}

Matrix wild_bootstrap_sample(const MancovaFit& fit, RngEngine& rng) {
  Vector multipliers(fit.n_total());
  for (int l = 0; l < fit.n_total(); ++l) multipliers(l) = rademacher(rng);
  return wild_bootstrap_sample(fit, multipliers);
}

Matrix parametric_bootstrap_sample(const std::vector<Matrix>& group_sigma,
                                   const std::vector<int>& group_sizes,
                                   RngEngine& rng) {
  if (group_sigma.size() != group_sizes.size())
    throw DimensionMismatch("one covariance matrix per group required");
  const int a = static_cast<int>(group_sigma.size());
  const int p = static_cast<int>(group_sigma[0].rows());
  int n = 0;
  for (int s : group_sizes) n += s;
  std::vector<Matrix> roots(a);
  for (int i = 0; i < a; ++i) roots[i] = psd_sqrt(group_sigma[i]);
  Matrix out(n, p);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(p);
  int row = 0;
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < group_sizes[i]; ++j) {
      for (int k = 0; k < p; ++k) z(k) = normal(rng);
      out.row(row++) = (roots[i] * z).transpose();
    }
  }
  return out;
}

namespace {

constexpr int kMaxAttemptsPerReplicate = 10;

// Fills Ystar for one replicate; alloc-free.
class ReplicateSampler {
 public:
  ReplicateSampler(BootstrapScheme scheme, const Matrix& residuals,
                   const Vector& wild_scale, const std::vector<Matrix>& roots,
                   const std::vector<int>& sizes,
                   const std::vector<int>& offsets)
      : scheme_(scheme),
        residuals_(residuals),
        wild_scale_(wild_scale),
        roots_(roots),
        sizes_(sizes),
        offsets_(offsets),
        z_(residuals.cols()) {}

  void generate(RngEngine& rng, Matrix& ystar) {
    if (scheme_ == BootstrapScheme::WildRademacher) {
      for (int l = 0; l < residuals_.rows(); ++l)
        ystar.row(l) =
            residuals_.row(l) * (rademacher(rng) * wild_scale_(l));
    } else {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t i = 0; i < sizes_.size(); ++i) {
        for (int j = 0; j < sizes_[i]; ++j) {
          for (int k = 0; k < z_.size(); ++k) z_(k) = normal(rng);
          ystar.row(offsets_[i] + j).noalias() = (roots_[i] * z_).transpose();
        }
      }
    }
  }

 private:
  BootstrapScheme scheme_;
  const Matrix& residuals_;
  const Vector& wild_scale_;
  const std::vector<Matrix>& roots_;
  const std::vector<int>& sizes_;
  const std::vector<int>& offsets_;
  Vector z_;
};

}  // namespace

BootstrapResult bootstrap_test(const Matrix& outcomes,
                               const DesignMatrices& design,
                               const HypothesisProjector& projector,
                               const BootstrapConfig& config) {
  if (config.n_boot < 1) throw InvalidData("n_boot must be at least 1");
  const int p = static_cast<int>(outcomes.cols());
  if (outcomes.rows() != design.n_total())
    throw DimensionMismatch("outcomes do not match the design");
  if (projector.dim() != design.n_groups() * p)
    throw DimensionMismatch("projector does not match a*p");

  detail::StatisticEngine observed_engine(design, projector, config.flavor,
                                          p, config.statistic);
  BootstrapResult result;
  result.seed = config.seed;
  int observed_rank = 0;
  result.observed = observed_engine.evaluate(outcomes, &observed_rank);

  // Replicate generation inputs, all derived from the observed fit:
  // raw residuals with the fixed (1-p)^{-1/2} scaling for the wild scheme,
  // flavor-scaled group covariance matrices for the parametric scheme.
  Matrix residuals = observed_engine.residuals();
  Vector wild_scale(design.n_total());
  std::vector<Matrix> roots;
  if (config.scheme == BootstrapScheme::WildRademacher) {
    for (int l = 0; l < design.n_total(); ++l) {
      const double h = design.hat_diag(l);
      if (h >= 1.0 - 1e-12) throw LeverageAtOne("leverage at one");
      wild_scale(l) = 1.0 / std::sqrt(1.0 - h);
    }
  } else {
    const Matrix& scaled = observed_engine.scaled_residuals();
    const int c = design.n_covariates;
    roots.resize(design.n_groups());
    for (int i = 0; i < design.n_groups(); ++i) {
      Matrix s = Matrix::Zero(p, p);
      for (int j = 0; j < design.group_sizes[i]; ++j) {
        const int l = design.offsets[i] + j;
        s.noalias() += scaled.row(l).transpose() * scaled.row(l);
      }
      s /= static_cast<double>(design.group_sizes[i] - c - 1);
      roots[i] = psd_sqrt(s);
    }
  }

  const int n_boot = config.n_boot;
  result.replicates.assign(n_boot, 0.0);
  std::atomic<long> redraws{0};
  const double observed = result.observed;

  parallel_ranges(n_boot, config.threads, [&](std::int64_t begin,
                                              std::int64_t end) {
    detail::StatisticEngine engine(design, projector, config.flavor, p,
                                   config.statistic);
    ReplicateSampler sampler(config.scheme, residuals, wild_scale, roots,
                             design.group_sizes, design.offsets);
    Matrix ystar(design.n_total(), p);
    long local_redraws = 0;
    for (std::int64_t b = begin; b < end; ++b) {
      bool done = false;
      for (int attempt = 0; attempt < kMaxAttemptsPerReplicate; ++attempt) {
        RngEngine rng = make_stream(
            config.seed, static_cast<std::uint64_t>(attempt) * n_boot + b);
        sampler.generate(rng, ystar);
        try {
          result.replicates[b] = engine.evaluate(ystar);
          done = true;
          break;
        } catch (const DegenerateVariance&) {
          ++local_redraws;
        }
      }
      if (!done)
        throw DegenerateVariance(
            "bootstrap replicate stayed degenerate after the redraw cap");
    }
    redraws.fetch_add(local_redraws, std::memory_order_relaxed);
  });

  long count_ge = 0;
  for (double rep : result.replicates)
    if (rep >= observed) ++count_ge;
  result.p_value = (1.0 + count_ge) / (n_boot + 1.0);
  result.redraws = redraws.load();

  result.observed_result.statistic = result.observed;
  result.observed_result.reference = ReferenceDist::BootstrapEmpirical;
  result.observed_result.p_value = result.p_value;
  result.observed_result.rank_used = observed_rank;
  result.observed_result.df = projector.rank();
  result.observed_result.diagnostics.redraws = result.redraws;
  result.observed_result.diagnostics.singular_covariance =
      observed_rank < projector.rank();
  return result;
}

BootstrapResult bootstrap_test(const Dataset& data,
                               const DesignMatrices& design,
                               const HypothesisProjector& projector,
                               const BootstrapConfig& config) {
  return bootstrap_test(data.outcomes(), design, projector, config);
}

}  // namespace mancova
