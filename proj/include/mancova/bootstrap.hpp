#ifndef MANCOVA_BOOTSTRAP_HPP
#define MANCOVA_BOOTSTRAP_HPP

#include <cstdint>
#include <vector>

#include "mancova/covariance.hpp"
#include "mancova/dataset.hpp"
#include "mancova/hypothesis.hpp"
#include "mancova/model.hpp"
#include "mancova/rng.hpp"
#include "mancova/statistics.hpp"
#include "mancova/types.hpp"

namespace mancova {

enum class BootstrapScheme { WildRademacher, ParametricGaussian };
enum class StatisticKind { Mancats, Wts };

const char* to_string(BootstrapScheme s);
const char* to_string(StatisticKind s);

struct BootstrapConfig {
  BootstrapScheme scheme = BootstrapScheme::ParametricGaussian;
  StatisticKind statistic = StatisticKind::Mancats;
  HcFlavor flavor = HcFlavor::HC4;
  int n_boot = 1000;
  std::uint64_t seed = 0;
  int threads = 1;  // 0 = resolve from environment / hardware
};

struct BootstrapResult {
  double observed = 0.0;
  std::vector<double> replicates;  // in replicate-index order
  double p_value = 1.0;            // (1 + #{replicates >= observed}) / (B + 1)
  std::uint64_t seed = 0;
  long redraws = 0;
  TestResult observed_result;      // statistic with bootstrap p attached
};

// Y*_ij = u_ij * t_ij / sqrt(1 - p_ij), one multiplier per subject shared
// across coordinates. The leverage scaling is always (1 - p)^{-1/2},
// independent of the HC flavor used in variance estimation.
Matrix wild_bootstrap_sample(const MancovaFit& fit, const Vector& multipliers);
Matrix wild_bootstrap_sample(const MancovaFit& fit, RngEngine& rng);

// Y*_ij ~ N(0, sigma_i) drawn through the symmetric PSD square root;
// supports singular sigma_i exactly. Negative eigenvalues are clamped to
// zero; clamping beyond 1e-8 * max eigenvalue raises NotPSD.
Matrix parametric_bootstrap_sample(const std::vector<Matrix>& group_sigma,
                                   const std::vector<int>& group_sizes,
                                   RngEngine& rng);

// Symmetric PSD square root with the clamp rule above.
Matrix psd_sqrt(const Matrix& sigma);

// Full bootstrap test: observed statistic on the data, then n_boot
// replicates, each refitting the full model on synthetic outcomes and
// recomputing the variance estimator with the same flavor before
// evaluating the statistic with the same projector. Bootstrap statistics
// use the refitted coefficients directly; the synthetic data are null by
// construction. Replicates hitting DegenerateVariance are redrawn (counted,
// capped at 10 attempts each so total attempts stay within 10 n_boot).
//
// Determinism: replicate b draws from a stream derived from (seed, b), so
// results are bit-identical for any thread count.
BootstrapResult bootstrap_test(const Matrix& outcomes,
                               const DesignMatrices& design,
                               const HypothesisProjector& projector,
                               const BootstrapConfig& config);
BootstrapResult bootstrap_test(const Dataset& data,
                               const DesignMatrices& design,
                               const HypothesisProjector& projector,
                               const BootstrapConfig& config);

}  // namespace mancova

#endif  // MANCOVA_BOOTSTRAP_HPP
