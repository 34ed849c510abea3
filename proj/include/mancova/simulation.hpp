#ifndef MANCOVA_SIMULATION_HPP
#define MANCOVA_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mancova/bootstrap.hpp"
#include "mancova/rng.hpp"
#include "mancova/types.hpp"

namespace mancova {

enum class ErrorDistribution { Normal, ChiSquared5, Lognormal, DoubleExponential };
enum class CovariateRule { Grid, NormalSecond, LognormalSecond };
enum class Method { WI, WT, MW, MP };

const char* to_string(ErrorDistribution d);
const char* to_string(CovariateRule r);
const char* to_string(Method m);
ErrorDistribution error_distribution_from_string(const std::string& s);
CovariateRule covariate_rule_from_string(const std::string& s);
Method method_from_string(const std::string& s);

struct ScenarioConfig {
  std::string name = "custom";
  int a = 2;
  int p = 2;
  int c = 2;
  std::vector<int> group_sizes;
  std::vector<Matrix> sigmas;  // a matrices, p x p, symmetric PSD
  ErrorDistribution errors = ErrorDistribution::Normal;
  Vector nu;                   // c*p, covariate-major coordinate-minor
  std::vector<Vector> mus;     // a vectors of length p
  CovariateRule covariate_rule = CovariateRule::Grid;
  int n_sim = 2000;            // desk-scale defaults; the study itself ran
  int n_boot = 1000;           // 10^4 / 5*10^3
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::WI, Method::WT, Method::MW, Method::MP};
  HcFlavor flavor = HcFlavor::HC4;
  int threads = 0;             // outer-loop parallelism; 0 = auto
  Vector power_direction;      // p; group-2 shift direction for power runs

  void validate() const;  // throws ConfigParse naming the offending field
};

struct MethodOutcome {
  Method method;
  long n_reject = 0;
  long n_fail = 0;  // replicates where the method errored (e.g. Wilks on
                    // singular data); proportions are over the successes
  double proportion = 0.0;
  double mc_se = 0.0;  // sqrt(p(1-p)/n_eff)
};

struct SimulationReport {
  ScenarioConfig config;
  double delta = 0.0;  // group-2 shift magnitude; 0 for size experiments
  std::vector<MethodOutcome> results;
  double runtime_seconds = 0.0;

  const MethodOutcome& outcome(Method m) const;
};

// I.i.d. draws standardized with the analytic moments of the source
// distribution: normal as-is, (chi^2_5 - 5)/sqrt(10),
// (lognormal - e^{1/2})/sqrt((e-1)e), Laplace(rate 1)/sqrt(2).
Vector standardized_noise(ErrorDistribution kind, int count, RngEngine& rng);

// eps = sigma^{1/2} xi with the symmetric PSD square root; works for
// singular sigma.
Vector correlated_errors(const Matrix& sigma, const Vector& noise);

// Fixed covariate grids: first covariate equally spaced on [-10, 10]
// (both endpoints included); second covariate equally spaced on [0, 5]
// over the first half of the pooled sample and on [-2, -1] over the second
// half, each half sorted in descending order. The random rules replace the
// second covariate by a standard normal or lognormal sample drawn once
// from the given seed.
Matrix build_covariates(int n_total, CovariateRule rule, std::uint64_t seed);

// Empirical rejection rates under the configured (null) means.
SimulationReport run_size_experiment(const ScenarioConfig& config);

// Power curve: group 2's mean is shifted by delta * power_direction for
// each delta. delta = 0 reduces to the size experiment.
std::vector<SimulationReport> run_power_experiment(
    const ScenarioConfig& config, const std::vector<double>& deltas);

// One simulated outcome matrix for replicate sim_index of the scenario,
// generated from the stream the experiment loop itself would use. Used by
// distributional oracles that need raw statistic draws.
Matrix simulate_outcomes(const ScenarioConfig& config, long sim_index,
                         double delta = 0.0);

// The fixed covariate matrix a scenario resolves to (N x c).
Matrix scenario_covariates(const ScenarioConfig& config);

// Named presets reproducing the study's simulation settings
// (e.g. "table1-I-normal-20-20"). Throws UnknownScenarioPreset.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace mancova

#endif  // MANCOVA_SIMULATION_HPP
