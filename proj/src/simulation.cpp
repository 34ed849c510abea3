#include "mancova/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "mancova/covariance.hpp"
#include "mancova/dataset.hpp"
#include "mancova/parallel.hpp"
#include "mancova/statistics.hpp"

namespace mancova {

const char* to_string(ErrorDistribution d) {
  switch (d) {
    case ErrorDistribution::Normal: return "normal";
    case ErrorDistribution::ChiSquared5: return "chisq5";
    case ErrorDistribution::Lognormal: return "lognormal";
    case ErrorDistribution::DoubleExponential: return "doubleexp";
  }
  return "normal";
}

const char* to_string(CovariateRule r) {
  switch (r) {
    case CovariateRule::Grid: return "grid";
    case CovariateRule::NormalSecond: return "normal-second";
    case CovariateRule::LognormalSecond: return "lognormal-second";
  }
  return "grid";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::WI: return "WI";
    case Method::WT: return "WT";
    case Method::MW: return "MW";
    case Method::MP: return "MP";
  }
  return "?";
}

ErrorDistribution error_distribution_from_string(const std::string& s) {
  if (s == "normal") return ErrorDistribution::Normal;
  if (s == "chisq5" || s == "chi-squared-5" || s == "chisquared5")
    return ErrorDistribution::ChiSquared5;
  if (s == "lognormal") return ErrorDistribution::Lognormal;
  if (s == "doubleexp" || s == "double-exponential" || s == "laplace")
    return ErrorDistribution::DoubleExponential;
  throw ConfigParse("unknown error distribution: " + s);
}

CovariateRule covariate_rule_from_string(const std::string& s) {
  if (s == "grid") return CovariateRule::Grid;
  if (s == "normal-second") return CovariateRule::NormalSecond;
  if (s == "lognormal-second") return CovariateRule::LognormalSecond;
  throw ConfigParse("unknown covariate rule: " + s);
}

Method method_from_string(const std::string& s) {
  if (s == "WI" || s == "wilks") return Method::WI;
  if (s == "WT" || s == "wald") return Method::WT;
  if (s == "MW" || s == "mancats-wild") return Method::MW;
  if (s == "MP" || s == "mancats-parametric") return Method::MP;
  throw ConfigParse("unknown method: " + s);
}

void ScenarioConfig::validate() const {
  if (a < 2) throw ConfigParse("a: need at least 2 groups");
  if (p < 1) throw ConfigParse("p: need at least 1 outcome");
  if (c < 0) throw ConfigParse("c: negative covariate count");
  if (static_cast<int>(group_sizes.size()) != a)
    throw ConfigParse("group_sizes: expected " + std::to_string(a) +
                      " entries");
  for (int i = 0; i < a; ++i)
    if (group_sizes[i] < c + 2)
      throw ConfigParse("group_sizes: group " + std::to_string(i + 1) +
                        " smaller than c+2");
  if (static_cast<int>(sigmas.size()) != a)
    throw ConfigParse("sigma: expected " + std::to_string(a) + " matrices");
  for (int i = 0; i < a; ++i) {
    if (sigmas[i].rows() != p || sigmas[i].cols() != p)
      throw ConfigParse("sigma_" + std::to_string(i + 1) +
                        ": expected a " + std::to_string(p) + "x" +
                        std::to_string(p) + " matrix");
    if ((sigmas[i] - sigmas[i].transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw ConfigParse("sigma_" + std::to_string(i + 1) + ": not symmetric");
  }
  if (nu.size() != static_cast<long>(c) * p)
    throw ConfigParse("nu: expected length c*p = " + std::to_string(c * p));
  if (static_cast<int>(mus.size()) != a)
    throw ConfigParse("mu: expected " + std::to_string(a) + " vectors");
  for (int i = 0; i < a; ++i)
    if (mus[i].size() != p)
      throw ConfigParse("mu_" + std::to_string(i + 1) + ": expected length " +
                        std::to_string(p));
  if (c > 2 && covariate_rule == CovariateRule::Grid)
    throw ConfigParse("covariate_rule: built-in rules define 2 covariates");
  if (n_sim < 1) throw ConfigParse("n_sim: must be at least 1");
  if (n_boot < 1) throw ConfigParse("n_boot: must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigParse("alpha: must be in (0, 1]");
  if (methods.empty()) throw ConfigParse("methods: none selected");
  if (power_direction.size() != 0 && power_direction.size() != p)
    throw ConfigParse("power_direction: expected length p");
}

const MethodOutcome& SimulationReport::outcome(Method m) const {
  for (const auto& r : results)
    if (r.method == m) return r;
  throw InvalidData(std::string("method not in report: ") + to_string(m));
}

namespace {

void fill_standardized(ErrorDistribution kind, RngEngine& rng, double* out,
                       long count) {
  switch (kind) {
    case ErrorDistribution::Normal: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (long i = 0; i < count; ++i) out[i] = normal(rng);
      break;
    }
    case ErrorDistribution::ChiSquared5: {
      std::chi_squared_distribution<double> chi(5.0);
      const double inv_sd = 1.0 / std::sqrt(10.0);
      for (long i = 0; i < count; ++i) out[i] = (chi(rng) - 5.0) * inv_sd;
      break;
    }
    case ErrorDistribution::Lognormal: {
      std::lognormal_distribution<double> ln(0.0, 1.0);
      const double mean = std::exp(0.5);
      const double inv_sd =
          1.0 / std::sqrt((std::exp(1.0) - 1.0) * std::exp(1.0));
      for (long i = 0; i < count; ++i) out[i] = (ln(rng) - mean) * inv_sd;
      break;
    }
    case ErrorDistribution::DoubleExponential: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      const double inv_sd = 1.0 / std::sqrt(2.0);
      for (long i = 0; i < count; ++i) {
        double u = unif(rng);
        if (u <= 0.0) u = std::numeric_limits<double>::min();
        const double x = u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
        out[i] = x * inv_sd;
      }
      break;
    }
  }
}

Vector descending_linspace(double lo, double hi, int count) {
  Vector v(count);
  if (count == 1) {
    v(0) = 0.5 * (lo + hi);
    return v;
  }
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) v(i) = hi - i * step;
  return v;
}

}  // namespace

Vector standardized_noise(ErrorDistribution kind, int count, RngEngine& rng) {
  if (count < 1) throw InvalidData("noise count must be positive");
  Vector out(count);
  fill_standardized(kind, rng, out.data(), count);
  return out;
}

Vector correlated_errors(const Matrix& sigma, const Vector& noise) {
  if (sigma.rows() != noise.size())
    throw DimensionMismatch("noise length must match sigma dimension");
  return psd_sqrt(sigma) * noise;
}

Matrix build_covariates(int n_total, CovariateRule rule, std::uint64_t seed) {
  if (n_total < 2) throw InvalidData("need at least 2 subjects");
  Matrix z(n_total, 2);
  const double step = 20.0 / (n_total - 1);
  for (int l = 0; l < n_total; ++l) z(l, 0) = -10.0 + l * step;
  switch (rule) {
    case CovariateRule::Grid: {
      const int half = n_total / 2;
      z.col(1).head(half) = descending_linspace(0.0, 5.0, half);
      z.col(1).tail(n_total - half) =
          descending_linspace(-2.0, -1.0, n_total - half);
      break;
    }
    case CovariateRule::NormalSecond: {
      RngEngine rng = make_stream(seed, 0x434f5641ULL);  // covariate stream
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int l = 0; l < n_total; ++l) z(l, 1) = normal(rng);
      break;
    }
    case CovariateRule::LognormalSecond: {
      RngEngine rng = make_stream(seed, 0x434f5641ULL);
      std::lognormal_distribution<double> ln(0.0, 1.0);
      for (int l = 0; l < n_total; ++l) z(l, 1) = ln(rng);
      break;
    }
  }
  return z;
}

namespace {

struct GeneratorContext {
  const ScenarioConfig* config;
  Matrix covariates;            // N x c (possibly 0 columns)
  std::vector<Matrix> roots;    // sigma_i^{1/2}
  Matrix nu_matrix;             // c x p
  Matrix mean_rows;             // a x p, group means incl. delta shift
  int n_total = 0;
};

GeneratorContext make_generator(const ScenarioConfig& cfg, double delta) {
  GeneratorContext ctx;
  ctx.config = &cfg;
  int n = 0;
  for (int s : cfg.group_sizes) n += s;
  ctx.n_total = n;
  if (cfg.c > 0)
    ctx.covariates =
        build_covariates(n, cfg.covariate_rule, cfg.seed).leftCols(cfg.c);
  else
    ctx.covariates = Matrix(n, 0);
  ctx.roots.reserve(cfg.a);
  for (const Matrix& s : cfg.sigmas) ctx.roots.push_back(psd_sqrt(s));
  ctx.nu_matrix.resize(cfg.c, cfg.p);
  for (int w = 0; w < cfg.c; ++w)
    for (int k = 0; k < cfg.p; ++k)
      ctx.nu_matrix(w, k) = cfg.nu(w * cfg.p + k);
  ctx.mean_rows.resize(cfg.a, cfg.p);
  for (int i = 0; i < cfg.a; ++i) ctx.mean_rows.row(i) = cfg.mus[i].transpose();
  if (delta != 0.0) {
    Vector dir = cfg.power_direction.size() == cfg.p
                     ? cfg.power_direction
                     : Vector::Unit(cfg.p, 0);
    ctx.mean_rows.row(1) += delta * dir.transpose();
  }
  return ctx;
}

Matrix generate_outcomes(const GeneratorContext& ctx, RngEngine& rng) {
  const ScenarioConfig& cfg = *ctx.config;
  const int n = ctx.n_total;
  Matrix xi(n, cfg.p);
  fill_standardized(cfg.errors, rng, xi.data(), static_cast<long>(n) * cfg.p);
  Matrix y(n, cfg.p);
  int off = 0;
  for (int i = 0; i < cfg.a; ++i) {
    const int ni = cfg.group_sizes[i];
    y.middleRows(off, ni).noalias() = xi.middleRows(off, ni) * ctx.roots[i];
    y.middleRows(off, ni).rowwise() += ctx.mean_rows.row(i);
    off += ni;
  }
  if (cfg.c > 0) y.noalias() += ctx.covariates * ctx.nu_matrix;
  return y;
}

SimulationReport run_experiment(const ScenarioConfig& cfg, double delta) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  GeneratorContext ctx = make_generator(cfg, delta);
  DesignMatrices design = build_design(cfg.group_sizes, ctx.covariates);
  HypothesisProjector projector = one_way_projector(cfg.a, cfg.p);

  const int n_methods = static_cast<int>(cfg.methods.size());
  std::vector<std::vector<unsigned char>> reject(
      n_methods, std::vector<unsigned char>(cfg.n_sim, 0));
  std::vector<std::vector<unsigned char>> fail(
      n_methods, std::vector<unsigned char>(cfg.n_sim, 0));

  parallel_ranges(cfg.n_sim, cfg.threads, [&](std::int64_t begin,
                                              std::int64_t end) {
    GeneratorContext local = ctx;  // own buffers per worker
    for (std::int64_t r = begin; r < end; ++r) {
      const std::uint64_t sim_seed = mix_seed(cfg.seed, r);
      RngEngine data_rng = make_stream(sim_seed, 0);
      Matrix y = generate_outcomes(local, data_rng);
      Dataset data(y, local.covariates, cfg.group_sizes);
      MancovaFit fit = fit_ols(data, design);
      for (int m = 0; m < n_methods; ++m) {
        try {
          double pval = 1.0;
          switch (cfg.methods[m]) {
            case Method::WI:
              pval = *wilks_lambda(data, design, fit).p_value;
              break;
            case Method::WT: {
              Matrix sigma = sandwich_sigma(fit, design, cfg.flavor);
              pval = *wald_statistic(fit.mu_hat, sigma, projector).p_value;
              break;
            }
            case Method::MW:
            case Method::MP: {
              BootstrapConfig bc;
              bc.scheme = cfg.methods[m] == Method::MW
                              ? BootstrapScheme::WildRademacher
                              : BootstrapScheme::ParametricGaussian;
              bc.statistic = StatisticKind::Mancats;
              bc.flavor = cfg.flavor;
              bc.n_boot = cfg.n_boot;
              bc.seed = mix_seed(sim_seed, cfg.methods[m] == Method::MW ? 1 : 2);
              bc.threads = 1;  // outer loop owns the parallelism
              pval = bootstrap_test(y, design, projector, bc).p_value;
              break;
            }
          }
          reject[m][r] = pval <= cfg.alpha ? 1 : 0;
        } catch (const NumericalError&) {
          fail[m][r] = 1;
        }
      }
    }
  });

  SimulationReport report;
  report.config = cfg;
  report.delta = delta;
  for (int m = 0; m < n_methods; ++m) {
    MethodOutcome out;
    out.method = cfg.methods[m];
    for (int r = 0; r < cfg.n_sim; ++r) {
      out.n_reject += reject[m][r];
      out.n_fail += fail[m][r];
    }
    const long n_eff = cfg.n_sim - out.n_fail;
    if (n_eff > 0) {
      out.proportion = static_cast<double>(out.n_reject) / n_eff;
      out.mc_se = std::sqrt(out.proportion * (1.0 - out.proportion) / n_eff);
    } else {
      out.proportion = std::numeric_limits<double>::quiet_NaN();
      out.mc_se = std::numeric_limits<double>::quiet_NaN();
    }
    report.results.push_back(out);
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

}  // namespace

SimulationReport run_size_experiment(const ScenarioConfig& config) {
  return run_experiment(config, 0.0);
}

std::vector<SimulationReport> run_power_experiment(
    const ScenarioConfig& config, const std::vector<double>& deltas) {
  std::vector<SimulationReport> reports;
  reports.reserve(deltas.size());
  for (double d : deltas) reports.push_back(run_experiment(config, d));
  return reports;
}

Matrix simulate_outcomes(const ScenarioConfig& config, long sim_index,
                         double delta) {
  config.validate();
  GeneratorContext ctx = make_generator(config, delta);
  RngEngine rng = make_stream(mix_seed(config.seed, sim_index), 0);
  return generate_outcomes(ctx, rng);
}

Matrix scenario_covariates(const ScenarioConfig& config) {
  config.validate();
  int n = 0;
  for (int s : config.group_sizes) n += s;
  if (config.c == 0) return Matrix(n, 0);
  return build_covariates(n, config.covariate_rule, config.seed)
      .leftCols(config.c);
}

}  // namespace mancova
