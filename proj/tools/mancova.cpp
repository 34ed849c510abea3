#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mancova/analysis.hpp"
#include "mancova/report.hpp"
#include "mancova/scenario_io.hpp"
#include "mancova/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 2;
constexpr int kExitNumericalError = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

mancova::HcFlavor parse_flavor(const std::string& s) {
  if (s == "hc0") return mancova::HcFlavor::HC0;
  if (s == "hc4") return mancova::HcFlavor::HC4;
  throw mancova::InvalidData("flavor must be hc0 or hc4");
}

mancova::ScenarioConfig resolve_scenario(const std::string& preset_name,
                                         const std::string& scenario_path) {
  if (!preset_name.empty() && !scenario_path.empty())
    throw mancova::ConfigParse("give either --preset or --scenario, not both");
  if (!preset_name.empty()) return mancova::preset(preset_name);
  if (!scenario_path.empty())
    return mancova::parse_scenario_file(scenario_path);
  throw mancova::ConfigParse("one of --preset or --scenario is required");
}

void apply_overrides(mancova::ScenarioConfig& cfg, int n_sim, int n_boot,
                     double alpha, long long seed, int threads,
                     const std::string& methods) {
  if (n_sim > 0) cfg.n_sim = n_sim;
  if (n_boot > 0) cfg.n_boot = n_boot;
  if (alpha > 0) cfg.alpha = alpha;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (threads > 0) cfg.threads = threads;
  if (!methods.empty()) {
    cfg.methods.clear();
    for (const std::string& m : split_list(methods))
      cfg.methods.push_back(mancova::method_from_string(m));
  }
}

void echo_config(const mancova::ScenarioConfig& cfg) {
  std::cerr << "# resolved scenario\n" << mancova::scenario_text(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heteroskedasticity-robust MANCOVA tests and simulations"};
  app.require_subcommand(1);

  // --- test ---------------------------------------------------------------
  auto* test_cmd =
      app.add_subcommand("test", "Run one hypothesis test on a CSV dataset");
  std::string input, group, outcomes, covariates, hypothesis = "one-way";
  std::string method = "mancats-parametric", flavor = "hc4", out_path;
  int n_boot = 1000, threads = 0;
  long long seed = 0;
  double alpha = 0.05;
  test_cmd->add_option("--input", input, "CSV file with a header row")
      ->required();
  test_cmd->add_option("--group", group, "group (categorical) column name")
      ->required();
  test_cmd
      ->add_option("--outcomes", outcomes,
                   "comma-separated outcome column names")
      ->required();
  test_cmd->add_option("--covariates", covariates,
                       "comma-separated covariate column names");
  test_cmd->add_option("--hypothesis", hypothesis,
                       "'one-way' or path to a contrast matrix CSV");
  test_cmd->add_option(
      "--method", method,
      "wilks | wald | mancats-wild | mancats-parametric");
  test_cmd->add_option("--flavor", flavor, "hc0 | hc4 (default hc4)");
  test_cmd->add_option("--n-boot", n_boot, "bootstrap replicates");
  test_cmd->add_option("--seed", seed, "rng seed");
  test_cmd->add_option("--alpha", alpha, "test level");
  test_cmd->add_option("--threads", threads, "bootstrap threads (0 = auto)");
  test_cmd->add_option("--out", out_path, "also write the JSON report here");

  // --- simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Empirical size experiment for a scenario");
  std::string preset_name, scenario_path, out_prefix = "report";
  std::string methods_override;
  int sim_nsim = 0, sim_nboot = 0, sim_threads = 0;
  double sim_alpha = 0;
  long long sim_seed = -1;
  bool list_presets = false;
  sim_cmd->add_option("--preset", preset_name, "named scenario preset");
  sim_cmd->add_option("--scenario", scenario_path, "scenario config file");
  sim_cmd->add_option("--out", out_prefix, "output prefix (.csv/.json)");
  sim_cmd->add_option("--n-sim", sim_nsim, "override simulation count");
  sim_cmd->add_option("--n-boot", sim_nboot, "override bootstrap count");
  sim_cmd->add_option("--alpha", sim_alpha, "override level");
  sim_cmd->add_option("--seed", sim_seed, "override seed");
  sim_cmd->add_option("--threads", sim_threads, "override thread count");
  sim_cmd->add_option("--methods", methods_override,
                      "override method list, e.g. WI,WT,MW,MP");
  sim_cmd->add_flag("--list-presets", list_presets, "print preset names");

  // --- power --------------------------------------------------------------
  auto* pow_cmd = app.add_subcommand(
      "power", "Power curve over a list of shift magnitudes");
  std::string pow_preset, pow_scenario, pow_out = "power", pow_methods;
  std::string deltas_arg = "0.5,1.0,1.5,2.0,2.5,3.0";
  int pow_nsim = 0, pow_nboot = 0, pow_threads = 0;
  double pow_alpha = 0;
  long long pow_seed = -1;
  pow_cmd->add_option("--preset", pow_preset, "named scenario preset");
  pow_cmd->add_option("--scenario", pow_scenario, "scenario config file");
  pow_cmd->add_option("--deltas", deltas_arg, "comma-separated shifts");
  pow_cmd->add_option("--out", pow_out, "output prefix (.csv/.json)");
  pow_cmd->add_option("--n-sim", pow_nsim, "override simulation count");
  pow_cmd->add_option("--n-boot", pow_nboot, "override bootstrap count");
  pow_cmd->add_option("--alpha", pow_alpha, "override level");
  pow_cmd->add_option("--seed", pow_seed, "override seed");
  pow_cmd->add_option("--threads", pow_threads, "override thread count");
  pow_cmd->add_option("--methods", pow_methods, "override method list");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test_cmd->parsed()) {
      mancova::AnalysisRequest request;
      request.input_path = input;
      request.group_column = group;
      request.outcome_columns = split_list(outcomes);
      request.covariate_columns = split_list(covariates);
      request.hypothesis = hypothesis;
      request.method = method;
      request.flavor = parse_flavor(flavor);
      request.n_boot = n_boot;
      request.seed = static_cast<std::uint64_t>(seed);
      request.alpha = alpha;
      request.threads = threads;
      mancova::AnalysisOutput output = mancova::run_analysis(request);
      std::cout << output.json << '\n';
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw mancova::InvalidData("cannot write " + out_path);
        out << output.json << '\n';
      }
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      if (list_presets) {
        for (const std::string& name : mancova::preset_names())
          std::cout << name << '\n';
        return kExitOk;
      }
      mancova::ScenarioConfig cfg =
          resolve_scenario(preset_name, scenario_path);
      apply_overrides(cfg, sim_nsim, sim_nboot, sim_alpha, sim_seed,
                      sim_threads, methods_override);
      echo_config(cfg);
      mancova::SimulationReport report = mancova::run_size_experiment(cfg);
      mancova::save_reports({report}, out_prefix);
      std::ofstream devnull;
      mancova::write_report_csv(std::cout, {report});
      return kExitOk;
    }

    if (pow_cmd->parsed()) {
      mancova::ScenarioConfig cfg = resolve_scenario(pow_preset, pow_scenario);
      apply_overrides(cfg, pow_nsim, pow_nboot, pow_alpha, pow_seed,
                      pow_threads, pow_methods);
      echo_config(cfg);
      std::vector<double> deltas;
      for (const std::string& d : split_list(deltas_arg))
        deltas.push_back(std::stod(d));
      std::vector<mancova::SimulationReport> reports =
          mancova::run_power_experiment(cfg, deltas);
      mancova::save_reports(reports, pow_out);
      mancova::write_report_csv(std::cout, reports);
      return kExitOk;
    }
  } catch (const mancova::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const mancova::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}
