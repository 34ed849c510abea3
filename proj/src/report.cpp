#include "mancova/report.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "mancova/csv.hpp"
#include "mancova/scenario_io.hpp"

namespace mancova {

namespace {

nlohmann::json config_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["name"] = cfg.name;
  j["a"] = cfg.a;
  j["p"] = cfg.p;
  j["c"] = cfg.c;
  j["group_sizes"] = cfg.group_sizes;
  nlohmann::json sig = nlohmann::json::array();
  for (const Matrix& s : cfg.sigmas) {
    nlohmann::json m = nlohmann::json::array();
    for (int r = 0; r < s.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int ccol = 0; ccol < s.cols(); ++ccol) row.push_back(s(r, ccol));
      m.push_back(row);
    }
    sig.push_back(m);
  }
  j["sigmas"] = sig;
  j["error_distribution"] = to_string(cfg.errors);
  j["nu"] = std::vector<double>(cfg.nu.data(), cfg.nu.data() + cfg.nu.size());
  nlohmann::json mus = nlohmann::json::array();
  for (const Vector& m : cfg.mus)
    mus.push_back(std::vector<double>(m.data(), m.data() + m.size()));
  j["mus"] = mus;
  j["covariate_rule"] = to_string(cfg.covariate_rule);
  j["n_sim"] = cfg.n_sim;
  j["n_boot"] = cfg.n_boot;
  j["alpha"] = cfg.alpha;
  j["seed"] = cfg.seed;
  std::vector<std::string> methods;
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["flavor"] = to_string(cfg.flavor);
  if (cfg.power_direction.size() > 0)
    j["power_direction"] = std::vector<double>(
        cfg.power_direction.data(),
        cfg.power_direction.data() + cfg.power_direction.size());
  return j;
}

}  // namespace

void write_report_csv(std::ostream& out,
                      const std::vector<SimulationReport>& reports) {
  std::vector<std::string> columns{
      "scenario", "delta",      "method",     "n_sim",
      "n_boot",   "alpha",      "flavor",     "seed",
      "rejections", "failures", "proportion", "mc_se",
      "runtime_seconds"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& rep : reports) {
    for (const auto& res : rep.results) {
      std::vector<std::string> row;
      row.push_back(rep.config.name);
      row.push_back(csv::format_double(rep.delta));
      row.push_back(to_string(res.method));
      row.push_back(std::to_string(rep.config.n_sim));
      row.push_back(std::to_string(rep.config.n_boot));
      row.push_back(csv::format_double(rep.config.alpha));
      row.push_back(to_string(rep.config.flavor));
      row.push_back(std::to_string(rep.config.seed));
      row.push_back(std::to_string(res.n_reject));
      row.push_back(std::to_string(res.n_fail));
      row.push_back(std::isnan(res.proportion)
                        ? ""
                        : csv::format_double(res.proportion));
      row.push_back(std::isnan(res.mc_se) ? "" : csv::format_double(res.mc_se));
      row.push_back(csv::format_double(rep.runtime_seconds));
      rows.push_back(std::move(row));
    }
  }
  csv::write_csv(out, columns, rows);
}

std::string report_json(const std::vector<SimulationReport>& reports) {
  nlohmann::json j;
  j["schema_version"] = 1;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& rep : reports) {
    nlohmann::json r;
    r["config"] = config_json(rep.config);
    r["delta"] = rep.delta;
    r["runtime_seconds"] = rep.runtime_seconds;
    nlohmann::json results = nlohmann::json::array();
    for (const auto& res : rep.results) {
      nlohmann::json m;
      m["method"] = to_string(res.method);
      m["rejections"] = res.n_reject;
      m["failures"] = res.n_fail;
      if (std::isnan(res.proportion)) {
        m["proportion"] = nullptr;
        m["mc_se"] = nullptr;
      } else {
        m["proportion"] = res.proportion;
        m["mc_se"] = res.mc_se;
      }
      results.push_back(m);
    }
    r["results"] = results;
    list.push_back(r);
  }
  j["reports"] = list;
  return j.dump(2);
}

void save_reports(const std::vector<SimulationReport>& reports,
                  const std::string& out_prefix) {
  {
    std::ofstream out(out_prefix + ".csv");
    if (!out) throw InvalidData("cannot write " + out_prefix + ".csv");
    write_report_csv(out, reports);
  }
  {
    std::ofstream out(out_prefix + ".json");
    if (!out) throw InvalidData("cannot write " + out_prefix + ".json");
    out << report_json(reports) << '\n';
  }
}

}  // namespace mancova
