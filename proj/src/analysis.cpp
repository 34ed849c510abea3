#include "mancova/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "mancova/csv.hpp"

namespace mancova {

void AnalysisRequest::validate() const {
  if (input_path.empty()) throw InvalidData("input path required");
  if (group_column.empty()) throw InvalidData("group column required");
  if (outcome_columns.empty()) throw InvalidData("at least one outcome column");
  std::vector<std::string> all = outcome_columns;
  all.insert(all.end(), covariate_columns.begin(), covariate_columns.end());
  all.push_back(group_column);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw InvalidData("column names must be distinct");
  if (method != "wilks" && method != "wald" && method != "mancats-wild" &&
      method != "mancats-parametric")
    throw InvalidData("unknown method: " + method);
  if (method == "wilks" && hypothesis != "one-way")
    throw InvalidData("wilks supports only the one-way hypothesis");
  if (n_boot < 1) throw InvalidData("n_boot must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidData("alpha in (0,1]");
}

Dataset load_dataset_csv(const std::string& path,
                         const std::string& group_column,
                         const std::vector<std::string>& outcome_columns,
                         const std::vector<std::string>& covariate_columns,
                         std::vector<std::string>* group_labels) {
  csv::Table table = csv::read_csv(path);
  const int gcol = table.column_index(group_column);
  std::vector<int> ocols, ccols;
  for (const auto& name : outcome_columns)
    ocols.push_back(table.column_index(name));
  for (const auto& name : covariate_columns)
    ccols.push_back(table.column_index(name));

  // Groups ordered by first appearance of their label.
  std::vector<std::string> labels;
  std::map<std::string, int> label_to_group;
  std::vector<std::vector<int>> group_rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& label = table.rows[r][gcol];
    auto it = label_to_group.find(label);
    if (it == label_to_group.end()) {
      label_to_group[label] = static_cast<int>(labels.size());
      labels.push_back(label);
      group_rows.emplace_back();
      it = label_to_group.find(label);
    }
    group_rows[it->second].push_back(static_cast<int>(r));
  }

  const int n = static_cast<int>(table.rows.size());
  const int p = static_cast<int>(ocols.size());
  const int c = static_cast<int>(ccols.size());
  Matrix outcomes(n, p);
  Matrix covariates(n, c);
  std::vector<int> sizes;
  int row = 0;
  for (const auto& rows : group_rows) {
    sizes.push_back(static_cast<int>(rows.size()));
    for (int r : rows) {
      for (int k = 0; k < p; ++k)
        outcomes(row, k) = table.number_at(r, ocols[k]);
      for (int k = 0; k < c; ++k)
        covariates(row, k) = table.number_at(r, ccols[k]);
      ++row;
    }
  }
  if (group_labels) *group_labels = labels;
  return Dataset(std::move(outcomes), std::move(covariates), std::move(sizes),
                 std::move(labels));
}

namespace {

// H matrix as a plain numeric CSV, no header.
Matrix read_contrast_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open hypothesis file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const char* begin = cell.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin)
        throw NonNumericCell("hypothesis file row " + std::to_string(line_no) +
                             ": '" + cell + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidData("empty hypothesis file: " + path);
  Matrix h(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw InvalidData("ragged hypothesis matrix in " + path);
    for (std::size_t ccol = 0; ccol < rows[r].size(); ++ccol)
      h(r, ccol) = rows[r][ccol];
  }
  return h;
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

}  // namespace

AnalysisOutput run_analysis(const AnalysisRequest& request) {
  request.validate();
  std::vector<std::string> labels;
  Dataset data =
      load_dataset_csv(request.input_path, request.group_column,
                       request.outcome_columns, request.covariate_columns,
                       &labels);
  DesignMatrices design = build_design(data);
  MancovaFit fit = fit_ols(data, design);

  const int a = data.n_groups();
  const int p = data.n_outcomes();
  HypothesisProjector projector =
      request.hypothesis == "one-way"
          ? one_way_projector(a, p)
          : projector_from_contrast(
                ContrastMatrix(read_contrast_csv(request.hypothesis)));
  if (projector.dim() != a * p)
    throw DimensionMismatch("hypothesis matrix has " +
                            std::to_string(projector.dim()) +
                            " columns, expected a*p = " +
                            std::to_string(a * p));

  TestResult result;
  if (request.method == "wilks") {
    result = wilks_lambda(data, design, fit);
  } else if (request.method == "wald") {
    Matrix sigma = sandwich_sigma(fit, design, request.flavor);
    result = wald_statistic(fit.mu_hat, sigma, projector);
  } else {
    BootstrapConfig config;
    config.scheme = request.method == "mancats-wild"
                        ? BootstrapScheme::WildRademacher
                        : BootstrapScheme::ParametricGaussian;
    config.statistic = StatisticKind::Mancats;
    config.flavor = request.flavor;
    config.n_boot = request.n_boot;
    config.seed = request.seed;
    config.threads = request.threads;
    result = bootstrap_test(data, design, projector, config).observed_result;
  }

  nlohmann::json j;
  j["schema_version"] = 1;
  j["method"] = request.method;
  j["hypothesis"] = request.hypothesis;
  j["flavor"] = to_string(request.flavor);
  j["statistic"] = result.statistic;
  j["reference"] = to_string(result.reference);
  if (result.p_value) j["p_value"] = *result.p_value;
  else j["p_value"] = nullptr;
  j["rank_used"] = result.rank_used;
  j["f"] = result.df;
  j["alpha"] = request.alpha;
  if (result.p_value) j["reject"] = *result.p_value <= request.alpha;
  j["n_boot"] = request.n_boot;
  j["seed"] = request.seed;
  j["diagnostics"] = {
      {"singular_covariance", result.diagnostics.singular_covariance},
      {"leverage_warning", result.diagnostics.leverage_warning},
      {"redraws", result.diagnostics.redraws}};
  j["groups"] = nlohmann::json::array();
  std::vector<Matrix> sigmas = group_sigmas(fit, request.flavor);
  for (int i = 0; i < a; ++i) {
    nlohmann::json g;
    g["label"] = labels[i];
    g["n"] = data.group_size(i);
    g["residual_covariance"] = matrix_json(sigmas[i]);
    nlohmann::json mu = nlohmann::json::array();
    for (int k = 0; k < p; ++k) mu.push_back(fit.mu_hat(i * p + k));
    g["adjusted_mean"] = mu;
    j["groups"].push_back(g);
  }

  AnalysisOutput out;
  out.result = result;
  out.json = j.dump(2);
  return out;
}

}  // namespace mancova
