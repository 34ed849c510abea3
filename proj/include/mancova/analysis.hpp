#ifndef MANCOVA_ANALYSIS_HPP
#define MANCOVA_ANALYSIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mancova/bootstrap.hpp"
#include "mancova/dataset.hpp"
#include "mancova/statistics.hpp"

namespace mancova {

// One CSV-driven test run, as issued by the command line.
struct AnalysisRequest {
  std::string input_path;
  std::string group_column;
  std::vector<std::string> outcome_columns;
  std::vector<std::string> covariate_columns;
  std::string hypothesis = "one-way";  // or path to an H matrix CSV
  std::string method = "mancats-parametric";
  // {wilks, wald, mancats-wild, mancats-parametric}
  HcFlavor flavor = HcFlavor::HC4;
  int n_boot = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  int threads = 0;

  void validate() const;
};

struct AnalysisOutput {
  TestResult result;
  std::string json;  // versioned report written to stdout / --out
};

// Loads the CSV (group column categorical; groups ordered by first
// appearance), assembles the dataset, and dispatches on method.
Dataset load_dataset_csv(const std::string& path,
                         const std::string& group_column,
                         const std::vector<std::string>& outcome_columns,
                         const std::vector<std::string>& covariate_columns,
                         std::vector<std::string>* group_labels = nullptr);

AnalysisOutput run_analysis(const AnalysisRequest& request);

}  // namespace mancova

#endif  // MANCOVA_ANALYSIS_HPP
