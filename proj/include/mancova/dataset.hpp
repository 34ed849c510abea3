#ifndef MANCOVA_DATASET_HPP
#define MANCOVA_DATASET_HPP

#include <string>
#include <vector>

#include "mancova/types.hpp"

namespace mancova {

// Grouped multivariate observations with fixed covariates. Rows are ordered
// group-major, subject-minor; all flat subject indices used elsewhere follow
// this order. Outcomes are stored column-major so each coordinate is
// contiguous, which keeps the per-coordinate regressions cache-friendly.
//
// Validated at construction:
//   a >= 2, p >= 1, c >= 0, n_i >= c + 2 for every group, no non-finite
//   entries, consistent row counts.
class Dataset {
 public:
  Dataset(Matrix outcomes, Matrix covariates, std::vector<int> group_sizes,
          std::vector<std::string> group_labels = {});

  int n_groups() const { return static_cast<int>(group_sizes_.size()); }
  int n_outcomes() const { return static_cast<int>(outcomes_.cols()); }
  int n_covariates() const { return static_cast<int>(covariates_.cols()); }
  int n_total() const { return static_cast<int>(outcomes_.rows()); }
  int group_size(int i) const { return group_sizes_.at(i); }
  int group_offset(int i) const { return offsets_.at(i); }

  const Matrix& outcomes() const { return outcomes_; }
  const Matrix& covariates() const { return covariates_; }
  const std::vector<int>& group_sizes() const { return group_sizes_; }
  const std::vector<std::string>& group_labels() const { return labels_; }

 private:
  Matrix outcomes_;    // N x p
  Matrix covariates_;  // N x c (c may be 0)
  std::vector<int> group_sizes_;
  std::vector<int> offsets_;
  std::vector<std::string> labels_;
};

}  // namespace mancova

#endif  // MANCOVA_DATASET_HPP
