#ifndef MANCOVA_HYPOTHESIS_HPP
#define MANCOVA_HYPOTHESIS_HPP

#include "mancova/types.hpp"

namespace mancova {

// Contrast matrix H (r x ap) with H 1 = 0 and full row rank.
class ContrastMatrix {
 public:
  explicit ContrastMatrix(Matrix h);
  const Matrix& matrix() const { return h_; }
  int rows() const { return static_cast<int>(h_.rows()); }

 private:
  Matrix h_;
};

// The unique symmetric idempotent matrix T = H'(HH')^+ H encoding the
// hypothesis H mu = 0. rank(T) is reported as the rounded trace, which is
// exact for projectors. Construction validates symmetry, idempotence,
// T 1 = 0 and the trace-rank identity.
class HypothesisProjector {
 public:
  HypothesisProjector(Matrix t, int rank);
  const Matrix& matrix() const { return t_; }
  int rank() const { return rank_; }
  int dim() const { return static_cast<int>(t_.rows()); }

 private:
  Matrix t_;
  int rank_;
};

HypothesisProjector projector_from_contrast(const ContrastMatrix& contrast);

// T = (I_a - J_a / a) (x) I_p for the hypothesis of equal adjusted means;
// rank (a-1)p.
HypothesisProjector one_way_projector(int n_groups, int n_outcomes);

}  // namespace mancova

#endif  // MANCOVA_HYPOTHESIS_HPP
