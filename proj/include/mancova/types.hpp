#ifndef MANCOVA_TYPES_HPP
#define MANCOVA_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mancova {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Leverage correction applied to residual-based variance estimators.
// HC0 leaves residuals untouched; HC4 rescales subject ij's residual vector
// by (1 - p_ij)^(-delta_ij/2) with delta_ij = min(4, p_ij / mean leverage).
enum class HcFlavor { HC0, HC4 };

inline const char* to_string(HcFlavor f) {
  return f == HcFlavor::HC0 ? "hc0" : "hc4";
}

// Base error. Two sub-hierarchies: DataError for malformed or inadmissible
// input (CLI exit code 2), NumericalError for conditions detected during
// computation (CLI exit code 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidData : public DataError {
 public:
  using DataError::DataError;
};

class MissingColumn : public DataError {
 public:
  using DataError::DataError;
};

class NonNumericCell : public DataError {
 public:
  using DataError::DataError;
};

class GroupTooSmall : public DataError {
 public:
  using DataError::DataError;
};

class ConfigParse : public DataError {
 public:
  using DataError::DataError;
};

class UnknownScenarioPreset : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class IndexOutOfRange : public DataError {
 public:
  using DataError::DataError;
};

class RankDeficientDesign : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NumericalFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LeverageAtOne : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateVariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularCovariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPSD : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mancova

#endif  // MANCOVA_TYPES_HPP
