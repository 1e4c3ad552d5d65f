#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cablemap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;

// (y, t) sample block: column 0 holds positions along the detection line in
// meters, column 1 two-way travel times in nanoseconds.
using SamplesYT = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Error hierarchy. The three bases map onto CLI exit codes:
// InputError -> 2, NumericalError -> 3, IoError -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

struct EmptyInput final : InputError {
  using InputError::InputError;
};
struct NonFiniteValue final : InputError {
  using InputError::InputError;
};
struct InvalidGrid final : InputError {
  using InputError::InputError;
};
struct ParseError final : InputError {
  using InputError::InputError;
};
struct TooFewSamples final : InputError {
  using InputError::InputError;
};
struct TooFewPoints final : InputError {
  using InputError::InputError;
};
struct LengthMismatch final : InputError {
  using InputError::InputError;
};
struct OutOfRange final : InputError {
  using InputError::InputError;
};
struct SampleOutOfGrid final : InputError {
  using InputError::InputError;
};

struct DegenerateCluster final : NumericalError {
  using NumericalError::NumericalError;
};
struct NoConvergence final : NumericalError {
  using NumericalError::NumericalError;
};
struct NonPositiveAxes final : NumericalError {
  using NumericalError::NumericalError;
};
struct SingularKernel final : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace cablemap
