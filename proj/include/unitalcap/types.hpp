#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

// Shared scalar/matrix aliases and the error taxonomy.
//
// All numerics run on IEEE-754 doubles. Matrices are dense, column-major
// Eigen types; operators on a d-dimensional system are d x d ComplexMatrix.
// Everything in this library is a value type: no hidden global state, so
// any two calls on distinct objects are safe to run concurrently.

namespace unitalcap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Hard ceiling applied when materializing tensor products and tensor powers.
// Anything bigger than this is out of desk scale for dense linear algebra.
inline constexpr Index kDefaultDimGuard = 4096;
// Cap on the number of Kraus operators materialized by tensor_power.
inline constexpr Index kDefaultKrausCap = 4096;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operand dimensions do not line up (matrix shapes, register lists, ...).
struct ShapeError : Error {
  using Error::Error;
};

// A requested object would exceed the configured dimension guard.
struct DimensionLimitError : Error {
  using Error::Error;
};

// A validated object (density matrix, Kraus set, isometry, ...) fails its
// defining property beyond tolerance.
struct InvariantError : Error {
  using Error::Error;
};

// A scalar parameter is outside its admissible range.
struct ParameterError : Error {
  using Error::Error;
};

// An operand carries weight outside the support of a weight operator.
struct SupportError : Error {
  using Error::Error;
};

// A contract precondition not tied to a single parameter fails
// (e.g. a bound that only applies to unital channels).
struct PreconditionError : Error {
  using Error::Error;
};

// The multiplicativity exponent is undefined because the single-copy
// 2-norm sits at (or above) 1, making log(norm1) vanish.
struct ExponentUndefinedError : PreconditionError {
  using PreconditionError::PreconditionError;
};

// Round-trip decimal rendering (%.17g) used by every text emitter, so CSV
// and JSON output is byte-stable across runs. NaN renders as "nan",
// infinities as "inf"/"-inf".
std::string g17(double x);

}  // namespace unitalcap
