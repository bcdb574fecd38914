#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace kolmo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Shape or ordering problems in user-supplied data (matrix sizes, block
// signatures, empty boxes, malformed DSL nodes).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value outside the mathematical domain of an operation (t <= 0 for C(t),
// a finite-difference point too close to the pole, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Failure of a numerical procedure at run time (factorization, all Monte
// Carlo paths truncated, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration files that do not parse or do not match a schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kolmo
