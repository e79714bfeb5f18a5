#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace liegeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Symmetric bilinear form stored as its Gram matrix in the algebra basis.
using SymForm = Eigen::MatrixXd;

/// Malformed input: bad shapes, broken invariants, inconsistent declarations.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation could not produce a trustworthy number (degeneracy, overflow, step failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. x <= 0 in the aff chart).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace liegeo
