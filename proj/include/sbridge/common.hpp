#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace sbridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Thrown on file and stream failures. The CLI maps this to its own exit code,
// distinct from configuration and numerical errors.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an iteration produces non-finite values or a quantity
// degenerates (e.g. an underflowed plan).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log(sum_i exp(v_i)) with max subtraction. -inf entries drop out; if every
// entry is -inf the result is -inf.
inline double log_sum_exp(const Eigen::Ref<const Vector>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

// Overwrites logits with softmax(logits), max-subtracted so that logit spans
// of several thousand stay finite.
inline void softmax_inplace(Vector& logits) {
  const double m = logits.maxCoeff();
  logits = (logits.array() - m).exp();
  logits /= logits.sum();
}

// Symmetric square root via eigendecomposition. Eigenvalues below eig_floor
// are clamped to eig_floor before the square root.
Matrix symmetric_sqrt(const Matrix& m, double eig_floor = 0.0);

// Symmetric inverse via eigendecomposition with the same eigenvalue floor.
Matrix symmetric_inverse(const Matrix& m, double eig_floor = 1e-12);

// Shortest decimal string that round-trips to the same double.
std::string to_round_trip_string(double value);

}  // namespace sbridge
