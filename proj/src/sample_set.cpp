#include "sbridge/sample_set.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

#include <Eigen/Eigenvalues>

namespace sbridge {

SampleSet::SampleSet(Matrix pts, std::string lbl)
    : points(std::move(pts)), label(std::move(lbl)) {
  weights = uniform_weights(points.rows());
}

SampleSet::SampleSet(Matrix pts, Vector w, std::string lbl)
    : points(std::move(pts)), weights(std::move(w)), label(std::move(lbl)) {}

Vector SampleSet::uniform_weights(Index n) {
  return Vector::Constant(n, 1.0 / static_cast<double>(n));
}

void SampleSet::validate() const {
  if (points.rows() < 1 || points.cols() < 1) {
    throw std::invalid_argument("SampleSet: need n >= 1 points in d >= 1");
  }
  if (weights.size() != points.rows()) {
    throw std::invalid_argument("SampleSet: weights length does not match point count");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("SampleSet: non-finite point entry");
  }
  long double total = 0.0L;
  for (Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("SampleSet: weights must be nonnegative and finite");
    }
    total += w;
  }
  if (std::fabs(static_cast<double>(total - 1.0L)) > 1e-12) {
    throw std::invalid_argument("SampleSet: weights must sum to 1 within 1e-12");
  }
}

Matrix symmetric_sqrt(const Matrix& m, double eig_floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  Vector lambda = solver.eigenvalues().cwiseMax(eig_floor).cwiseMax(0.0);
  return solver.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         solver.eigenvectors().transpose();
}

Matrix symmetric_inverse(const Matrix& m, double eig_floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  Vector lambda = solver.eigenvalues().cwiseMax(eig_floor);
  return solver.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
         solver.eigenvectors().transpose();
}

std::string to_round_trip_string(double value) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

}  // namespace sbridge
