#pragma once

#include <string>

#include "sbridge/common.hpp"

namespace sbridge {

// A weighted point cloud in R^d. Rows of `points` are atoms; `weights` lives
// on the probability simplex and is uniform unless stated otherwise.
struct SampleSet {
  Matrix points;
  Vector weights;
  std::string label;

  SampleSet() = default;
  explicit SampleSet(Matrix pts, std::string lbl = {});
  SampleSet(Matrix pts, Vector w, std::string lbl = {});

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }

  // Throws std::invalid_argument unless n >= 1, d >= 1, all entries are
  // finite, and the weights are nonnegative and sum to 1 within 1e-12.
  void validate() const;

  static Vector uniform_weights(Index n);
};

}  // namespace sbridge
