#pragma once

#include <cstdint>
#include <string>

#include "sbridge/sample_set.hpp"

namespace sbridge {

enum class DatasetName {
  kGaussian,
  kGaussianMixture,
  kMoons,
  kCircles,
  kSCurve,
  kCheckerboard,
};

// Throws std::invalid_argument on unknown names.
DatasetName dataset_name_from_string(const std::string& name);
const char* to_string(DatasetName name);

// Recipe for a toy dataset. Generation is a pure function of the fields:
// identical specs produce bit-identical sample sets.
struct DatasetSpec {
  DatasetName name = DatasetName::kGaussian;
  Index n = 0;
  uint64_t seed = 0;
  double noise = 0.0;
  int dim = 2;
};

// The planar shapes (moons, circles, s-curve, checkerboard) require dim == 2
// and add isotropic Gaussian noise of scale `noise`; gaussian and
// gaussian-mixture support any dim >= 1 and ignore `noise`.
SampleSet generate(const DatasetSpec& spec);

}  // namespace sbridge
