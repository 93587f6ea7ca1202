#include "sbridge/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbridge/rng.hpp"

namespace sbridge {

namespace {

constexpr double kPi = std::numbers::pi;

// Mixture layout: 8 unit-variance modes on a circle of radius 8 in the first
// two coordinates (on the line in 1-D).
constexpr int kMixtureModes = 8;
constexpr double kMixtureRadius = 8.0;

void planar_only(const DatasetSpec& spec) {
  if (spec.dim != 2) {
    throw std::invalid_argument(std::string(to_string(spec.name)) +
                                ": planar dataset requires dim = 2");
  }
}

}  // namespace

DatasetName dataset_name_from_string(const std::string& name) {
  if (name == "gaussian") return DatasetName::kGaussian;
  if (name == "gaussian-mixture") return DatasetName::kGaussianMixture;
  if (name == "moons") return DatasetName::kMoons;
  if (name == "circles") return DatasetName::kCircles;
  if (name == "s-curve") return DatasetName::kSCurve;
  if (name == "checkerboard") return DatasetName::kCheckerboard;
  throw std::invalid_argument("unknown dataset name: " + name);
}

const char* to_string(DatasetName name) {
  switch (name) {
    case DatasetName::kGaussian: return "gaussian";
    case DatasetName::kGaussianMixture: return "gaussian-mixture";
    case DatasetName::kMoons: return "moons";
    case DatasetName::kCircles: return "circles";
    case DatasetName::kSCurve: return "s-curve";
    case DatasetName::kCheckerboard: return "checkerboard";
  }
  throw std::invalid_argument("unknown dataset name");
}

SampleSet generate(const DatasetSpec& spec) {
  if (spec.n < 1) {
    throw std::invalid_argument("generate: n must be >= 1");
  }
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw std::invalid_argument("generate: noise must be a nonnegative real");
  }
  if (spec.dim < 1) {
    throw std::invalid_argument("generate: dim must be >= 1");
  }

  const Index n = spec.n;
  const int d = spec.dim;
  Matrix points;

  switch (spec.name) {
    case DatasetName::kGaussian: {
      points.resize(n, d);
      for (Index i = 0; i < n; ++i) {
        CounterRng rng(spec.seed, StreamTag::kDataset, static_cast<uint64_t>(i),
                       static_cast<uint64_t>(spec.name));
        Vector row(d);
        rng.fill_normal(row);
        points.row(i) = row;
      }
      break;
    }
    case DatasetName::kGaussianMixture: {
      points.resize(n, d);
      for (Index i = 0; i < n; ++i) {
        CounterRng rng(spec.seed, StreamTag::kDataset, static_cast<uint64_t>(i),
                       static_cast<uint64_t>(spec.name));
        const int mode = std::min(kMixtureModes - 1,
                                  static_cast<int>(rng.uniform() * kMixtureModes));
        const double angle = 2.0 * kPi * mode / kMixtureModes;
        Vector row(d);
        rng.fill_normal(row);
        row[0] += kMixtureRadius * std::cos(angle);
        if (d >= 2) row[1] += kMixtureRadius * std::sin(angle);
        points.row(i) = row;
      }
      break;
    }
    case DatasetName::kMoons: {
      planar_only(spec);
      points.resize(n, 2);
      for (Index i = 0; i < n; ++i) {
        CounterRng rng(spec.seed, StreamTag::kDataset, static_cast<uint64_t>(i),
                       static_cast<uint64_t>(spec.name));
        const double a = rng.uniform() * kPi;
        double x, y;
        if (i % 2 == 0) {
          x = std::cos(a);
          y = std::sin(a);
        } else {
          x = 1.0 - std::cos(a);
          y = 0.5 - std::sin(a);
        }
        points(i, 0) = x + spec.noise * rng.normal();
        points(i, 1) = y + spec.noise * rng.normal();
      }
      break;
    }
    case DatasetName::kCircles: {
      planar_only(spec);
      points.resize(n, 2);
      for (Index i = 0; i < n; ++i) {
        CounterRng rng(spec.seed, StreamTag::kDataset, static_cast<uint64_t>(i),
                       static_cast<uint64_t>(spec.name));
        const double r = (i % 2 == 0) ? 1.0 : 0.5;
        const double a = rng.uniform() * 2.0 * kPi;
        points(i, 0) = r * std::cos(a) + spec.noise * rng.normal();
        points(i, 1) = r * std::sin(a) + spec.noise * rng.normal();
      }
      break;
    }
    case DatasetName::kSCurve: {
      planar_only(spec);
      points.resize(n, 2);
      for (Index i = 0; i < n; ++i) {
        CounterRng rng(spec.seed, StreamTag::kDataset, static_cast<uint64_t>(i),
                       static_cast<uint64_t>(spec.name));
        const double t = rng.uniform() * 3.0 * kPi - 1.5 * kPi;
        const double sign = t >= 0.0 ? 1.0 : -1.0;
        points(i, 0) = std::sin(t) + spec.noise * rng.normal();
        points(i, 1) = sign * (std::cos(t) - 1.0) + spec.noise * rng.normal();
      }
      break;
    }
    case DatasetName::kCheckerboard: {
      planar_only(spec);
      points.resize(n, 2);
      // 4x4 board on [-2, 2]^2; the 8 cells with even coordinate-sum carry
      // uniform mass.
      for (Index i = 0; i < n; ++i) {
        CounterRng rng(spec.seed, StreamTag::kDataset, static_cast<uint64_t>(i),
                       static_cast<uint64_t>(spec.name));
        const int cell = std::min(7, static_cast<int>(rng.uniform() * 8.0));
        const int col = cell % 4 - 2;
        const int row = (col % 2 == 0) ? (cell / 4 == 0 ? -2 : 0)
                                       : (cell / 4 == 0 ? -1 : 1);
        points(i, 0) = col + rng.uniform() + spec.noise * rng.normal();
        points(i, 1) = row + rng.uniform() + spec.noise * rng.normal();
      }
      break;
    }
  }

  return SampleSet(std::move(points), to_string(spec.name));
}

}  // namespace sbridge
