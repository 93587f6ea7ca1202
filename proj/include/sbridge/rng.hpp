#pragma once

#include <array>
#include <cstdint>

#include "sbridge/common.hpp"

namespace sbridge {

// Philox 4x32-10 block cipher (Salmon et al., SC'11). A 128-bit counter and a
// 64-bit key produce four independent 32-bit words; distinct counters give
// independent outputs, so draws do not depend on evaluation order.
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// Every consumer of randomness owns a tag so no two subsystems share a
// counter, even under the same seed.
enum class StreamTag : uint32_t {
  kGeneric = 0,
  kDataset = 1,
  kSimulate = 2,
  kMixturePair = 3,
  kMixtureNoise = 4,
  kGaussianDraw = 5,
  kSubsample = 6,
  kSpdMatrix = 7,
  kTrial = 8,
};

// Derives an unrelated child seed (splitmix64 finalizer of seed ^ salt).
uint64_t derive_seed(uint64_t seed, uint64_t salt);

// One logical random stream. The key is the user seed; the counter is
// (block, id0, id1, tag) where the ids are stream coordinates such as point,
// trajectory, or step indices. Each block yields two uniforms or, via
// Box-Muller, two standard normals.
class CounterRng {
 public:
  CounterRng(uint64_t seed, StreamTag tag, uint64_t id0 = 0, uint64_t id1 = 0);

  uint64_t next_u64();
  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1]
  double normal();       // standard Gaussian
  void fill_normal(Eigen::Ref<Vector> out);

 private:
  void refill();

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 3> ids_;
  uint32_t block_ = 0;
  std::array<uint64_t, 2> buffer_{};
  int available_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace sbridge
