#include "sbridge/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sbridge {

namespace {

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * static_cast<uint64_t>(b);
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

constexpr double kTwoPow53Inv = 0x1.0p-53;

}  // namespace

std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key) {
  constexpr uint32_t kMul0 = 0xD2511F53u;
  constexpr uint32_t kMul1 = 0xCD9E8D57u;
  constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMul0, counter[0], hi0, lo0);
    mul_hi_lo(kMul1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

uint64_t derive_seed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ull);
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(uint64_t seed, StreamTag tag, uint64_t id0, uint64_t id1)
    : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)} {
  if (id0 > 0xffffffffull || id1 > 0xffffffffull) {
    throw std::invalid_argument("CounterRng: stream ids must fit in 32 bits");
  }
  ids_ = {static_cast<uint32_t>(id0), static_cast<uint32_t>(id1),
          static_cast<uint32_t>(tag)};
}

void CounterRng::refill() {
  const std::array<uint32_t, 4> out =
      philox4x32({block_, ids_[0], ids_[1], ids_[2]}, key_);
  ++block_;
  buffer_[0] = (static_cast<uint64_t>(out[0]) << 32) | out[1];
  buffer_[1] = (static_cast<uint64_t>(out[2]) << 32) | out[3];
  available_ = 2;
}

uint64_t CounterRng::next_u64() {
  if (available_ == 0) refill();
  return buffer_[2 - available_--];
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double CounterRng::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
}

double CounterRng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

void CounterRng::fill_normal(Eigen::Ref<Vector> out) {
  for (Index i = 0; i < out.size(); ++i) out[i] = normal();
}

}  // namespace sbridge
