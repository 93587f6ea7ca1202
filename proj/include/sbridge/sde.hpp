#pragma once

#include <cstdint>
#include <vector>

#include "sbridge/drift.hpp"
#include "sbridge/sample_set.hpp"
#include "sbridge/sinkhorn.hpp"

namespace sbridge {

struct SimConfig {
  double tau = 0.9;    // terminal time, strictly below 1
  int steps = 50;      // Euler-Maruyama steps N; stepsize eta = tau / N
  double eps = 0.1;    // volatility, must match the model
  uint64_t seed = 0;
  bool zero_noise = false;      // test hook: suppress the diffusion term
  bool store_full_path = true;  // endpoints-only memory mode when false

  void validate() const;
};

// B simulated paths on the grid {0, eta, ..., tau}. In endpoints-only mode
// `states` holds just the initial and final slices; the endpoint is
// bit-identical either way.
struct TrajectoryBatch {
  Vector times;                // length N+1
  std::vector<Matrix> states;  // each B x d
  bool full_path = true;
  uint64_t seed = 0;
  SimConfig config;

  Index batch_size() const { return states.empty() ? 0 : states.front().rows(); }
  Index dim() const { return states.empty() ? 0 : states.front().cols(); }
};

// Euler-Maruyama recursion x_{k+1} = x_k + eta b(k eta, x_k) + sqrt(eta eps) xi
// with xi drawn from a counter-based stream keyed by (seed, trajectory, step),
// so neither the batch size nor the thread schedule changes any single path.
TrajectoryBatch simulate(const BridgeModel& model, const SampleSet& init,
                         const SimConfig& config);

// Final states x^{(N)} as a uniform sample set.
SampleSet endpoints(const TrajectoryBatch& batch);

// Exact sampler of the t-marginal of the Brownian-bridge mixture over the
// plan: draws an atom pair (X0, X1) proportional to a_i b_j gamma_ij, then
// returns t X1 + (1-t) X0 + sqrt(t(1-t) eps) xi. At t = 0 or t = 1 this is an
// exact endpoint resample.
SampleSet bridge_mixture_sample(const PlanView& view, double t, Index count,
                                uint64_t seed);

// CSV export with columns traj,step,t,x0..x{d-1}; requires a full-path batch.
void write_trajectories_csv(const TrajectoryBatch& batch, const std::string& path);

}  // namespace sbridge
