#pragma once

#include <cstdint>

#include "sbridge/drift.hpp"
#include "sbridge/gaussian_bridge.hpp"
#include "sbridge/sample_set.hpp"

namespace sbridge {

// Weighted first and second moments of a sample set (population convention:
// the covariance is normalized by total weight, no bias correction).
struct MomentSummary {
  Vector mean;
  Matrix cov;
  Index count = 0;
};

// Requires n >= 2.
MomentSummary empirical_moments(const SampleSet& set);

// Squared Bures-Wasserstein distance between the Gaussian surrogates:
// ‖m_p - m_q‖² + tr(S_p + S_q - 2 (S_p^{1/2} S_q S_p^{1/2})^{1/2}).
double bures_wasserstein_sq(const MomentSummary& p, const MomentSummary& q);

// Unexplained variance percentage 100 BW²(N_gen, N_ref) / (0.5 tr(Cov_ref)).
double bw_uvp(const SampleSet& generated, const SampleSet& reference);

// Monte Carlo estimate of ‖b_hat_t - b*_t‖²_{L²(p*_t)} over n_mc draws from
// the oracle marginal at t.
double mse_drift(const BridgeModel& model, const GaussianBridge& oracle,
                 double t, Index n_mc, uint64_t seed);

// Energy distance 2 E‖X-Y‖ - E‖X-X'‖ - E‖Y-Y'‖ between the two empirical
// distributions, exact over all weighted pairs. Sets larger than 4000 points
// are subsampled first (seeded), keeping the computation exact on the
// subsample.
double energy_distance(const SampleSet& a, const SampleSet& b, uint64_t seed);

// Exact 1-D 2-Wasserstein distance via the quantile coupling; reduces to the
// root-mean-square of sorted differences for uniform equal-size sets.
double w2_1d(const SampleSet& a, const SampleSet& b);

}  // namespace sbridge
