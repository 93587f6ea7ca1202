#include "sbridge/sde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "sbridge/parallel.hpp"
#include "sbridge/rng.hpp"

namespace sbridge {

void SimConfig::validate() const {
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw std::invalid_argument("SimConfig: tau must lie strictly in (0, 1)");
  }
  if (steps < 1) {
    throw std::invalid_argument("SimConfig: steps must be >= 1");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("SimConfig: eps must be positive");
  }
}

TrajectoryBatch simulate(const BridgeModel& model, const SampleSet& init,
                         const SimConfig& config) {
  config.validate();
  model.validate();
  init.validate();
  if (init.dim() != model.dim()) {
    throw std::invalid_argument("simulate: init dimension does not match model");
  }
  if (config.eps != model.eps) {
    throw std::invalid_argument("simulate: config eps does not match model eps");
  }

  const Index batch = init.size();
  const Index d = init.dim();
  const int n_steps = config.steps;
  const double eta = config.tau / n_steps;
  const double noise_scale = config.zero_noise ? 0.0 : std::sqrt(eta * config.eps);

  TrajectoryBatch out;
  out.seed = config.seed;
  out.config = config;
  out.full_path = config.store_full_path;
  out.times.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) out.times[k] = eta * k;

  Matrix state = init.points;
  if (out.full_path) {
    out.states.reserve(n_steps + 1);
    out.states.push_back(state);
  } else {
    out.states.push_back(state);
  }

  Matrix drift_term(batch, d);
  Matrix noise(batch, d);
  for (int k = 0; k < n_steps; ++k) {
    const double t_k = eta * k;
    drift_batch_into(model, t_k, state, drift_term);
    if (noise_scale > 0.0) {
      parallel_for(batch, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        Vector row(d);
        for (std::ptrdiff_t b = begin; b < end; ++b) {
          CounterRng rng(config.seed, StreamTag::kSimulate,
                         static_cast<uint64_t>(b), static_cast<uint64_t>(k));
          rng.fill_normal(row);
          noise.row(b) = row;
        }
      });
      state += eta * drift_term + noise_scale * noise;
    } else {
      state += eta * drift_term;
    }
    if (!state.allFinite()) {
      for (Index b = 0; b < batch; ++b) {
        if (!state.row(b).allFinite()) {
          throw NumericalError("simulate: trajectory " + std::to_string(b) +
                               " became non-finite at step " + std::to_string(k + 1));
        }
      }
    }
    if (out.full_path) out.states.push_back(state);
  }
  if (!out.full_path) out.states.push_back(state);
  return out;
}

SampleSet endpoints(const TrajectoryBatch& batch) {
  if (batch.states.empty()) {
    throw std::invalid_argument("endpoints: empty trajectory batch");
  }
  return SampleSet(batch.states.back(), "endpoints");
}

SampleSet bridge_mixture_sample(const PlanView& view, double t, Index count,
                                uint64_t seed) {
  view.source.validate();
  view.target.validate();
  if (view.pair.f.size() != view.source.size() ||
      view.pair.g.size() != view.target.size()) {
    throw std::invalid_argument("bridge_mixture_sample: pair/set mismatch");
  }
  if (!(t >= 0.0) || !(t <= 1.0)) {
    throw std::domain_error("bridge_mixture_sample: t must lie in [0, 1]");
  }
  if (count < 1) {
    throw std::invalid_argument("bridge_mixture_sample: count must be >= 1");
  }
  if (!view.pair.converged) {
    std::cerr << "warning: sampling a bridge mixture from non-converged potentials\n";
  }

  const Index m = view.source.size();
  const Index n = view.target.size();
  const double eps = view.pair.eps;

  // Discrete plan probabilities a_i b_j gamma_ij, renormalized. Log weights
  // first, then a max-subtracted cumulative table for inverse-CDF sampling.
  std::vector<double> logp(static_cast<size_t>(m) * n);
  {
    Vector c(n);
    const Vector log_a = view.source.weights.array().log();
    const Vector log_b = view.target.weights.array().log();
    for (Index i = 0; i < m; ++i) {
      c = 0.5 * (view.target.points.rowwise() - view.source.points.row(i))
                    .rowwise()
                    .squaredNorm();
      for (Index j = 0; j < n; ++j) {
        logp[static_cast<size_t>(i) * n + j] =
            log_a[i] + log_b[j] +
            (view.pair.f[i] + view.pair.g[j] - c[j]) / eps;
      }
    }
  }
  const double log_max = *std::max_element(logp.begin(), logp.end());
  if (!std::isfinite(log_max)) {
    throw NumericalError("bridge_mixture_sample: plan is numerically degenerate");
  }
  std::vector<double> cumulative(logp.size());
  long double acc = 0.0L;
  for (size_t k = 0; k < logp.size(); ++k) {
    acc += std::exp(logp[k] - log_max);
    cumulative[k] = static_cast<double>(acc);
  }
  const double total = cumulative.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalError("bridge_mixture_sample: plan is numerically degenerate");
  }

  Matrix draws(count, view.source.dim());
  const double noise_sd = std::sqrt(t * (1.0 - t) * eps);
  parallel_for(count, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector xi(view.source.dim());
    for (std::ptrdiff_t r = begin; r < end; ++r) {
      CounterRng pick(seed, StreamTag::kMixturePair, static_cast<uint64_t>(r));
      const double u = pick.uniform() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const size_t flat = std::min(
          static_cast<size_t>(it - cumulative.begin()), cumulative.size() - 1);
      const Index i = static_cast<Index>(flat / n);
      const Index j = static_cast<Index>(flat % n);
      if (t == 0.0) {
        draws.row(r) = view.source.points.row(i);
      } else if (t == 1.0) {
        draws.row(r) = view.target.points.row(j);
      } else {
        CounterRng noise(seed, StreamTag::kMixtureNoise, static_cast<uint64_t>(r));
        noise.fill_normal(xi);
        draws.row(r) = (1.0 - t) * view.source.points.row(i) +
                       t * view.target.points.row(j) +
                       noise_sd * xi.transpose();
      }
    }
  });
  return SampleSet(std::move(draws), "bridge-mixture");
}

void write_trajectories_csv(const TrajectoryBatch& batch, const std::string& path) {
  if (!batch.full_path) {
    throw std::invalid_argument("write_trajectories_csv: batch has no full path");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << "traj,step,t";
  for (Index j = 0; j < batch.dim(); ++j) out << ",x" << j;
  out << '\n';
  for (Index b = 0; b < batch.batch_size(); ++b) {
    for (size_t k = 0; k < batch.states.size(); ++k) {
      out << b << ',' << k << ',' << to_round_trip_string(batch.times[k]);
      for (Index j = 0; j < batch.dim(); ++j) {
        out << ',' << to_round_trip_string(batch.states[k](b, j));
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace sbridge
