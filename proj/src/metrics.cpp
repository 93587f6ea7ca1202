#include "sbridge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sbridge/parallel.hpp"
#include "sbridge/rng.hpp"

namespace sbridge {

namespace {

constexpr Index kSubsampleLimit = 4000;

SampleSet maybe_subsample(const SampleSet& set, uint64_t seed, uint64_t which) {
  if (set.size() <= kSubsampleLimit) return set;
  // Partial Fisher-Yates over the index array, then renormalize the selected
  // weights.
  std::vector<Index> idx(set.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  CounterRng rng(seed, StreamTag::kSubsample, which);
  for (Index k = 0; k < kSubsampleLimit; ++k) {
    const Index span = set.size() - k;
    const Index offset =
        std::min<Index>(span - 1, static_cast<Index>(rng.uniform() * span));
    std::swap(idx[k], idx[k + offset]);
  }
  Matrix points(kSubsampleLimit, set.dim());
  Vector weights(kSubsampleLimit);
  for (Index k = 0; k < kSubsampleLimit; ++k) {
    points.row(k) = set.points.row(idx[k]);
    weights[k] = set.weights[idx[k]];
  }
  long double total = 0.0L;
  for (Index k = 0; k < kSubsampleLimit; ++k) total += weights[k];
  weights /= static_cast<double>(total);
  return SampleSet(std::move(points), std::move(weights), set.label);
}

// sum_i sum_j wa_i wb_j ‖x_i - y_j‖ with per-row parallel fills and a serial
// outer reduction.
double weighted_mean_distance(const SampleSet& a, const SampleSet& b) {
  Vector row_terms(a.size());
  parallel_for(a.size(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < b.size(); ++j) {
        acc += b.weights[j] *
               std::sqrt((a.points.row(i) - b.points.row(j)).squaredNorm());
      }
      row_terms[i] = acc;
    }
  });
  double total = 0.0;
  for (Index i = 0; i < a.size(); ++i) total += a.weights[i] * row_terms[i];
  return total;
}

}  // namespace

MomentSummary empirical_moments(const SampleSet& set) {
  set.validate();
  if (set.size() < 2) {
    throw std::invalid_argument("empirical_moments: need at least 2 points");
  }
  MomentSummary summary;
  summary.count = set.size();
  summary.mean = set.points.transpose() * set.weights;
  const Matrix centered = set.points.rowwise() - summary.mean.transpose();
  const Matrix cov =
      centered.transpose() * set.weights.asDiagonal() * centered;
  summary.cov = 0.5 * (cov + cov.transpose());
  return summary;
}

double bures_wasserstein_sq(const MomentSummary& p, const MomentSummary& q) {
  if (p.mean.size() != q.mean.size()) {
    throw std::invalid_argument("bures_wasserstein_sq: dimension mismatch");
  }
  const Matrix p_sqrt = symmetric_sqrt(p.cov, 0.0);
  const Matrix mixed = p_sqrt * q.cov * p_sqrt;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (mixed + mixed.transpose()));
  const double cross = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double value = (p.mean - q.mean).squaredNorm() + p.cov.trace() +
                       q.cov.trace() - 2.0 * cross;
  return std::max(0.0, value);
}

double bw_uvp(const SampleSet& generated, const SampleSet& reference) {
  const MomentSummary gen = empirical_moments(generated);
  const MomentSummary ref = empirical_moments(reference);
  const double denom = 0.5 * ref.cov.trace();
  if (!(denom > 0.0)) {
    throw NumericalError("bw_uvp: reference covariance has zero trace");
  }
  return 100.0 * bures_wasserstein_sq(gen, ref) / denom;
}

double mse_drift(const BridgeModel& model, const GaussianBridge& oracle,
                 double t, Index n_mc, uint64_t seed) {
  if (!(t >= 0.0) || t >= 1.0) {
    throw std::domain_error("mse_drift: t must lie in [0, 1)");
  }
  if (n_mc < 1) throw std::invalid_argument("mse_drift: n_mc must be >= 1");
  const SampleSet probe = sample_marginal(oracle, t, n_mc, seed);
  const auto [gain, offset] = oracle_drift_coeffs(oracle, t);
  const Matrix est = drift_batch(model, t, probe.points);
  const Matrix exact = (gain * probe.points.transpose()).colwise() + offset;
  return (est - exact.transpose()).rowwise().squaredNorm().mean();
}

double energy_distance(const SampleSet& a, const SampleSet& b, uint64_t seed) {
  a.validate();
  b.validate();
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("energy_distance: dimension mismatch");
  }
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("energy_distance: need at least 2 points each");
  }
  const SampleSet sa = maybe_subsample(a, seed, 0);
  const SampleSet sb = maybe_subsample(b, seed, 1);
  const double cross = weighted_mean_distance(sa, sb);
  const double within_a = weighted_mean_distance(sa, sa);
  const double within_b = weighted_mean_distance(sb, sb);
  return 2.0 * cross - within_a - within_b;
}

double w2_1d(const SampleSet& a, const SampleSet& b) {
  a.validate();
  b.validate();
  if (a.dim() != 1 || b.dim() != 1) {
    throw std::invalid_argument("w2_1d: requires 1-d samples");
  }

  auto sorted_atoms = [](const SampleSet& s) {
    std::vector<std::pair<double, double>> atoms(s.size());
    for (Index i = 0; i < s.size(); ++i) {
      atoms[i] = {s.points(i, 0), s.weights[i]};
    }
    std::sort(atoms.begin(), atoms.end());
    return atoms;
  };
  const auto xs = sorted_atoms(a);
  const auto ys = sorted_atoms(b);

  // Quantile coupling: march through merged cumulative weights.
  long double acc = 0.0L;
  long double done = 0.0L;
  size_t i = 0, j = 0;
  long double cum_x = xs[0].second;
  long double cum_y = ys[0].second;
  while (i < xs.size() && j < ys.size()) {
    const long double next = std::min(cum_x, cum_y);
    const long double mass = next - done;
    if (mass > 0.0L) {
      const double diff = xs[i].first - ys[j].first;
      acc += mass * diff * diff;
    }
    done = next;
    if (cum_x <= cum_y) {
      ++i;
      if (i < xs.size()) cum_x += xs[i].second;
    } else {
      ++j;
      if (j < ys.size()) cum_y += ys[j].second;
    }
  }
  return std::sqrt(static_cast<double>(acc));
}

}  // namespace sbridge
