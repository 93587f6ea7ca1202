#include "sbridge/gaussian_bridge.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sbridge/drift.hpp"
#include "sbridge/parallel.hpp"
#include "sbridge/rng.hpp"

namespace sbridge {

namespace {

constexpr double kEigFloor = 1e-12;

void check_time_open(double t) {
  if (!(t >= 0.0) || t >= 1.0) {
    throw std::domain_error("gaussian bridge: time must satisfy 0 <= t < 1");
  }
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void GaussianParams::validate() const {
  if (mean.size() < 1 || cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw std::invalid_argument("GaussianParams: inconsistent shapes");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw std::invalid_argument("GaussianParams: non-finite entry");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("GaussianParams: covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("GaussianParams: covariance is not positive definite");
  }
}

double GaussianBridge::potential_g(const Eigen::Ref<const Vector>& y) const {
  const Vector v = y - target.mean;
  return 0.5 * v.dot(g_quadratic * v) - v.dot(source.mean - target.mean);
}

GaussianBridge gaussian_bridge(const GaussianParams& source,
                               const GaussianParams& target, double eps) {
  source.validate();
  target.validate();
  if (source.dim() != target.dim()) {
    throw std::invalid_argument("gaussian_bridge: dimension mismatch");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("gaussian_bridge: eps must be positive");
  }

  const Index d = source.dim();
  const Matrix& a_cov = source.cov;
  const Matrix& b_cov = target.cov;
  const Matrix identity = Matrix::Identity(d, d);

  const Matrix a_sqrt = symmetric_sqrt(a_cov, kEigFloor);
  const Matrix a_sqrt_inv = symmetric_inverse(a_sqrt, kEigFloor);
  const Matrix inner =
      symmetrize(a_sqrt * b_cov * a_sqrt) + (eps * eps / 4.0) * identity;
  const Matrix inner_sqrt = symmetric_sqrt(inner, kEigFloor);

  GaussianBridge bridge;
  bridge.source = source;
  bridge.target = target;
  bridge.eps = eps;
  bridge.cross_cov = a_sqrt * inner_sqrt * a_sqrt_inv - (eps / 2.0) * identity;

  // Target block of the inverse joint covariance: R = (B - Cᵀ A^{-1} C)^{-1}.
  const Matrix a_inv = symmetric_inverse(a_cov, kEigFloor);
  const Matrix schur =
      symmetrize(b_cov - bridge.cross_cov.transpose() * a_inv * bridge.cross_cov);
  const Matrix r = symmetric_inverse(schur, kEigFloor);

  bridge.tilt_precision = symmetrize(r - identity / eps);
  bridge.tilt_linear = (target.mean - source.mean) / eps;
  bridge.g_quadratic = symmetrize(identity + eps * (symmetric_inverse(b_cov, kEigFloor) - r));
  return bridge;
}

std::pair<Matrix, Vector> oracle_drift_coeffs(const GaussianBridge& bridge,
                                              double t) {
  check_time_open(t);
  const Index d = bridge.source.dim();
  const double s = (1.0 - t) * bridge.eps;
  const Matrix identity = Matrix::Identity(d, d);
  const Matrix precision = symmetrize(bridge.tilt_precision + identity / s);
  const Matrix w = symmetric_inverse(precision, 0.0);
  const Vector& b_mean = bridge.target.mean;
  Matrix gain = (w / s - identity) / (1.0 - t);
  Vector offset =
      (b_mean + w * (bridge.tilt_linear - b_mean / s)) / (1.0 - t);
  return {std::move(gain), std::move(offset)};
}

Vector oracle_drift(const GaussianBridge& bridge, double t,
                    const Eigen::Ref<const Vector>& z) {
  if (z.size() != bridge.source.dim()) {
    throw std::invalid_argument("oracle_drift: dimension mismatch");
  }
  const auto [gain, offset] = oracle_drift_coeffs(bridge, t);
  return gain * z + offset;
}

GaussianParams oracle_marginal(const GaussianBridge& bridge, double t) {
  if (!(t >= 0.0) || !(t <= 1.0)) {
    throw std::domain_error("oracle_marginal: t must lie in [0, 1]");
  }
  const double u = 1.0 - t;
  GaussianParams params;
  params.mean = u * bridge.source.mean + t * bridge.target.mean;
  params.cov = u * u * bridge.source.cov + t * t * bridge.target.cov +
               t * u * (bridge.cross_cov + bridge.cross_cov.transpose()) +
               t * u * bridge.eps *
                   Matrix::Identity(bridge.source.dim(), bridge.source.dim());
  return params;
}

namespace {

SampleSet draw_from(const GaussianParams& params, Index count, uint64_t seed,
                    StreamTag tag, uint64_t stream_id) {
  if (count < 1) throw std::invalid_argument("gaussian sampling: count must be >= 1");
  const Index d = params.dim();
  const Matrix chol = Eigen::LLT<Matrix>(params.cov).matrixL();
  Matrix draws(count, d);
  parallel_for(count, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector xi(d);
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      CounterRng rng(seed, tag, static_cast<uint64_t>(i), stream_id);
      rng.fill_normal(xi);
      draws.row(i) = (params.mean + chol * xi).transpose();
    }
  });
  return SampleSet(std::move(draws), "gaussian");
}

}  // namespace

SampleSet sample_marginal(const GaussianBridge& bridge, double t, Index count,
                          uint64_t seed) {
  const GaussianParams params = oracle_marginal(bridge, t);
  return draw_from(params, count, seed, StreamTag::kGaussianDraw, 0);
}

SampleSet sample_gaussian(const GaussianParams& params, Index count,
                          uint64_t seed, uint64_t stream_id) {
  params.validate();
  return draw_from(params, count, seed, StreamTag::kTrial, stream_id);
}

MseExperimentResult mse_experiment(const MseExperimentConfig& config) {
  if (config.dim < 1) throw std::invalid_argument("mse_experiment: dim must be >= 1");
  if (config.n_grid.empty() || config.tau_grid.empty() || config.trials < 1) {
    throw std::invalid_argument("mse_experiment: empty grid");
  }
  for (const double tau : config.tau_grid) {
    if (!(tau > 0.0) || tau >= 1.0) {
      throw std::invalid_argument("mse_experiment: tau values must lie in (0, 1)");
    }
  }

  const Index d = config.dim;
  MseExperimentResult result;
  result.source.mean = Vector::Zero(d);
  result.source.cov = Matrix::Identity(d, d);

  // One seeded SPD target covariance for the whole experiment.
  {
    CounterRng rng(config.seed, StreamTag::kSpdMatrix, 0);
    Matrix raw(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) raw(i, j) = rng.normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(raw).householderQ();
    Vector lambda(d);
    for (Index i = 0; i < d; ++i) lambda[i] = 0.5 + 1.5 * rng.uniform();
    Matrix cov = q * lambda.asDiagonal() * q.transpose();
    result.target.mean = Vector::Zero(d);
    result.target.cov = 0.5 * (cov + cov.transpose());
  }

  const GaussianBridge bridge =
      gaussian_bridge(result.source, result.target, config.eps);

  SolverConfig solver;
  solver.eps = config.eps;
  solver.tol = config.tol;
  solver.max_iter = config.max_iter;

  uint64_t run_index = 0;
  for (size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    for (size_t ti = 0; ti < config.tau_grid.size(); ++ti) {
      const double tau = config.tau_grid[ti];
      const auto [gain, offset] = oracle_drift_coeffs(bridge, tau);
      for (int trial = 0; trial < config.trials; ++trial, ++run_index) {
        const Index n = config.n_grid[ni];
        const SampleSet source_draw =
            sample_gaussian(result.source, n, config.seed, 2 * run_index);
        const SampleSet target_draw =
            sample_gaussian(result.target, n, config.seed, 2 * run_index + 1);
        const PotentialPair pair = fit(source_draw, target_draw, solver);
        const BridgeModel model = from_potentials(
            pair, source_draw, target_draw, BridgeDirection::kForward, config.eps);

        const SampleSet probe =
            sample_marginal(bridge, tau, config.n_mc,
                            derive_seed(config.seed, run_index + 1));
        const Matrix est = drift_batch(model, tau, probe.points);
        const Matrix exact =
            (gain * probe.points.transpose()).colwise() + offset;
        const double mse =
            (est - exact.transpose()).rowwise().squaredNorm().mean();
        result.records.push_back({n, tau, trial, mse});
      }
    }
  }
  return result;
}

}  // namespace sbridge
