#include "sbridge/drift.hpp"

#include <cmath>
#include <iostream>

#include "sbridge/parallel.hpp"

namespace sbridge {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("drift: time must satisfy 0 <= t < 1");
  }
  if (t >= 1.0) {
    throw std::domain_error("drift: the horizon t = 1 is singular");
  }
}

void check_query(const BridgeModel& model, const Eigen::Ref<const Vector>& z) {
  if (z.size() != model.dim()) {
    throw std::invalid_argument("drift: query dimension does not match atoms");
  }
  if (!z.allFinite()) {
    throw std::invalid_argument("drift: non-finite query point");
  }
}

// Shared kernel: fills logits/weights for one query and returns the weighted
// atom average. drift() and drift_batch() both route through here so a batch
// row is bit-identical to the corresponding single evaluation. The gauge
// constant is removed from the potential before it meets the distance term;
// for clustered potentials the subtraction is exact, so a shift by c cancels
// before it can swallow low-order bits.
void weight_kernel(const BridgeModel& model, double t,
                   const Eigen::Ref<const Vector>& z, Vector& logits) {
  const double half_inv = 0.5 / (1.0 - t);
  const double gauge = model.potential.maxCoeff();
  logits = ((model.potential.array() - gauge) -
            half_inv * (model.atoms.rowwise() - z.transpose())
                           .rowwise()
                           .squaredNorm()
                           .array()) /
           model.eps;
}

void drift_row(const BridgeModel& model, double t,
               const Eigen::Ref<const Vector>& z, Vector& logits,
               Eigen::Ref<Vector> out) {
  weight_kernel(model, t, z, logits);
  softmax_inplace(logits);
  out = (model.atoms.transpose() * logits - z) / (1.0 - t);
}

}  // namespace

void BridgeModel::validate() const {
  if (atoms.rows() < 1 || atoms.cols() < 1) {
    throw std::invalid_argument("BridgeModel: need n >= 1 atoms in d >= 1");
  }
  if (potential.size() != atoms.rows()) {
    throw std::invalid_argument("BridgeModel: potential length does not match atoms");
  }
  if (!atoms.allFinite() || !potential.allFinite()) {
    throw std::invalid_argument("BridgeModel: non-finite entry");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("BridgeModel: eps must be positive");
  }
}

double BridgeModel::support_radius() const {
  return atoms.rowwise().norm().maxCoeff();
}

SoftmaxWeights weights(const BridgeModel& model, double t,
                       const Eigen::Ref<const Vector>& z) {
  model.validate();
  check_time(t);
  check_query(model, z);
  SoftmaxWeights out;
  weight_kernel(model, t, z, out.logits);
  out.weights = out.logits;
  softmax_inplace(out.weights);
  return out;
}

Vector barycentric_map(const BridgeModel& model, double t,
                       const Eigen::Ref<const Vector>& z) {
  const SoftmaxWeights w = weights(model, t, z);
  return model.atoms.transpose() * w.weights;
}

Vector drift(const BridgeModel& model, double t,
             const Eigen::Ref<const Vector>& z) {
  model.validate();
  check_time(t);
  check_query(model, z);
  Vector logits(model.size());
  Vector out(model.dim());
  drift_row(model, t, z, logits, out);
  return out;
}

void drift_batch_into(const BridgeModel& model, double t,
                      const Eigen::Ref<const Matrix>& z_batch, Matrix& out) {
  model.validate();
  check_time(t);
  if (z_batch.cols() != model.dim()) {
    throw std::invalid_argument("drift_batch: dimension mismatch");
  }
  if (!z_batch.allFinite()) {
    throw std::invalid_argument("drift_batch: non-finite query point");
  }
  out.resize(z_batch.rows(), z_batch.cols());
  parallel_for(z_batch.rows(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector logits(model.size());
    Vector z(model.dim());
    Vector row(model.dim());
    for (std::ptrdiff_t b = begin; b < end; ++b) {
      z = z_batch.row(b);
      drift_row(model, t, z, logits, row);
      out.row(b) = row;
    }
  });
}

Matrix drift_batch(const BridgeModel& model, double t,
                   const Eigen::Ref<const Matrix>& z_batch) {
  Matrix out;
  drift_batch_into(model, t, z_batch, out);
  return out;
}

BridgeModel follmer_model(const SampleSet& target, double eps) {
  target.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("follmer_model: eps must be positive");
  }
  BridgeModel model;
  model.atoms = target.points;
  model.eps = eps;
  model.potential = 0.5 * target.points.rowwise().squaredNorm();
  // Non-uniform weights fold into the potential: w_j delta_{Y_j} tilted by
  // exp(g_j/eps) equals a uniform set tilted by exp((g_j + eps log(n w_j))/eps).
  const Vector& w = target.weights;
  if (!(w.array() == w[0]).all()) {
    if ((w.array() <= 0.0).any()) {
      throw std::invalid_argument("follmer_model: zero-weight atom");
    }
    model.potential.array() +=
        eps * (w.array() * static_cast<double>(target.size())).log();
  }
  model.validate();
  return model;
}

BridgeModel from_potentials(const PotentialPair& pair, const SampleSet& source,
                            const SampleSet& target, BridgeDirection direction,
                            double eps) {
  source.validate();
  target.validate();
  if (pair.f.size() != source.size() || pair.g.size() != target.size()) {
    throw std::invalid_argument(
        "from_potentials: pair does not match the sample sets");
  }
  if (eps != pair.eps) {
    throw std::invalid_argument("from_potentials: eps does not match the pair");
  }
  if (!pair.converged) {
    std::cerr << "warning: building a bridge model from non-converged potentials"
              << " (marginal_error = " << pair.marginal_error << ")\n";
  }
  BridgeModel model;
  model.eps = eps;
  const bool forward = direction == BridgeDirection::kForward;
  const SampleSet& endpoint = forward ? target : source;
  model.atoms = endpoint.points;
  model.potential = forward ? pair.g : pair.f;
  const Vector& w = endpoint.weights;
  if (!(w.array() == w[0]).all()) {
    if ((w.array() <= 0.0).any()) {
      throw std::invalid_argument("from_potentials: zero-weight atom");
    }
    model.potential.array() +=
        eps * (w.array() * static_cast<double>(endpoint.size())).log();
  }
  model.validate();
  return model;
}

double lipschitz_bound(const BridgeModel& model, double t, double support_radius) {
  model.validate();
  check_time(t);
  if (!(support_radius >= model.support_radius())) {
    throw std::invalid_argument(
        "lipschitz_bound: R must dominate the atom radius");
  }
  const double s = (1.0 - t) * model.eps;
  const double hess = support_radius * support_radius / s;
  return (1.0 / (1.0 - t)) * std::max(1.0, hess);
}

}  // namespace sbridge
