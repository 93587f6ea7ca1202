#pragma once

#include "sbridge/common.hpp"
#include "sbridge/sample_set.hpp"
#include "sbridge/sinkhorn.hpp"

namespace sbridge {

// Everything needed to evaluate the bridge drift: the endpoint atoms of the
// simulated direction, one potential value per atom, and the regularization.
// Drift evaluations are invariant under potential -> potential + c.
struct BridgeModel {
  Matrix atoms;      // n x d
  Vector potential;  // length n
  double eps = 0.0;

  Index size() const { return atoms.rows(); }
  Index dim() const { return atoms.cols(); }
  void validate() const;

  // max_j ‖Y_j‖, the support radius used by the Lipschitz bound.
  double support_radius() const;
};

// Softmax weights over the atoms at query (t, z):
//   logits_j = (potential_j - ‖z - Y_j‖² / (2(1-t))) / eps
// computed with max subtraction. Ties resolve to uniform weight over the
// tied atoms.
struct SoftmaxWeights {
  Vector logits;
  Vector weights;
};

// t must lie in [0, 1): the horizon t = 1 is singular and is a hard error.
SoftmaxWeights weights(const BridgeModel& model, double t,
                       const Eigen::Ref<const Vector>& z);

// Weighted atom average sum_j w_j Y_j; always in the convex hull of atoms.
Vector barycentric_map(const BridgeModel& model, double t,
                       const Eigen::Ref<const Vector>& z);

// (1-t)^{-1} (-z + barycentric_map(model, t, z)).
Vector drift(const BridgeModel& model, double t,
             const Eigen::Ref<const Vector>& z);

// Row-wise drift over a batch of query points; rows are processed
// independently (parallelized, no cross-row reductions).
Matrix drift_batch(const BridgeModel& model, double t,
                   const Eigen::Ref<const Matrix>& z_batch);
void drift_batch_into(const BridgeModel& model, double t,
                      const Eigen::Ref<const Matrix>& z_batch, Matrix& out);

// Point-source bridge model: potential_j = ½‖Y_j‖², no solver run needed.
BridgeModel follmer_model(const SampleSet& target, double eps);

enum class BridgeDirection { kForward, kBackward };

// forward -> (target atoms, g); backward -> (source atoms, f). Non-uniform
// endpoint weights are folded into the potential (an exact no-op for uniform
// sets) so the softmax stays unweighted.
BridgeModel from_potentials(const PotentialPair& pair, const SampleSet& source,
                            const SampleSet& target, BridgeDirection direction,
                            double eps);

// Lipschitz bound (1-t)^{-1} (1 ∨ R²((1-t) eps)^{-1}) on the drift, with R a
// support radius >= max_j ‖Y_j‖. Step-size heuristics and diagnostics only.
double lipschitz_bound(const BridgeModel& model, double t, double support_radius);

}  // namespace sbridge
