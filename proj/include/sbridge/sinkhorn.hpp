#pragma once

#include <limits>
#include <utility>

#include "sbridge/common.hpp"
#include "sbridge/sample_set.hpp"

namespace sbridge {

struct SolverConfig {
  double eps = 0.1;      // entropic regularization
  double tol = 1e-6;     // L1 marginal-error stopping threshold
  int max_iter = 10000;  // sweep budget
  int check_every = 10;  // diagnostic cadence in sweeps

  void validate() const;
};

// Converged dual potentials of the entropic OT problem between two weighted
// sample sets, plus diagnostics. The pair is defined up to the gauge
// (f + c, g - c); everything downstream is invariant to that shift.
struct PotentialPair {
  Vector f;
  Vector g;
  double eps = 0.0;
  int iterations = 0;
  double marginal_error = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Source, target, and potentials bundled for plan queries.
struct PlanView {
  SampleSet source;
  SampleSet target;
  PotentialPair pair;
};

// Quadratic transport cost, ½‖x - y‖². Throws on dimension mismatch.
double cost(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

// Log-domain Sinkhorn with exact alternating updates
//   f_i <- -eps * log sum_j b_j exp((g_j - c_ij)/eps)
//   g_j <- -eps * log sum_i a_i exp((f_i - c_ij)/eps)
// starting from f = g = 0. Cost rows are recomputed on demand, so nothing of
// size m*n is ever stored. Updates parallelize across rows/columns with
// serial per-row reductions; results are identical at every thread count.
class SinkhornSolver {
 public:
  SinkhornSolver(SampleSet source, SampleSet target, SolverConfig config);

  void update_f();
  void update_g();
  // One f-update followed by one g-update.
  void sweep();
  // Sweeps until the L1 marginal error drops to tol or max_iter is reached.
  // Exhausting max_iter is not an error; the converged flag reports it.
  PotentialPair run();

  double marginal_error() const;
  double dual_objective() const;
  int iterations() const { return iterations_; }
  PotentialPair current() const;

  const SampleSet& source() const { return source_; }
  const SampleSet& target() const { return target_; }

 private:
  void check_finite(const Vector& v, const char* which) const;

  SampleSet source_;
  SampleSet target_;
  SolverConfig config_;
  Vector f_;
  Vector g_;
  Vector log_a_;
  Vector log_b_;
  int iterations_ = 0;
};

PotentialPair fit(const SampleSet& source, const SampleSet& target,
                  const SolverConfig& config);

// ‖pi 1 - a‖₁ + ‖piᵀ 1 - b‖₁ for the plan induced by the pair; the two terms
// are also available separately (row, column).
double marginal_error(const SampleSet& source, const SampleSet& target,
                      const PotentialPair& pair);
std::pair<double, double> marginal_errors(const SampleSet& source,
                                          const SampleSet& target,
                                          const PotentialPair& pair);

// Dual objective sum_i a_i f_i + sum_j b_j g_j - eps * (exp(T) - 1) where
// T = logsumexp_ij(log a_i + log b_j + (f_i + g_j - c_ij)/eps), evaluated
// with log-sum-exp stabilization throughout.
double dual_objective(const SampleSet& source, const SampleSet& target,
                      const PotentialPair& pair);

// Density gamma_ij = exp((f_i + g_j - c_ij)/eps) of the plan against the
// product of the marginals; throws std::out_of_range on bad indices.
double plan_density(const PlanView& view, Index i, Index j);

// Transport part sum_ij pi_ij c_ij and entropic part eps * KL(pi | a ⊗ b) of
// the primal objective, used to cross-check the dual at convergence.
std::pair<double, double> primal_parts(const PlanView& view);

}  // namespace sbridge
