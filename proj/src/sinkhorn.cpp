#include "sbridge/sinkhorn.hpp"

#include <cmath>
#include <string>

#include "sbridge/parallel.hpp"

namespace sbridge {

namespace {

// Row i of the cost matrix: ½‖x_i - y_j‖² for all j. The same kernel serves
// cached and on-the-fly use so values are identical by construction.
inline void cost_row(const Matrix& source_pts, const Matrix& target_pts, Index i,
                     Vector& out) {
  out = 0.5 * (target_pts.rowwise() - source_pts.row(i)).rowwise().squaredNorm();
}

inline void cost_col(const Matrix& source_pts, const Matrix& target_pts, Index j,
                     Vector& out) {
  out = 0.5 * (source_pts.rowwise() - target_pts.row(j)).rowwise().squaredNorm();
}

void validate_pair_shapes(const SampleSet& source, const SampleSet& target,
                          const PotentialPair& pair) {
  if (pair.f.size() != source.size() || pair.g.size() != target.size()) {
    throw std::invalid_argument("potential pair does not match the sample sets");
  }
  if (!(pair.eps > 0.0)) {
    throw std::invalid_argument("potential pair has non-positive eps");
  }
}

// Fills s_i = sum_j b_j gamma_ij for every source row (swap roles for the
// column version).
void row_plan_mass(const SampleSet& source, const SampleSet& target,
                   const PotentialPair& pair, const Vector& log_b, Vector& out) {
  const double eps = pair.eps;
  out.resize(source.size());
  parallel_for(source.size(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector c(target.size());
    Vector logits(target.size());
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      cost_row(source.points, target.points, i, c);
      logits = log_b.array() + (pair.f[i] + (pair.g - c).array()) / eps;
      out[i] = std::exp(log_sum_exp(logits));
    }
  });
}

void col_plan_mass(const SampleSet& source, const SampleSet& target,
                   const PotentialPair& pair, const Vector& log_a, Vector& out) {
  const double eps = pair.eps;
  out.resize(target.size());
  parallel_for(target.size(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector c(source.size());
    Vector logits(source.size());
    for (std::ptrdiff_t j = begin; j < end; ++j) {
      cost_col(source.points, target.points, j, c);
      logits = log_a.array() + (pair.g[j] + (pair.f - c).array()) / eps;
      out[j] = std::exp(log_sum_exp(logits));
    }
  });
}

}  // namespace

void SolverConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("SolverConfig: eps must be positive");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("SolverConfig: tol must be positive");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  }
  if (check_every < 1) {
    throw std::invalid_argument("SolverConfig: check_every must be >= 1");
  }
}

double cost(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cost: dimension mismatch");
  }
  return 0.5 * (x - y).squaredNorm();
}

SinkhornSolver::SinkhornSolver(SampleSet source, SampleSet target,
                               SolverConfig config)
    : source_(std::move(source)), target_(std::move(target)), config_(config) {
  source_.validate();
  target_.validate();
  config_.validate();
  if (source_.dim() != target_.dim()) {
    throw std::invalid_argument("sinkhorn: source and target dimensions differ");
  }
  f_ = Vector::Zero(source_.size());
  g_ = Vector::Zero(target_.size());
  log_a_ = source_.weights.array().log();
  log_b_ = target_.weights.array().log();
}

void SinkhornSolver::check_finite(const Vector& v, const char* which) const {
  if (v.allFinite()) return;
  Index bad = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      bad = i;
      break;
    }
  }
  throw NumericalError(std::string("sinkhorn: non-finite ") + which + "[" +
                       std::to_string(bad) + "] at iteration " +
                       std::to_string(iterations_ + 1));
}

void SinkhornSolver::update_f() {
  const double eps = config_.eps;
  parallel_for(source_.size(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector c(target_.size());
    Vector logits(target_.size());
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      cost_row(source_.points, target_.points, i, c);
      logits = log_b_.array() + (g_ - c).array() / eps;
      f_[i] = -eps * log_sum_exp(logits);
    }
  });
  check_finite(f_, "f");
}

void SinkhornSolver::update_g() {
  const double eps = config_.eps;
  parallel_for(target_.size(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector c(source_.size());
    Vector logits(source_.size());
    for (std::ptrdiff_t j = begin; j < end; ++j) {
      cost_col(source_.points, target_.points, j, c);
      logits = log_a_.array() + (f_ - c).array() / eps;
      g_[j] = -eps * log_sum_exp(logits);
    }
  });
  check_finite(g_, "g");
}

void SinkhornSolver::sweep() {
  update_f();
  update_g();
  ++iterations_;
}

PotentialPair SinkhornSolver::current() const {
  PotentialPair pair;
  pair.f = f_;
  pair.g = g_;
  pair.eps = config_.eps;
  pair.iterations = iterations_;
  pair.converged = false;
  return pair;
}

double SinkhornSolver::marginal_error() const {
  return sbridge::marginal_error(source_, target_, current());
}

double SinkhornSolver::dual_objective() const {
  return sbridge::dual_objective(source_, target_, current());
}

PotentialPair SinkhornSolver::run() {
  double err = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (iterations_ < config_.max_iter) {
    sweep();
    const bool check = iterations_ == 1 ||
                       iterations_ % config_.check_every == 0 ||
                       iterations_ == config_.max_iter;
    if (check) {
      err = marginal_error();
      if (err <= config_.tol) {
        converged = true;
        break;
      }
    }
  }
  PotentialPair pair = current();
  pair.marginal_error = err;
  pair.converged = converged;
  return pair;
}

PotentialPair fit(const SampleSet& source, const SampleSet& target,
                  const SolverConfig& config) {
  return SinkhornSolver(source, target, config).run();
}

std::pair<double, double> marginal_errors(const SampleSet& source,
                                          const SampleSet& target,
                                          const PotentialPair& pair) {
  validate_pair_shapes(source, target, pair);
  const Vector log_a = source.weights.array().log();
  const Vector log_b = target.weights.array().log();
  Vector row_mass, col_mass;
  row_plan_mass(source, target, pair, log_b, row_mass);
  col_plan_mass(source, target, pair, log_a, col_mass);
  double row_err = 0.0;
  for (Index i = 0; i < row_mass.size(); ++i) {
    row_err += source.weights[i] * std::fabs(row_mass[i] - 1.0);
  }
  double col_err = 0.0;
  for (Index j = 0; j < col_mass.size(); ++j) {
    col_err += target.weights[j] * std::fabs(col_mass[j] - 1.0);
  }
  return {row_err, col_err};
}

double marginal_error(const SampleSet& source, const SampleSet& target,
                      const PotentialPair& pair) {
  const auto [row_err, col_err] = marginal_errors(source, target, pair);
  return row_err + col_err;
}

double dual_objective(const SampleSet& source, const SampleSet& target,
                      const PotentialPair& pair) {
  validate_pair_shapes(source, target, pair);
  const double eps = pair.eps;
  const Vector log_b = target.weights.array().log();
  Vector row_lse(source.size());
  parallel_for(source.size(), [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector c(target.size());
    Vector logits(target.size());
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      cost_row(source.points, target.points, i, c);
      logits = log_b.array() + (pair.f[i] + (pair.g - c).array()) / eps;
      row_lse[i] = log_sum_exp(logits);
    }
  });
  Vector outer = source.weights.array().log() + row_lse.array();
  const double total = std::exp(log_sum_exp(outer));
  return source.weights.dot(pair.f) + target.weights.dot(pair.g) -
         eps * (total - 1.0);
}

double plan_density(const PlanView& view, Index i, Index j) {
  validate_pair_shapes(view.source, view.target, view.pair);
  if (i < 0 || i >= view.source.size() || j < 0 || j >= view.target.size()) {
    throw std::out_of_range("plan_density: index out of range");
  }
  const double c = cost(view.source.points.row(i).transpose(),
                        view.target.points.row(j).transpose());
  return std::exp((view.pair.f[i] + view.pair.g[j] - c) / view.pair.eps);
}

std::pair<double, double> primal_parts(const PlanView& view) {
  validate_pair_shapes(view.source, view.target, view.pair);
  const double eps = view.pair.eps;
  const Index m = view.source.size();
  Vector transport(m), entropy(m);
  parallel_for(m, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Vector c(view.target.size());
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      cost_row(view.source.points, view.target.points, i, c);
      double t_acc = 0.0;
      double e_acc = 0.0;
      for (Index j = 0; j < view.target.size(); ++j) {
        const double s = (view.pair.f[i] + view.pair.g[j] - c[j]) / eps;
        const double pij =
            view.source.weights[i] * view.target.weights[j] * std::exp(s);
        t_acc += pij * c[j];
        e_acc += pij * s;
      }
      transport[i] = t_acc;
      entropy[i] = e_acc;
    }
  });
  return {transport.sum(), eps * entropy.sum()};
}

}  // namespace sbridge
