// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criterion 10 drives the CLI binary named by SINKHORN_BRIDGE_BIN.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "sbridge/datasets.hpp"
#include "sbridge/drift.hpp"
#include "sbridge/gaussian_bridge.hpp"
#include "sbridge/metrics.hpp"
#include "sbridge/rng.hpp"
#include "sbridge/sde.hpp"
#include "sbridge/sinkhorn.hpp"

using namespace sbridge;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& label) {
    if (!condition) {
      ok = false;
      detail << " [" << label << "]";
    }
  }
};

SampleSet uniform_cloud(Index n, uint64_t seed) {
  Matrix pts(n, 2);
  CounterRng rng(seed, StreamTag::kGeneric);
  for (Index i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) pts(i, j) = rng.uniform();
  return SampleSet(std::move(pts));
}

GaussianParams gaussian_1d(double mean, double var) {
  GaussianParams p;
  p.mean = Vector::Constant(1, mean);
  p.cov = Matrix::Constant(1, 1, var);
  return p;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 == 1 ? v[v.size() / 2]
                           : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

// --- criterion 1: feasibility and dual monotonicity --------------------------

Check criterion_sinkhorn_feasibility() {
  Check check;
  int instance = 0;
  for (const double eps : {0.05, 1.0}) {
    for (int rep = 0; rep < 50; ++rep, ++instance) {
      SolverConfig cfg;
      cfg.eps = eps;
      cfg.tol = 1e-6;
      cfg.max_iter = 10000;
      SinkhornSolver solver(uniform_cloud(256, 1000 + instance),
                            uniform_cloud(256, 5000 + instance), cfg);
      double prev = solver.dual_objective();
      bool converged = false;
      while (solver.iterations() < cfg.max_iter) {
        solver.sweep();
        const double objective = solver.dual_objective();
        check.expect(objective >= prev - 1e-12, "monotone");
        prev = objective;
        if (solver.marginal_error() <= cfg.tol) {
          converged = true;
          break;
        }
      }
      check.expect(converged, "converged@" + std::to_string(instance));
      if (!check.ok) return check;
    }
  }
  check.detail << " 100 instances converged with monotone dual";
  return check;
}

// --- criterion 2: extended-precision oracle equivalence ----------------------

Check criterion_oracle_equivalence() {
  Check check;
  const SampleSet source = uniform_cloud(8, 21);
  const SampleSet target = uniform_cloud(8, 22);
  SolverConfig cfg;
  cfg.eps = 0.5;
  cfg.tol = 1e-9;
  const PotentialPair pair = fit(source, target, cfg);
  check.expect(pair.converged, "converged");

  Matrix costs(8, 8);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j)
      costs(i, j) =
          cost(source.points.row(i).transpose(), target.points.row(j).transpose());
  const auto ref = oracles::reference_sinkhorn(costs, source.weights,
                                               target.weights, cfg.eps,
                                               pair.iterations);
  const double f_gap = (pair.f - ref.f).cwiseAbs().maxCoeff();
  const double g_gap = (pair.g - ref.g).cwiseAbs().maxCoeff();
  check.expect(f_gap <= 1e-8, "f sup-norm");
  check.expect(g_gap <= 1e-8, "g sup-norm");

  const Matrix ref_density = oracles::reference_plan_density(costs, ref, cfg.eps);
  PlanView view{source, target, pair};
  double density_gap = 0;
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j)
      density_gap = std::max(
          density_gap, std::fabs(plan_density(view, i, j) - ref_density(i, j)));
  check.expect(density_gap <= 1e-8, "plan density");
  check.detail << " sup gaps: f=" << f_gap << " g=" << g_gap
               << " plan=" << density_gap;
  return check;
}

// --- criterion 3: drift correctness ------------------------------------------

Check criterion_drift_correctness() {
  Check check;
  BridgeModel model;
  {
    CounterRng rng(33, StreamTag::kGeneric);
    model.atoms.resize(8, 2);
    model.potential.resize(8);
    for (Index i = 0; i < 8; ++i) {
      model.atoms(i, 0) = rng.normal();
      model.atoms(i, 1) = rng.normal();
      // Potentials on a 2^-26 grid keep potential + c exactly representable
      // for every tested shift, so the check probes the evaluator rather than
      // the rounding of the shifted inputs.
      model.potential[i] = std::round(rng.normal() * 67108864.0) / 67108864.0;
    }
    model.eps = 0.5;
  }

  // Potential-shift invariance.
  double worst_shift = 0;
  CounterRng rng(34, StreamTag::kGeneric);
  for (const double c : {-100.0, 1.0, 1e6}) {
    BridgeModel shifted = model;
    shifted.potential.array() += c;
    for (int rep = 0; rep < 20; ++rep) {
      Vector z(2);
      z << 2.0 * rng.normal(), 2.0 * rng.normal();
      const double t = 0.9 * rng.uniform();
      const Vector a = drift(model, t, z);
      const Vector b = drift(shifted, t, z);
      worst_shift = std::max(worst_shift, (a - b).norm() / a.norm());
    }
  }
  check.expect(worst_shift <= 1e-10, "shift invariance");

  // Single-atom model: drift equals (Y - z)/(1 - t) exactly.
  BridgeModel follmer;
  follmer.atoms = Matrix(1, 2);
  follmer.atoms << -2.0, 1.5;
  follmer.potential = Vector::Constant(1, 12.5);
  follmer.eps = 1.0;
  bool exact = true;
  for (const double t : {0.0, 0.3, 0.9, 0.999}) {
    Vector z(2);
    z << 1.0, -0.5;
    const Vector expected = (follmer.atoms.row(0).transpose() - z) / (1.0 - t);
    exact = exact && (drift(follmer, t, z) == expected);
  }
  check.expect(exact, "follmer n=1 exact");

  // Finite-difference Jacobian never exceeds the Lipschitz bound.
  const double radius = model.support_radius();
  double worst_ratio = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Vector z(2);
    z << 2.0 * rng.normal(), 2.0 * rng.normal();
    const double t = 0.9 * rng.uniform();
    const double bound = lipschitz_bound(model, t, radius);
    worst_ratio =
        std::max(worst_ratio, oracles::drift_jacobian_norm(model, t, z) / bound);
  }
  check.expect(worst_ratio <= 1.0 + 1e-6, "jacobian bound");
  check.detail << " shift=" << worst_shift << " jac/bound=" << worst_ratio;
  return check;
}

// --- criterion 4: Prop-1 marginal consistency --------------------------------

Check criterion_marginal_consistency() {
  Check check;
  const SampleSet source = generate({DatasetName::kGaussian, 200, 51, 0.0, 2});
  const SampleSet target = generate({DatasetName::kMoons, 200, 52, 0.05, 2});
  SolverConfig cfg;
  cfg.eps = 0.1;
  const PotentialPair pair = fit(source, target, cfg);
  check.expect(pair.converged, "fit converged");
  const BridgeModel model =
      from_potentials(pair, source, target, BridgeDirection::kForward, cfg.eps);

  Matrix init(2000, 2);
  for (Index i = 0; i < 2000; ++i) init.row(i) = source.points.row(i % 200);
  SimConfig sim;
  sim.tau = 0.5;
  sim.steps = 400;
  sim.eps = cfg.eps;
  sim.seed = 7;
  sim.store_full_path = false;
  const SampleSet sde_marginal = endpoints(simulate(model, SampleSet(init), sim));

  PlanView view{source, target, pair};
  const SampleSet mix_a = bridge_mixture_sample(view, 0.5, 2000, 101);
  const SampleSet mix_b = bridge_mixture_sample(view, 0.5, 2000, 102);
  const SampleSet mix_c = bridge_mixture_sample(view, 0.5, 2000, 103);
  const double floor_ed = energy_distance(mix_a, mix_b, 1);
  const double cross_ed = energy_distance(sde_marginal, mix_c, 2);
  check.expect(floor_ed > 0.0, "floor positive");
  check.expect(cross_ed <= 3.0 * floor_ed, "within 3x floor");
  check.detail << " cross=" << cross_ed << " floor=" << floor_ed
               << " ratio=" << cross_ed / floor_ed;
  return check;
}

// --- criterion 5: Euler order -------------------------------------------------

Check criterion_euler_order() {
  Check check;
  // Follmer drift (point-mass source) on a multi-atom target; the endpoint
  // error is measured against a fine-grid run. A one-atom target is excluded:
  // its exact solution is affine in t and Euler reproduces it exactly.
  const SampleSet target = generate({DatasetName::kMoons, 32, 2, 0.05, 2});
  const BridgeModel model = follmer_model(target, 0.5);
  const SampleSet init = generate({DatasetName::kGaussian, 8, 44, 0.0, 2});
  SimConfig cfg;
  cfg.tau = 0.9;
  cfg.eps = 0.5;
  cfg.zero_noise = true;
  cfg.store_full_path = false;
  cfg.steps = 12800;
  const Matrix reference = simulate(model, init, cfg).states.back();

  std::vector<double> log_n, log_err;
  for (const int steps : {25, 50, 100, 200}) {
    cfg.steps = steps;
    const Matrix end = simulate(model, init, cfg).states.back();
    log_n.push_back(std::log(static_cast<double>(steps)));
    log_err.push_back(std::log((end - reference).rowwise().norm().mean()));
  }
  const double slope = regression_slope(log_n, log_err);
  check.expect(slope >= -1.3 && slope <= -0.7, "slope window");
  check.detail << " slope=" << slope;
  return check;
}

// --- criterion 6: Gaussian MSE rate -------------------------------------------

Check criterion_gaussian_mse_rate() {
  Check check;
  const std::vector<Index> n_grid{64, 128, 256, 512, 1024, 2048, 4096};
  const std::vector<double> tau_grid{0.2, 0.5, 0.8};
  for (const int d : {1, 3}) {
    const auto start = std::chrono::steady_clock::now();
    MseExperimentConfig cfg;
    cfg.dim = d;
    cfg.eps = 1.0;
    cfg.n_grid = n_grid;
    cfg.tau_grid = tau_grid;
    cfg.trials = 10;
    cfg.n_mc = 10000;
    cfg.seed = 0;
    const MseExperimentResult result = mse_experiment(cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    check.expect(elapsed < (d == 1 ? 300.0 : 1800.0),
                 "runtime d=" + std::to_string(d));

    std::map<double, double> median_at_1024;
    for (const double tau : tau_grid) {
      std::vector<double> log_n, log_mse;
      for (const Index n : n_grid) {
        std::vector<double> trials;
        for (const auto& r : result.records) {
          if (r.n == n && r.tau == tau) trials.push_back(r.mse);
        }
        const double med = median_of(trials);
        if (n == 1024) median_at_1024[tau] = med;
        log_n.push_back(std::log(static_cast<double>(n)));
        log_mse.push_back(std::log(med));
      }
      const double slope = regression_slope(log_n, log_mse);
      check.expect(slope >= -1.35 && slope <= -0.65,
                   "slope d=" + std::to_string(d) + " tau=" + std::to_string(tau));
      check.detail << " d" << d << "/tau" << tau << ": " << slope;
    }
    check.expect(median_at_1024[0.2] < median_at_1024[0.5] &&
                     median_at_1024[0.5] < median_at_1024[0.8],
                 "tau-monotone d=" + std::to_string(d));
    check.detail << " [d" << d << " " << elapsed << "s]";
  }
  return check;
}

// --- criterion 7: mixture sampling quality ------------------------------------

Check criterion_mixture_quality() {
  Check check;
  int wins = 0;
  double worst_big = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const uint64_t s = 100 + 10 * static_cast<uint64_t>(trial);
    std::map<Index, double> uvp;
    for (const Index n_fit : {Index{256}, Index{4096}}) {
      const SampleSet source =
          generate({DatasetName::kGaussian, n_fit, s + 1, 0.0, 2});
      const SampleSet target =
          generate({DatasetName::kGaussianMixture, n_fit, s + 2, 0.0, 2});
      SolverConfig cfg;
      cfg.eps = 1.0;
      const PotentialPair pair = fit(source, target, cfg);
      const BridgeModel model =
          from_potentials(pair, source, target, BridgeDirection::kForward, cfg.eps);
      const SampleSet init =
          generate({DatasetName::kGaussian, 10000, s + 3, 0.0, 2});
      SimConfig sim;
      sim.tau = 0.99;
      sim.steps = 100;
      sim.eps = cfg.eps;
      sim.seed = s;
      sim.store_full_path = false;
      const SampleSet generated = endpoints(simulate(model, init, sim));
      const SampleSet reference =
          generate({DatasetName::kGaussianMixture, 10000, s + 4, 0.0, 2});
      uvp[n_fit] = bw_uvp(generated, reference);
    }
    if (uvp[4096] < uvp[256]) ++wins;
    worst_big = std::max(worst_big, uvp[4096]);
    check.detail << " t" << trial << ": " << uvp[4096] << " vs " << uvp[256];
  }
  check.expect(wins >= 4, "4096 beats 256 in >= 4/5");
  check.expect(worst_big <= 2.0, "absolute bw-uvp <= 2.0");
  return check;
}

// --- criterion 8: Gaussian closed-form validation ------------------------------

Check criterion_gaussian_validation() {
  Check check;
  const SampleSet grid_a = oracles::gaussian_grid_1d(0.0, 1.0, -6.0, 6.0, 480);
  const SampleSet grid_b = oracles::gaussian_grid_1d(0.0, 1.0, -6.0, 6.0, 480);
  for (const double eps : {0.25, 1.0, 4.0}) {
    SolverConfig cfg;
    cfg.eps = eps;
    cfg.tol = 1e-10;
    cfg.max_iter = 200000;
    cfg.check_every = 50;
    const PotentialPair pair = fit(grid_a, grid_b, cfg);
    check.expect(pair.converged, "grid solve converged");
    const double moment =
        oracles::plan_cross_moment_1d(grid_a, grid_b, pair, 0.0, 0.0);
    const double closed = std::sqrt(1.0 + eps * eps / 4.0) - eps / 2.0;
    const double gap = std::fabs(moment - closed) / std::fabs(closed);
    check.expect(gap <= 1e-3, "cross-cov eps=" + std::to_string(eps));
    check.detail << " eps" << eps << ":" << gap;
  }

  // Drift vs quadrature.
  const GaussianParams source = gaussian_1d(0.4, 1.3);
  const GaussianParams target = gaussian_1d(-0.3, 0.7);
  const double eps = 0.8;
  const auto bridge = gaussian_bridge(source, target, eps);
  double worst_drift_gap = 0;
  for (const double t : {0.1, 0.5, 0.85}) {
    for (const double z : {1.0, -0.6}) {
      auto integrand = [&](long double y, bool with_y) -> long double {
        Vector yv = Vector::Constant(1, static_cast<double>(y));
        const long double g = bridge.potential_g(yv);
        const long double q = (y - z) * (y - z) / (2.0L * (1.0L - t));
        const long double density =
            std::exp(-0.5L * (y + 0.3L) * (y + 0.3L) / 0.7L) /
            std::sqrt(2.0L * std::numbers::pi_v<long double> * 0.7L);
        const long double w = std::exp((g - q) / eps) * density;
        return with_y ? y * w : w;
      };
      const long double i0 = oracles::simpson(
          [&](long double y) { return integrand(y, false); }, -30.0L, 30.0L, 200000);
      const long double i1 = oracles::simpson(
          [&](long double y) { return integrand(y, true); }, -30.0L, 30.0L, 200000);
      const double quad = static_cast<double>((i1 / i0 - z) / (1.0L - t));
      const Vector mine = oracle_drift(bridge, t, Vector::Constant(1, z));
      worst_drift_gap = std::max(worst_drift_gap, std::fabs(mine[0] - quad));
    }
  }
  check.expect(worst_drift_gap <= 1e-8, "drift vs quadrature");

  // Endpoint exactness.
  const GaussianParams at0 = oracle_marginal(bridge, 0.0);
  const GaussianParams at1 = oracle_marginal(bridge, 1.0);
  check.expect(at0.mean == source.mean && at1.mean == target.mean,
               "endpoint means");
  check.expect((at0.cov - source.cov).cwiseAbs().maxCoeff() <= 1e-12 &&
                   (at1.cov - target.cov).cwiseAbs().maxCoeff() <= 1e-12,
               "endpoint covs");
  check.detail << " drift-gap=" << worst_drift_gap;
  return check;
}

// --- criterion 9: endpoint collapse --------------------------------------------

Check criterion_endpoint_collapse() {
  Check check;
  const SampleSet source = generate({DatasetName::kGaussian, 500, 61, 0.0, 2});
  const SampleSet target = generate({DatasetName::kMoons, 500, 62, 0.05, 2});
  SolverConfig cfg;
  cfg.eps = 0.1;
  const PotentialPair pair = fit(source, target, cfg);
  check.expect(pair.converged, "fit converged");
  const BridgeModel model =
      from_potentials(pair, source, target, BridgeDirection::kForward, cfg.eps);
  SimConfig sim;
  sim.tau = 1.0 - 1e-4;
  sim.steps = 2000;
  sim.eps = cfg.eps;
  sim.seed = 3;
  sim.store_full_path = false;
  const SampleSet ends = endpoints(simulate(model, source, sim));
  double worst = 0;
  for (Index b = 0; b < ends.size(); ++b) {
    const double nearest =
        (target.points.rowwise() - ends.points.row(b)).rowwise().norm().minCoeff();
    worst = std::max(worst, nearest);
  }
  check.expect(worst <= 0.05, "all endpoints near atoms");
  check.detail << " worst distance=" << worst;
  return check;
}

// --- criterion 10: CLI reproducibility ------------------------------------------

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  const std::string ca((std::istreambuf_iterator<char>(fa)), {});
  const std::string cb((std::istreambuf_iterator<char>(fb)), {});
  return ca == cb;
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::set<std::string> names_a, names_b;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file())
      names_a.insert(fs::relative(entry.path(), a).string());
  }
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file())
      names_b.insert(fs::relative(entry.path(), b).string());
  }
  if (names_a != names_b) return false;
  for (const auto& name : names_a) {
    if (!same_bytes(a / name, b / name)) return false;
  }
  return true;
}

Check criterion_cli_reproducibility() {
  Check check;
  const char* bin = std::getenv("SINKHORN_BRIDGE_BIN");
  if (bin == nullptr) {
    check.expect(false, "SINKHORN_BRIDGE_BIN not set");
    return check;
  }
  const fs::path root =
      fs::temp_directory_path() / ("sbridge_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"fit", "fit --source gaussian:400:1 --target moons:400:2 --eps 0.1 --out "},
      {"simulate",
       "simulate --follmer --target moons:400:3 --eps 0.2 --init gaussian:400:4 "
       "--tau 0.9 --steps 50 --seed 5 --trajectories --out "},
      {"gaussian-bench",
       "gaussian-bench --dim 1 --n 64 --n 128 --tau 0.5 --trials 2 --n-mc 500 "
       "--seed 3 --out "},
      {"eval",
       "eval --generated gaussian:500:6 --reference gaussian:500:7 "
       "--metric bw-uvp --metric energy-distance --seed 8 --out "},
      {"demo", "demo --name toy-bridges --seed 17 --out "},
  };
  for (const auto& [name, args] : commands) {
    const fs::path one = root / (name + "_t1");
    const fs::path eight = root / (name + "_t8");
    const std::string run_one = "SINKHORN_BRIDGE_THREADS=1 " + std::string(bin) +
                                " " + args + one.string() + " >/dev/null 2>&1";
    const std::string run_eight = "SINKHORN_BRIDGE_THREADS=8 " + std::string(bin) +
                                  " " + args + eight.string() + " >/dev/null 2>&1";
    const int rc_one = std::system(run_one.c_str());
    const int rc_eight = std::system(run_eight.c_str());
    check.expect(WEXITSTATUS(rc_one) == 0 && WEXITSTATUS(rc_eight) == 0,
                 name + " exit");
    check.expect(same_tree(one, eight), name + " bytes");
    if (!check.ok) return check;
  }
  check.detail << " 5 commands bit-identical at 1 and 8 threads";
  fs::remove_all(root);
  return check;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria{
      {1, "sinkhorn feasibility & dual monotonicity", 60.0,
       criterion_sinkhorn_feasibility},
      {2, "extended-precision oracle equivalence", 30.0,
       criterion_oracle_equivalence},
      {3, "drift correctness", 30.0, criterion_drift_correctness},
      {4, "bridge-mixture marginal consistency", 120.0,
       criterion_marginal_consistency},
      {5, "euler order", 60.0, criterion_euler_order},
      {6, "gaussian drift MSE rate", 2100.0, criterion_gaussian_mse_rate},
      {7, "mixture sampling quality (BW-UVP)", 600.0, criterion_mixture_quality},
      {8, "gaussian closed-form validation", 120.0, criterion_gaussian_validation},
      {9, "endpoint collapse near the horizon", 120.0,
       criterion_endpoint_collapse},
      {10, "CLI reproducibility across reruns and thread counts", 900.0,
       criterion_cli_reproducibility},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!only.empty() && only.count(criterion.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << " exception: " << e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > criterion.budget_seconds) {
      check.ok = false;
      check.detail << " [over budget " << criterion.budget_seconds << "s]";
    }
    std::printf("[%s] C%d %s (%.1fs)%s\n", check.ok ? "PASS" : "FAIL",
                criterion.id, criterion.name, elapsed,
                check.detail.str().c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  return failures;
}
