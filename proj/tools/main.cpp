// Command-line surface: fit potentials, simulate bridges, run the Gaussian
// benchmark, evaluate metrics, and emit demo CSV bundles. Every command is a
// pure function of its resolved configuration: the configuration is echoed to
// the output directory and reruns are bit-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbridge/datasets.hpp"
#include "sbridge/drift.hpp"
#include "sbridge/gaussian_bridge.hpp"
#include "sbridge/metrics.hpp"
#include "sbridge/rng.hpp"
#include "sbridge/sample_io.hpp"
#include "sbridge/sde.hpp"
#include "sbridge/serialize.hpp"
#include "sbridge/sinkhorn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sbridge;

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoFailure = 3,
  kNumericalFailure = 4,
  kNotConverged = 5,
};

// "name:n:seed[:noise[:dim]]" -> DatasetSpec. Returns nullopt when the prefix
// is not a known dataset name (the argument is then treated as a path).
std::optional<DatasetSpec> try_parse_dataset(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  DatasetSpec spec;
  try {
    spec.name = dataset_name_from_string(text.substr(0, colon));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  std::vector<std::string> fields;
  std::stringstream ss(text.substr(colon + 1));
  std::string field;
  while (std::getline(ss, field, ':')) fields.push_back(field);
  if (fields.size() < 2 || fields.size() > 4) {
    throw std::invalid_argument("dataset spec needs name:n:seed[:noise[:dim]]: " + text);
  }
  try {
    spec.n = std::stoll(fields[0]);
    spec.seed = std::stoull(fields[1]);
    const bool planar = spec.name != DatasetName::kGaussian &&
                        spec.name != DatasetName::kGaussianMixture;
    spec.noise = fields.size() > 2 ? std::stod(fields[2]) : (planar ? 0.05 : 0.0);
    spec.dim = fields.size() > 3 ? std::stoi(fields[3]) : 2;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse dataset spec: " + text);
  }
  return spec;
}

SampleSet resolve_samples(const std::string& spec_or_path) {
  if (const auto spec = try_parse_dataset(spec_or_path)) {
    return generate(*spec);
  }
  return read_samples(spec_or_path, format_from_path(spec_or_path));
}

// The echoed value must feed back through --config, so sample arguments are
// echoed as the original strings; the parsed reading rides along for humans.
json dataset_or_path_json(const std::string& text) {
  if (const auto spec = try_parse_dataset(text)) {
    return json{{"dataset", to_string(spec->name)},
                {"n", spec->n},
                {"seed", spec->seed},
                {"noise", spec->noise},
                {"dim", spec->dim}};
  }
  return json{{"path", text}};
}

void write_config_echo(const fs::path& out_dir, const json& resolved) {
  save_text((out_dir / "config.json").string(), resolved.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out) {
  if (out.empty()) throw std::invalid_argument("--out is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
  return dir;
}

std::string csv_quote(const std::string& text) {
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

// Flags override config-file values; anything not given falls back to the
// built-in default. CLI11 fills `value` with the default, so precedence is:
// explicitly passed flag > config file > default.
template <typename T>
T resolve_option(const CLI::App* cmd, const std::string& flag, const T& value,
                 const json& file_config, const std::string& key) {
  if (cmd->count(flag) > 0) return value;
  if (file_config.contains(key)) return file_config.at(key).get<T>();
  return value;
}

json load_file_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return json::parse(load_text(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad --config file: ") + e.what());
  }
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double slope_of(const std::vector<double>& log_x, const std::vector<double>& log_y) {
  const size_t n = log_x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += log_x[i];
    my += log_y[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (log_x[i] - mx) * (log_y[i] - my);
    den += (log_x[i] - mx) * (log_x[i] - mx);
  }
  return num / den;
}

struct FitArgs {
  std::string source, target, config_file, out;
  double eps = 0.1, tol = 1e-6;
  int max_iter = 10000;
};

int run_fit(const CLI::App* cmd, FitArgs& args) {
  const json file_config = load_file_config(args.config_file);
  args.eps = resolve_option(cmd, "--eps", args.eps, file_config, "eps");
  args.tol = resolve_option(cmd, "--tol", args.tol, file_config, "tol");
  args.max_iter = resolve_option(cmd, "--max-iter", args.max_iter, file_config, "max_iter");
  args.source = resolve_option(cmd, "--source", args.source, file_config, "source");
  args.target = resolve_option(cmd, "--target", args.target, file_config, "target");

  if (args.source.empty() || args.target.empty()) {
    throw std::invalid_argument("fit needs --source and --target");
  }
  const SampleSet source = resolve_samples(args.source);
  const SampleSet target = resolve_samples(args.target);

  SolverConfig solver;
  solver.eps = args.eps;
  solver.tol = args.tol;
  solver.max_iter = args.max_iter;
  const PotentialPair pair = fit(source, target, solver);
  const BridgeModel model =
      from_potentials(pair, source, target, BridgeDirection::kForward, args.eps);
  const double objective = dual_objective(source, target, pair);

  const fs::path dir = prepare_out_dir(args.out);
  json resolved{{"command", "fit"},
                {"source", args.source},
                {"target", args.target},
                {"source_resolved", dataset_or_path_json(args.source)},
                {"target_resolved", dataset_or_path_json(args.target)},
                {"eps", args.eps},
                {"tol", args.tol},
                {"max_iter", args.max_iter}};
  write_config_echo(dir, resolved);
  save_text((dir / "potentials.json").string(), to_json(pair));
  save_text((dir / "bridge-model.json").string(), to_json(model));

  std::cout << "iterations=" << pair.iterations
            << " marginal_error=" << pair.marginal_error
            << " dual_objective=" << objective
            << " converged=" << (pair.converged ? "true" : "false") << "\n";
  if (!pair.converged) {
    std::cerr << "fit did not reach tol " << args.tol << " in " << args.max_iter
              << " iterations (marginal_error=" << pair.marginal_error << ")\n";
    return kNotConverged;
  }
  return kOk;
}

struct SimulateArgs {
  std::string model_path, init, target, config_file, out;
  double tau = 0.9, eps = 0.1;
  int steps = 50;
  Index count = 0;
  uint64_t seed = 0;
  bool follmer = false;
  bool dump_trajectories = false;
};

int run_simulate(const CLI::App* cmd, SimulateArgs& args) {
  const json file_config = load_file_config(args.config_file);
  args.tau = resolve_option(cmd, "--tau", args.tau, file_config, "tau");
  args.steps = resolve_option(cmd, "--steps", args.steps, file_config, "steps");
  args.eps = resolve_option(cmd, "--eps", args.eps, file_config, "eps");
  args.seed = resolve_option(cmd, "--seed", args.seed, file_config, "seed");
  args.count = resolve_option(cmd, "--count", args.count, file_config, "count");
  args.init = resolve_option(cmd, "--init", args.init, file_config, "init");
  args.model_path = resolve_option(cmd, "--model", args.model_path, file_config, "model");
  args.target = resolve_option(cmd, "--target", args.target, file_config, "target");
  args.follmer = resolve_option(cmd, "--follmer", args.follmer, file_config, "follmer");
  args.dump_trajectories = resolve_option(cmd, "--trajectories",
                                          args.dump_trajectories, file_config,
                                          "trajectories");
  if (!(args.tau > 0.0 && args.tau < 1.0)) {
    throw std::invalid_argument("tau must lie strictly in (0, 1)");
  }

  if (args.init.empty()) throw std::invalid_argument("simulate needs --init");
  BridgeModel model;
  if (args.follmer) {
    if (args.target.empty()) {
      throw std::invalid_argument("--follmer requires --target samples");
    }
    model = follmer_model(resolve_samples(args.target), args.eps);
  } else {
    if (args.model_path.empty()) {
      throw std::invalid_argument("simulate needs --model or --follmer");
    }
    model = bridge_model_from_json(load_text(args.model_path));
  }

  SampleSet init = resolve_samples(args.init);
  if (args.count > 0 && args.count != init.size()) {
    Matrix cycled(args.count, init.dim());
    for (Index i = 0; i < args.count; ++i) {
      cycled.row(i) = init.points.row(i % init.size());
    }
    init = SampleSet(std::move(cycled), init.label);
  }

  SimConfig sim;
  sim.tau = args.tau;
  sim.steps = args.steps;
  sim.eps = model.eps;
  sim.seed = args.seed;
  sim.store_full_path = args.dump_trajectories;
  const TrajectoryBatch batch = simulate(model, init, sim);

  const fs::path dir = prepare_out_dir(args.out);
  json resolved{{"command", "simulate"},
                {"model", args.model_path},
                {"follmer", args.follmer},
                {"target", args.target},
                {"eps", args.eps},
                {"init", args.init},
                {"init_resolved", dataset_or_path_json(args.init)},
                {"tau", args.tau},
                {"steps", args.steps},
                {"count", args.count},
                {"seed", args.seed},
                {"trajectories", args.dump_trajectories}};
  write_config_echo(dir, resolved);
  write_samples(endpoints(batch), (dir / "endpoints.csv").string(), FileFormat::kCsv);
  if (args.dump_trajectories) {
    write_trajectories_csv(batch, (dir / "trajectories.csv").string());
  }
  std::cout << "simulated " << batch.batch_size() << " paths to tau=" << args.tau
            << " in " << args.steps << " steps\n";
  return kOk;
}

struct BenchArgs {
  std::vector<int> dims{3};
  std::vector<Index> n_grid;
  std::vector<double> tau_grid;
  std::string config_file, out;
  double eps = 1.0;
  int trials = 10;
  Index n_mc = 10000;
  uint64_t seed = 0;
};

int bench_core(const BenchArgs& args, const fs::path& dir, bool write_echo) {
  if (write_echo) {
    json resolved{{"command", "gaussian-bench"}, {"dims", args.dims},
                  {"eps", args.eps},            {"n_grid", args.n_grid},
                  {"tau_grid", args.tau_grid},  {"trials", args.trials},
                  {"n_mc", args.n_mc},          {"seed", args.seed}};
    write_config_echo(dir, resolved);
  }

  json slopes = json::object();
  for (const int d : args.dims) {
    MseExperimentConfig cfg;
    cfg.dim = d;
    cfg.eps = args.eps;
    cfg.n_grid = args.n_grid;
    cfg.tau_grid = args.tau_grid;
    cfg.trials = args.trials;
    cfg.n_mc = args.n_mc;
    cfg.seed = args.seed;
    const MseExperimentResult result = mse_experiment(cfg);

    std::ostringstream csv;
    csv << "n,tau,trial,mse\n";
    for (const auto& r : result.records) {
      csv << r.n << ',' << to_round_trip_string(r.tau) << ',' << r.trial << ','
          << to_round_trip_string(r.mse) << '\n';
    }
    const std::string name = "mse_d" + std::to_string(d) + ".csv";
    save_text((dir / name).string(), csv.str());
    if (args.dims.size() == 1) save_text((dir / "mse.csv").string(), csv.str());

    json dim_slopes = json::object();
    for (const double tau : args.tau_grid) {
      std::vector<double> log_n, log_mse;
      for (const Index n : args.n_grid) {
        std::vector<double> trial_mse;
        for (const auto& r : result.records) {
          if (r.n == n && r.tau == tau) trial_mse.push_back(r.mse);
        }
        log_n.push_back(std::log(static_cast<double>(n)));
        log_mse.push_back(std::log(median(std::move(trial_mse))));
      }
      const double slope = slope_of(log_n, log_mse);
      dim_slopes[to_round_trip_string(tau)] = slope;
      std::cout << "d=" << d << " tau=" << tau << " slope=" << slope << "\n";
    }
    slopes[std::to_string(d)] = dim_slopes;
  }
  save_text((dir / "slopes.json").string(), slopes.dump(2) + "\n");
  return kOk;
}

int run_gaussian_bench(const CLI::App* cmd, BenchArgs& args) {
  const json file_config = load_file_config(args.config_file);
  args.eps = resolve_option(cmd, "--eps", args.eps, file_config, "eps");
  args.trials = resolve_option(cmd, "--trials", args.trials, file_config, "trials");
  args.n_mc = resolve_option(cmd, "--n-mc", args.n_mc, file_config, "n_mc");
  args.seed = resolve_option(cmd, "--seed", args.seed, file_config, "seed");
  args.dims = resolve_option(cmd, "--dim", args.dims, file_config, "dims");
  args.n_grid = resolve_option(cmd, "--n", args.n_grid, file_config, "n_grid");
  args.tau_grid = resolve_option(cmd, "--tau", args.tau_grid, file_config, "tau_grid");
  if (args.n_grid.empty()) {
    args.n_grid = {64, 128, 256, 512, 1024, 2048, 4096};
  }
  if (args.tau_grid.empty()) {
    args.tau_grid = {0.2, 0.5, 0.8};
  }
  return bench_core(args, prepare_out_dir(args.out), true);
}

struct EvalArgs {
  std::string generated, reference, config_file, out;
  std::vector<std::string> metrics;
  uint64_t seed = 0;
};

int run_eval(const CLI::App* cmd, EvalArgs& args) {
  const json file_config = load_file_config(args.config_file);
  args.seed = resolve_option(cmd, "--seed", args.seed, file_config, "seed");
  args.generated = resolve_option(cmd, "--generated", args.generated, file_config, "generated");
  args.reference = resolve_option(cmd, "--reference", args.reference, file_config, "reference");
  args.metrics = resolve_option(cmd, "--metric", args.metrics, file_config, "metrics");

  if (args.generated.empty() || args.reference.empty() || args.metrics.empty()) {
    throw std::invalid_argument("eval needs --generated, --reference and --metric");
  }
  const SampleSet generated = resolve_samples(args.generated);
  const SampleSet reference = resolve_samples(args.reference);

  const fs::path dir = prepare_out_dir(args.out);
  json resolved{{"command", "eval"},
                {"generated", args.generated},
                {"reference", args.reference},
                {"metrics", args.metrics},
                {"seed", args.seed}};
  write_config_echo(dir, resolved);

  const fs::path ledger = dir / "metrics.csv";
  const bool fresh = !fs::exists(ledger);
  std::ofstream out(ledger, std::ios::app);
  if (!out) throw IoError("cannot open ledger: " + ledger.string());
  if (fresh) out << "metric,value,params,seed\n";

  const json params{{"generated", args.generated}, {"reference", args.reference}};
  for (const std::string& metric : args.metrics) {
    double value = 0.0;
    if (metric == "bw-uvp") {
      value = bw_uvp(generated, reference);
    } else if (metric == "energy-distance") {
      value = energy_distance(generated, reference, args.seed);
    } else if (metric == "w2-1d") {
      value = w2_1d(generated, reference);
    } else {
      throw std::invalid_argument("unknown metric name: " + metric);
    }
    out << metric << ',' << to_round_trip_string(value) << ','
        << csv_quote(params.dump()) << ',' << args.seed << '\n';
    std::cout << metric << "=" << value << "\n";
  }
  if (!out) throw IoError("write failure: " + ledger.string());
  return kOk;
}

struct DemoArgs {
  std::string name, out, config_file;
  uint64_t seed = 17;
};

void demo_toy_bridges(const fs::path& dir, uint64_t seed) {
  struct Pairing {
    const char* tag;
    DatasetSpec source, target;
  };
  const std::vector<Pairing> pairings{
      {"gaussian-to-moons",
       {DatasetName::kGaussian, 2000, seed + 1, 0.0, 2},
       {DatasetName::kMoons, 2000, seed + 2, 0.05, 2}},
      {"moons-to-circles",
       {DatasetName::kMoons, 2000, seed + 3, 0.05, 2},
       {DatasetName::kCircles, 2000, seed + 4, 0.05, 2}},
      {"gaussian-to-checkerboard",
       {DatasetName::kGaussian, 2000, seed + 5, 0.0, 2},
       {DatasetName::kCheckerboard, 2000, seed + 6, 0.0, 2}},
  };
  // eta = 0.0125 puts every snapshot time on the grid.
  const std::vector<double> snapshot_times{0.0, 0.25, 0.5, 0.75, 0.9};
  SolverConfig solver;
  solver.eps = 0.1;
  for (const auto& pairing : pairings) {
    const fs::path sub = dir / pairing.tag;
    fs::create_directories(sub);
    const SampleSet source = generate(pairing.source);
    const SampleSet target = generate(pairing.target);
    const PotentialPair pair = fit(source, target, solver);
    const BridgeModel model =
        from_potentials(pair, source, target, BridgeDirection::kForward, solver.eps);

    DatasetSpec fresh = pairing.source;
    fresh.seed = seed + 99;  // out-of-sample starting points
    const SampleSet init = generate(fresh);

    SimConfig sim;
    sim.tau = 0.9;
    sim.steps = 72;
    sim.eps = solver.eps;
    sim.seed = seed;
    const TrajectoryBatch batch = simulate(model, init, sim);

    write_samples(source, (sub / "source.csv").string(), FileFormat::kCsv);
    write_samples(target, (sub / "target.csv").string(), FileFormat::kCsv);
    for (const double t : snapshot_times) {
      const int k = static_cast<int>(std::lround(t / (sim.tau / sim.steps)));
      std::ostringstream name;
      name << "snapshot_t" << t << ".csv";
      write_samples(SampleSet(batch.states[k], "snapshot"),
                    (sub / name.str()).string(), FileFormat::kCsv);
    }
    std::cout << pairing.tag << ": iterations=" << pair.iterations
              << " marginal_error=" << pair.marginal_error << "\n";
  }
}

void demo_mixture_uvp(const fs::path& dir, uint64_t seed) {
  std::ofstream ledger(dir / "metrics.csv");
  ledger << "metric,value,params,seed\n";
  std::vector<double> values;
  for (int trial = 0; trial < 5; ++trial) {
    const uint64_t s = seed + 10 * trial;
    const SampleSet source = generate({DatasetName::kGaussian, 4096, s + 1, 0.0, 2});
    const SampleSet target =
        generate({DatasetName::kGaussianMixture, 4096, s + 2, 0.0, 2});
    SolverConfig solver;
    solver.eps = 1.0;
    const PotentialPair pair = fit(source, target, solver);
    const BridgeModel model =
        from_potentials(pair, source, target, BridgeDirection::kForward, solver.eps);
    const SampleSet init = generate({DatasetName::kGaussian, 10000, s + 3, 0.0, 2});
    SimConfig sim;
    sim.tau = 0.99;
    sim.steps = 100;
    sim.eps = solver.eps;
    sim.seed = s;
    sim.store_full_path = false;
    const SampleSet generated = endpoints(simulate(model, init, sim));
    const SampleSet reference =
        generate({DatasetName::kGaussianMixture, 10000, s + 4, 0.0, 2});
    const double value = bw_uvp(generated, reference);
    values.push_back(value);
    const json params{{"trial", trial}, {"n_fit", 4096}, {"tau", 0.99}, {"steps", 100}};
    ledger << "bw-uvp," << to_round_trip_string(value) << ','
           << csv_quote(params.dump()) << ',' << s << '\n';
    std::cout << "trial " << trial << ": bw-uvp=" << value << "\n";
  }
  double mean = 0;
  for (const double v : values) mean += v;
  mean /= values.size();
  double var = 0;
  for (const double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  std::cout << "bw-uvp over 5 trials: " << mean << " +/- " << std::sqrt(var) << "\n";
}

int run_demo(const CLI::App* cmd, DemoArgs& args) {
  const json file_config = load_file_config(args.config_file);
  args.name = resolve_option(cmd, "--name", args.name, file_config, "name");
  args.seed = resolve_option(cmd, "--seed", args.seed, file_config, "seed");
  if (args.name.empty()) throw std::invalid_argument("demo needs --name");
  const fs::path dir = prepare_out_dir(args.out);
  json resolved{{"command", "demo"}, {"name", args.name}, {"seed", args.seed}};
  write_config_echo(dir, resolved);
  if (args.name == "toy-bridges") {
    demo_toy_bridges(dir, args.seed);
  } else if (args.name == "gaussian-mse") {
    BenchArgs bench;
    bench.dims = {3};
    bench.seed = args.seed;
    bench.n_grid = {64, 128, 256, 512, 1024, 2048, 4096};
    bench.tau_grid = {0.2, 0.5, 0.8};
    bench_core(bench, dir, false);
  } else if (args.name == "mixture-uvp") {
    demo_mixture_uvp(dir, args.seed);
  } else {
    throw std::invalid_argument("unknown demo: " + args.name);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrodinger bridge estimation from static entropic potentials"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "solve for the dual potentials");
  fit_cmd->add_option("--source", fit_args.source, "source samples: path or name:n:seed[:noise[:dim]]");
  fit_cmd->add_option("--target", fit_args.target, "target samples: path or dataset spec");
  fit_cmd->add_option("--eps", fit_args.eps, "entropic regularization");
  fit_cmd->add_option("--tol", fit_args.tol, "L1 marginal-error tolerance");
  fit_cmd->add_option("--max-iter", fit_args.max_iter, "sweep budget");
  fit_cmd->add_option("--config", fit_args.config_file, "JSON config file (flags override)");
  fit_cmd->add_option("--out", fit_args.out, "output directory")->required();

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the Euler-Maruyama sampler");
  sim_cmd->add_option("--model", sim_args.model_path, "bridge-model.json from fit");
  sim_cmd->add_flag("--follmer", sim_args.follmer, "build the model from --target without a fit");
  sim_cmd->add_option("--target", sim_args.target, "target samples for --follmer");
  sim_cmd->add_option("--init", sim_args.init, "initial points: path or dataset spec");
  sim_cmd->add_option("--tau", sim_args.tau, "terminal time in (0,1)")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
  sim_cmd->add_option("--steps", sim_args.steps, "Euler-Maruyama steps");
  sim_cmd->add_option("--count", sim_args.count, "trajectory count (0 = all init rows)");
  sim_cmd->add_option("--eps", sim_args.eps, "volatility for --follmer models");
  sim_cmd->add_option("--seed", sim_args.seed, "noise seed");
  sim_cmd->add_flag("--trajectories", sim_args.dump_trajectories, "dump the full paths");
  sim_cmd->add_option("--config", sim_args.config_file, "JSON config file (flags override)");
  sim_cmd->add_option("--out", sim_args.out, "output directory")->required();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("gaussian-bench", "drift MSE benchmark");
  bench_cmd->add_option("--dim", bench_args.dims, "dimensions to run");
  bench_cmd->add_option("--eps", bench_args.eps, "entropic regularization");
  bench_cmd->add_option("--n", bench_args.n_grid, "sample-size grid");
  bench_cmd->add_option("--tau", bench_args.tau_grid, "time grid");
  bench_cmd->add_option("--trials", bench_args.trials, "trials per cell");
  bench_cmd->add_option("--n-mc", bench_args.n_mc, "Monte Carlo points for the MSE");
  bench_cmd->add_option("--seed", bench_args.seed, "experiment seed");
  bench_cmd->add_option("--config", bench_args.config_file, "JSON config file (flags override)");
  bench_cmd->add_option("--out", bench_args.out, "output directory")->required();

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "metrics between two sample files");
  eval_cmd->add_option("--generated", eval_args.generated, "generated samples");
  eval_cmd->add_option("--reference", eval_args.reference, "reference samples");
  eval_cmd->add_option("--metric", eval_args.metrics, "bw-uvp | energy-distance | w2-1d")
      ->check(CLI::IsMember({"bw-uvp", "energy-distance", "w2-1d"}));
  eval_cmd->add_option("--seed", eval_args.seed, "seed for subsampling");
  eval_cmd->add_option("--config", eval_args.config_file, "JSON config file (flags override)");
  eval_cmd->add_option("--out", eval_args.out, "output directory")->required();

  DemoArgs demo_args;
  CLI::App* demo_cmd = app.add_subcommand("demo", "self-contained figure-data bundles");
  demo_cmd->add_option("--name", demo_args.name, "toy-bridges | gaussian-mse | mixture-uvp")
      ->check(CLI::IsMember({"toy-bridges", "gaussian-mse", "mixture-uvp"}));
  demo_cmd->add_option("--seed", demo_args.seed, "demo seed");
  demo_cmd->add_option("--config", demo_args.config_file, "JSON config file (flags override)");
  demo_cmd->add_option("--out", demo_args.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_cmd, fit_args);
    if (sim_cmd->parsed()) return run_simulate(sim_cmd, sim_args);
    if (bench_cmd->parsed()) return run_gaussian_bench(bench_cmd, bench_args);
    if (eval_cmd->parsed()) return run_eval(eval_cmd, eval_args);
    if (demo_cmd->parsed()) return run_demo(demo_cmd, demo_args);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
