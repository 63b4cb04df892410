// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: sample generation, coherence reports, coherence
// optimization, sparse recovery, phase-transition grids and the far-field
// pipeline. Every command is deterministic given its config and seed, and
// writes a resolved-config echo next to its outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snfcs/harness.hpp"
#include "snfcs/optim.hpp"
#include "snfcs/parallel.hpp"
#include "snfcs/recovery.hpp"
#include "snfcs/rng.hpp"
#include "snfcs/sensing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

void write_config_echo(const fs::path& out_dir, const std::string& command,
                       const json& config) {
  std::ofstream out(out_dir / (command + "_config.json"));
  out << config.dump(2) << '\n';
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

Eigen::VectorXcd load_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("re,im", 0) != 0)
    throw std::runtime_error(path + ": expected header 're,im'");
  std::vector<std::complex<double>> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    values.emplace_back(std::stod(line.substr(0, comma)),
                        std::stod(line.substr(comma + 1)));
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

void save_vector_csv(const Eigen::VectorXcd& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "re,im\n";
  char buf[96];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", v(i).real(), v(i).imag());
    out << buf;
  }
}

struct SampleArgs {
  std::string sampler = "spiral";
  int k = 100;
  int step_deg = 10;
  std::string chi = "free";
  bool duplicate = false;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string name = "samples";
};

struct CoherenceArgs {
  std::string kind = "sh";
  int n_max = 9;
  std::string samples_file;
  std::string out;  // optional; stdout-only when empty
};

struct OptimizeArgs {
  std::string algo = "gd";
  std::string kind = "sh";
  int n_max = 9;
  int k = 97;
  double p = 6.0;
  double eta = 0.2;
  double tau = 1.0;
  double lambda_reg = 0.1;
  double eta_inner = 0.1;
  int inner_iters = 5;
  int iters = 300;
  int restarts = 5;
  std::string chi_mode = "free";
  std::string chi_policy = "free";
  bool legacy_dual = false;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out = "out";
};

struct RecoverArgs {
  std::string matrix_file;
  std::string y_file;
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  int max_iters = 2000;
  std::string out = "out";
};

struct PhaseArgs {
  std::string kind = "sh";
  int n_max = 9;
  std::string sampler = "gd";
  std::vector<double> k_over_l;
  std::vector<double> s_over_k;
  int trials = 50;
  double rel_tol = 1e-4;
  int opt_iters = 200;
  int opt_restarts = 3;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out = "out";
};

struct FarfieldArgs {
  int n_max = 8;
  std::vector<int> k_list;
  std::string sampler = "gd";
  std::string kind = "snf";
  std::string smc = "sparse";
  int sparsity = 20;
  double decay = 2.0;
  int trials = 1;
  double phi_cut_deg = 0.0;
  int theta_points = 181;
  int opt_iters = 200;
  int opt_restarts = 3;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out = "out";
};

int run_sample(const SampleArgs& args) {
  snfcs::SamplingSet samples;
  if (args.sampler == "spiral") {
    samples = snfcs::spiral(args.k);
  } else if (args.sampler == "hammersley") {
    samples = snfcs::hammersley(args.k);
  } else if (args.sampler == "random") {
    samples = snfcs::random_uniform(args.k, args.seed);
  } else if (args.sampler == "equiangular") {
    samples = snfcs::equiangular(args.step_deg);
  } else {
    throw CLI::ValidationError("--sampler",
                               "unknown sampler '" + args.sampler + "'");
  }
  if (args.duplicate) samples = snfcs::duplicate_pairwise(samples);
  samples = snfcs::apply_chi(std::move(samples),
                             snfcs::chi_policy_from_string(args.chi));

  const fs::path dir = prepare_out_dir(args.out);
  snfcs::save_sampling_csv(samples, (dir / (args.name + ".csv")).string());
  write_config_echo(dir, "sample",
                    {{"command", "sample"},
                     {"sampler", args.sampler},
                     {"k", args.k},
                     {"step_deg", args.step_deg},
                     {"chi", args.chi},
                     {"duplicate", args.duplicate},
                     {"seed", args.seed},
                     {"out", args.out},
                     {"name", args.name}});
  std::cout << "wrote " << (dir / (args.name + ".csv")).string() << " ("
            << samples.size() << " points)\n";
  return kExitOk;
}

int run_coherence(const CoherenceArgs& args) {
  const snfcs::SamplingSet samples = snfcs::load_sampling_csv(args.samples_file);
  for (int i = 0; i < samples.size() && samples.size() > 1; ++i)
    for (int j = i + 1; j < samples.size(); ++j)
      if (samples.theta[i] == samples.theta[j] &&
          samples.phi[i] == samples.phi[j] && samples.chi[i] == samples.chi[j]) {
        std::cerr << "warning: repeated sample rows " << i << " and " << j
                  << " (degenerate correlations)\n";
        i = samples.size();
        break;
      }
  const snfcs::ModeKind kind = snfcs::mode_kind_from_string(args.kind);
  const snfcs::SensingMatrix matrix =
      snfcs::build_matrix(kind, args.n_max, samples);
  const snfcs::CoherenceReport report = snfcs::coherence(matrix);
  const json j = {{"kind", args.kind},
                  {"N", args.n_max},
                  {"K", matrix.rows()},
                  {"L", matrix.cols()},
                  {"mu", report.mu},
                  {"argmax_q", report.argmax_q},
                  {"argmax_r", report.argmax_r},
                  {"welch", report.welch},
                  {"pair_count", report.pair_count}};
  std::cout << j.dump(2) << '\n';
  if (!args.out.empty()) {
    const fs::path dir = prepare_out_dir(args.out);
    std::ofstream out(dir / "report.json");
    out << j.dump(2) << '\n';
    write_config_echo(dir, "coherence",
                      {{"command", "coherence"},
                       {"kind", args.kind},
                       {"n_max", args.n_max},
                       {"samples", args.samples_file},
                       {"out", args.out}});
  }
  return kExitOk;
}

int run_optimize(const OptimizeArgs& args) {
  const snfcs::ModeKind kind = snfcs::mode_kind_from_string(args.kind);
  const snfcs::ChiMode chi_mode = args.chi_mode == "fixed"
                                      ? snfcs::ChiMode::FixedPolicy
                                      : snfcs::ChiMode::Free;
  if (args.chi_mode != "free" && args.chi_mode != "fixed")
    throw CLI::ValidationError("--chi-mode", "expected free or fixed");

  snfcs::OptimizerRun run;
  if (args.algo == "gd") {
    snfcs::GdConfig cfg;
    cfg.kind = kind;
    cfg.n_max = args.n_max;
    cfg.k = args.k;
    cfg.p = args.p;
    cfg.eta = args.eta;
    cfg.iters = args.iters;
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    cfg.chi_mode = chi_mode;
    cfg.chi_policy = snfcs::chi_policy_from_string(args.chi_policy);
    cfg.jobs = snfcs::effective_jobs(args.jobs);
    run = snfcs::gd_optimize(cfg);
  } else if (args.algo == "alm") {
    snfcs::AlmConfig cfg;
    cfg.kind = kind;
    cfg.n_max = args.n_max;
    cfg.k = args.k;
    cfg.tau = args.tau;
    cfg.lambda_reg = args.lambda_reg;
    cfg.eta_inner = args.eta_inner;
    cfg.inner_iters = args.inner_iters;
    cfg.iters = args.iters;
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    cfg.chi_mode = chi_mode;
    cfg.chi_policy = snfcs::chi_policy_from_string(args.chi_policy);
    cfg.legacy_dual_update = args.legacy_dual;
    cfg.jobs = snfcs::effective_jobs(args.jobs);
    run = snfcs::alm_optimize(cfg);
  } else {
    throw CLI::ValidationError("--algo", "expected gd or alm");
  }

  const fs::path dir = prepare_out_dir(args.out);
  {
    std::ofstream out(dir / "run.json");
    out << run.to_json().dump(2) << '\n';
  }
  snfcs::save_sampling_csv(run.best_angles, (dir / "angles.csv").string());
  write_config_echo(dir, "optimize", run.config_echo);
  std::cout << "best coherence " << run.best_mu << " after "
            << run.iterations_used << " iterations\n";
  return kExitOk;
}

int run_recover(const RecoverArgs& args) {
  Eigen::MatrixXcd a;
  if (args.matrix_file.size() > 5 &&
      args.matrix_file.substr(args.matrix_file.size() - 5) == ".json")
    a = snfcs::load_matrix_json(args.matrix_file).data;
  else
    a = snfcs::load_matrix_csv(args.matrix_file);
  const Eigen::VectorXcd y = load_vector_csv(args.y_file);

  snfcs::RecoveryOptions options;
  options.tol_primal = args.tol_primal;
  options.tol_dual = args.tol_dual;
  options.max_iters = args.max_iters;
  const snfcs::RecoveryResult result = snfcs::bp_solve(a, y, options);

  const fs::path dir = prepare_out_dir(args.out);
  save_vector_csv(result.x_hat, (dir / "x_hat.csv").string());
  const json j = {{"residual_norm", result.residual_norm},
                  {"l1_value", result.l1_value},
                  {"iterations", result.iterations},
                  {"converged", result.converged},
                  {"K", a.rows()},
                  {"L", a.cols()}};
  {
    std::ofstream out(dir / "result.json");
    out << j.dump(2) << '\n';
  }
  write_config_echo(dir, "recover",
                    {{"command", "recover"},
                     {"matrix", args.matrix_file},
                     {"y", args.y_file},
                     {"tol_primal", args.tol_primal},
                     {"tol_dual", args.tol_dual},
                     {"max_iters", args.max_iters},
                     {"out", args.out}});
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_phase(const PhaseArgs& args) {
  snfcs::PhaseGridConfig cfg;
  cfg.kind = snfcs::mode_kind_from_string(args.kind);
  cfg.n_max = args.n_max;
  cfg.sampler = snfcs::sampler_from_string(args.sampler);
  cfg.k_over_l = args.k_over_l;
  cfg.s_over_k = args.s_over_k;
  if (cfg.k_over_l.empty())
    cfg.k_over_l = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  if (cfg.s_over_k.empty())
    cfg.s_over_k = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  cfg.trials = args.trials;
  cfg.rel_tol = args.rel_tol;
  cfg.seed = args.seed;
  cfg.jobs = args.jobs;
  cfg.budget.iters = args.opt_iters;
  cfg.budget.restarts = args.opt_restarts;

  const snfcs::PhaseGridResult result = snfcs::phase_transition(cfg);
  const fs::path dir = prepare_out_dir(args.out);
  snfcs::save_phase_grid_csv(result, (dir / "grid.csv").string());
  snfcs::save_contour_csv(result, (dir / "contour.csv").string());
  {
    std::ofstream out(dir / "result.json");
    out << result.to_json().dump(2) << '\n';
  }
  write_config_echo(dir, "phase", cfg.to_json());
  std::cout << "wrote " << (dir / "grid.csv").string() << '\n';
  return kExitOk;
}

int run_farfield(const FarfieldArgs& args) {
  snfcs::FarfieldConfig cfg;
  cfg.n_max = args.n_max;
  cfg.k_list = args.k_list;
  cfg.kind = snfcs::mode_kind_from_string(args.kind);
  if (cfg.k_list.empty()) {
    const int l = static_cast<int>(snfcs::mode_count(cfg.kind, cfg.n_max));
    cfg.k_list = {static_cast<int>(0.6 * l), static_cast<int>(0.8 * l), 2 * l};
  }
  cfg.sampler = snfcs::sampler_from_string(args.sampler);
  if (args.smc == "sparse")
    cfg.smc_model = snfcs::SyntheticSmc::Model::ExactSparse;
  else if (args.smc == "compressible")
    cfg.smc_model = snfcs::SyntheticSmc::Model::Compressible;
  else
    throw CLI::ValidationError("--smc", "expected sparse or compressible");
  cfg.sparsity = args.sparsity;
  cfg.decay_rate = args.decay;
  cfg.trials = args.trials;
  cfg.phi_cut = args.phi_cut_deg * std::numbers::pi / 180.0;
  cfg.theta_points = args.theta_points;
  cfg.seed = args.seed;
  cfg.jobs = args.jobs;
  cfg.budget.iters = args.opt_iters;
  cfg.budget.restarts = args.opt_restarts;

  const snfcs::FarfieldReport report = snfcs::farfield_demo(cfg);
  const fs::path dir = prepare_out_dir(args.out);
  snfcs::save_farfield_errors_csv(report, (dir / "errors.csv").string());
  for (std::size_t i = 0; i < report.rows.size(); ++i)
    snfcs::save_farfield_cut_csv(
        report, static_cast<int>(i),
        (dir / ("cut_k" + std::to_string(report.rows[i].k) + ".csv")).string());
  {
    std::ofstream out(dir / "result.json");
    out << report.to_json().dump(2) << '\n';
  }
  write_config_echo(dir, "farfield", cfg.to_json());
  std::cout << "wrote " << (dir / "errors.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-coherence sensing matrices on the sphere and rotation "
               "group: sampling design, coherence optimization and sparse "
               "recovery experiments"};
  app.require_subcommand(1);
  // Config files use one [subcommand] section per command; flags given on
  // the command line override file values, unknown keys are rejected.
  app.set_config("--config", "", "Config file with [command] key = value lines");
  app.allow_config_extras(false);

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand("sample", "Generate a sampling set");

  sample->add_option("--sampler", sample_args.sampler,
                     "spiral|hammersley|random|equiangular");
  sample->add_option("--k", sample_args.k, "Number of points");
  sample->add_option("--step-deg", sample_args.step_deg,
                     "Equiangular step in degrees");
  sample->add_option("--chi", sample_args.chi,
                     "Chi policy: free|even|alternate|fixed:VAL");
  sample->add_flag("--duplicate", sample_args.duplicate,
                   "Duplicate each spatial point pairwise first");
  sample->add_option("--seed", sample_args.seed, "Root seed");
  sample->add_option("--out", sample_args.out, "Output directory")
      ->envname("SNFCS_OUTDIR");
  sample->add_option("--name", sample_args.name, "Output basename");

  CoherenceArgs coh_args;
  CLI::App* coh = app.add_subcommand("coherence",
                                     "Coherence report for a sampling set");

  coh->add_option("--kind", coh_args.kind, "sh|wigner|snf");
  coh->add_option("--n-max", coh_args.n_max, "Maximum degree N");
  coh->add_option("--samples", coh_args.samples_file, "Sampling CSV")
      ->required();
  coh->add_option("--out", coh_args.out,
                  "Also write report.json and the config echo here")
      ->envname("SNFCS_OUTDIR");

  OptimizeArgs opt_args;
  CLI::App* opt = app.add_subcommand("optimize", "Minimize coherence");

  opt->add_option("--algo", opt_args.algo, "gd|alm");
  opt->add_option("--kind", opt_args.kind, "sh|wigner|snf");
  opt->add_option("--n-max", opt_args.n_max, "Maximum degree N");
  opt->add_option("--k", opt_args.k, "Number of sampling points");
  opt->add_option("--p", opt_args.p, "Smoothing exponent (gd)");
  opt->add_option("--eta", opt_args.eta, "Step size (gd)");
  opt->add_option("--tau", opt_args.tau, "Penalty parameter (alm)");
  opt->add_option("--lambda", opt_args.lambda_reg, "Regularization (alm)");
  opt->add_option("--eta-inner", opt_args.eta_inner, "Inner step size (alm)");
  opt->add_option("--inner-iters", opt_args.inner_iters,
                  "Angle steps per outer iteration (alm)");
  opt->add_option("--iters", opt_args.iters, "Iterations");
  opt->add_option("--restarts", opt_args.restarts, "Random restarts");
  opt->add_option("--chi-mode", opt_args.chi_mode, "free|fixed");
  opt->add_option("--chi-policy", opt_args.chi_policy,
                  "free|even|alternate|fixed:VAL");
  opt->add_flag("--legacy-dual", opt_args.legacy_dual,
                "Dual update with the extra multiplier term");
  opt->add_option("--seed", opt_args.seed, "Root seed");
  opt->add_option("--jobs", opt_args.jobs, "Concurrent restarts")
      ->envname("SNFCS_JOBS");
  opt->add_option("--out", opt_args.out, "Output directory")
      ->envname("SNFCS_OUTDIR");

  RecoverArgs rec_args;
  CLI::App* rec = app.add_subcommand("recover", "Basis-pursuit recovery");

  rec->add_option("--matrix", rec_args.matrix_file, "Matrix CSV or JSON")
      ->required();
  rec->add_option("--y", rec_args.y_file, "Measurement CSV (re,im)")
      ->required();
  rec->add_option("--tol-primal", rec_args.tol_primal, "Primal tolerance");
  rec->add_option("--tol-dual", rec_args.tol_dual, "Dual tolerance");
  rec->add_option("--max-iters", rec_args.max_iters, "Iteration cap");
  rec->add_option("--out", rec_args.out, "Output directory")
      ->envname("SNFCS_OUTDIR");

  PhaseArgs phase_args;
  CLI::App* phase = app.add_subcommand("phase", "Phase-transition grid");

  phase->add_option("--kind", phase_args.kind, "sh|wigner|snf");
  phase->add_option("--n-max", phase_args.n_max, "Maximum degree N");
  phase->add_option("--sampler", phase_args.sampler,
                    "spiral|hammersley|random|gd|alm");
  phase->add_option("--k-over-l", phase_args.k_over_l, "K/L grid values")
      ->delimiter(',');
  phase->add_option("--s-over-k", phase_args.s_over_k, "s/K grid values")
      ->delimiter(',');
  phase->add_option("--trials", phase_args.trials, "Trials per cell");
  phase->add_option("--rel-tol", phase_args.rel_tol, "Success threshold");
  phase->add_option("--opt-iters", phase_args.opt_iters,
                    "Optimizer iterations per column");
  phase->add_option("--opt-restarts", phase_args.opt_restarts,
                    "Optimizer restarts per column");
  phase->add_option("--seed", phase_args.seed, "Root seed");
  phase->add_option("--jobs", phase_args.jobs, "Parallel trials")
      ->envname("SNFCS_JOBS");
  phase->add_option("--out", phase_args.out, "Output directory")
      ->envname("SNFCS_OUTDIR");

  FarfieldArgs far_args;
  CLI::App* far = app.add_subcommand("farfield", "Far-field reconstruction");

  far->add_option("--n-max", far_args.n_max, "Maximum degree N");
  far->add_option("--k-list", far_args.k_list, "Sample counts")->delimiter(',');
  far->add_option("--sampler", far_args.sampler,
                  "spiral|hammersley|random|gd|alm");
  far->add_option("--kind", far_args.kind, "snf|sh");
  far->add_option("--smc", far_args.smc, "sparse|compressible");
  far->add_option("--sparsity", far_args.sparsity, "Nonzeros (sparse model)");
  far->add_option("--decay", far_args.decay, "Decay rate (compressible)");
  far->add_option("--trials", far_args.trials, "Coefficient draws per K");
  far->add_option("--phi-cut-deg", far_args.phi_cut_deg, "Cut azimuth");
  far->add_option("--theta-points", far_args.theta_points, "Cut resolution");
  far->add_option("--opt-iters", far_args.opt_iters, "Optimizer iterations");
  far->add_option("--opt-restarts", far_args.opt_restarts,
                  "Optimizer restarts");
  far->add_option("--seed", far_args.seed, "Root seed");
  far->add_option("--jobs", far_args.jobs, "Parallel trials")
      ->envname("SNFCS_JOBS");
  far->add_option("--out", far_args.out, "Output directory")
      ->envname("SNFCS_OUTDIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sample->parsed()) return run_sample(sample_args);
    if (coh->parsed()) return run_coherence(coh_args);
    if (opt->parsed()) return run_optimize(opt_args);
    if (rec->parsed()) return run_recover(rec_args);
    if (phase->parsed()) return run_phase(phase_args);
    if (far->parsed()) return run_farfield(far_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
