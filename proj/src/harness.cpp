// SPDX-License-Identifier: Apache-2.0

#include "snfcs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "snfcs/parallel.hpp"
#include "snfcs/recovery.hpp"
#include "snfcs/rng.hpp"
#include "snfcs/sensing.hpp"

namespace snfcs {

namespace {

using Complex = std::complex<double>;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr std::uint64_t kTagSamples = 0x01;
constexpr std::uint64_t kTagMatrix = 0x02;
constexpr std::uint64_t kTagSignal = 0x03;

SamplingSet deterministic_base(Sampler sampler, int k) {
  switch (sampler) {
    case Sampler::Spiral: return spiral(k);
    case Sampler::Hammersley: return hammersley(k);
    default: throw std::logic_error("deterministic_base: not deterministic");
  }
}

}  // namespace

std::string to_string(Sampler s) {
  switch (s) {
    case Sampler::Spiral: return "spiral";
    case Sampler::Hammersley: return "hammersley";
    case Sampler::Random: return "random";
    case Sampler::OptimizedGD: return "gd";
    case Sampler::OptimizedALM: return "alm";
  }
  throw std::logic_error("unreachable sampler");
}

Sampler sampler_from_string(const std::string& name) {
  for (Sampler s : {Sampler::Spiral, Sampler::Hammersley, Sampler::Random,
                    Sampler::OptimizedGD, Sampler::OptimizedALM})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown sampler '" + name +
                              "' (expected spiral, hammersley, random, gd or alm)");
}

SamplingSet make_samples(Sampler sampler, ModeKind kind, int k, int n_max,
                         std::uint64_t seed, const OptBudget& budget, int jobs) {
  switch (sampler) {
    case Sampler::Spiral:
    case Sampler::Hammersley: {
      if (kind == ModeKind::SnfMuPm1) {
        SamplingSet base = deterministic_base(sampler, (k + 1) / 2);
        SamplingSet doubled =
            apply_chi(duplicate_pairwise(base), ChiPolicy::alternate_pair());
        doubled.theta.resize(k);
        doubled.phi.resize(k);
        doubled.chi.resize(k);
        return doubled;
      }
      SamplingSet base = deterministic_base(sampler, k);
      if (kind == ModeKind::WignerGeneral)
        base = apply_chi(std::move(base), ChiPolicy::even_spread());
      return base;
    }
    case Sampler::Random:
      return random_uniform(k, Rng::derive(seed, {kTagSamples}));
    case Sampler::OptimizedGD: {
      GdConfig cfg;
      cfg.kind = kind;
      cfg.n_max = n_max;
      cfg.k = k;
      cfg.p = budget.gd_p;
      cfg.eta = budget.gd_eta;
      cfg.iters = budget.iters;
      cfg.restarts = budget.restarts;
      cfg.seed = Rng::derive(seed, {kTagSamples});
      cfg.jobs = jobs;
      if (kind == ModeKind::SnfMuPm1 && k % 2 == 0) {
        cfg.chi_mode = ChiMode::FixedPolicy;
        cfg.chi_policy = ChiPolicy::alternate_pair();
      }
      return gd_optimize(cfg).best_angles;
    }
    case Sampler::OptimizedALM: {
      AlmConfig cfg;
      cfg.kind = kind;
      cfg.n_max = n_max;
      cfg.k = k;
      cfg.tau = budget.alm_tau;
      cfg.lambda_reg = budget.alm_lambda;
      cfg.eta_inner = budget.alm_eta;
      cfg.inner_iters = budget.alm_inner_iters;
      cfg.iters = budget.iters;
      cfg.restarts = budget.restarts;
      cfg.seed = Rng::derive(seed, {kTagSamples});
      cfg.jobs = jobs;
      if (kind == ModeKind::SnfMuPm1 && k % 2 == 0) {
        cfg.chi_mode = ChiMode::FixedPolicy;
        cfg.chi_policy = ChiPolicy::alternate_pair();
      }
      return alm_optimize(cfg).best_angles;
    }
  }
  throw std::logic_error("unreachable sampler");
}

std::vector<CoherenceBenchRow> coherence_benchmark(
    ModeKind kind, int n_max, const std::vector<int>& k_values,
    const std::vector<Sampler>& samplers, int restarts, std::uint64_t seed,
    const OptBudget& budget, int jobs) {
  if (restarts < 1)
    throw std::invalid_argument("coherence_benchmark: restarts must be >= 1");
  std::vector<CoherenceBenchRow> rows;
  for (const Sampler sampler : samplers) {
    const bool stochastic =
        sampler == Sampler::Random || sampler == Sampler::OptimizedGD ||
        sampler == Sampler::OptimizedALM;
    for (const int k : k_values) {
      std::vector<double> values;
      if (sampler == Sampler::OptimizedGD || sampler == Sampler::OptimizedALM) {
        // One optimizer restart per draw; the optimizer already reports the
        // per-restart best, so run single-restart configs here to expose the
        // spread across inits.
        OptBudget one = budget;
        one.restarts = 1;
        values.resize(static_cast<std::size_t>(restarts));
        parallel_for(restarts, jobs, [&](int draw) {
          const SamplingSet s = make_samples(
              sampler, kind, k, n_max,
              Rng::derive(seed, {0x10, static_cast<std::uint64_t>(draw)}), one,
              1);
          values[static_cast<std::size_t>(draw)] =
              coherence(build_matrix(kind, n_max, s)).mu;
        });
      } else {
        const int draws = stochastic ? restarts : 1;
        values.resize(static_cast<std::size_t>(draws));
        parallel_for(draws, jobs, [&](int draw) {
          const SamplingSet s = make_samples(
              sampler, kind, k, n_max,
              Rng::derive(seed, {0x10, static_cast<std::uint64_t>(draw)}),
              budget, 1);
          values[static_cast<std::size_t>(draw)] =
              coherence(build_matrix(kind, n_max, s)).mu;
        });
      }
      CoherenceBenchRow row;
      row.sampler = to_string(sampler);
      row.k = k;
      row.welch = welch_bound(k, static_cast<int>(mode_count(kind, n_max)));
      row.best = *std::min_element(values.begin(), values.end());
      const double mean =
          std::accumulate(values.begin(), values.end(), 0.0) / values.size();
      row.mean = mean;
      double var = 0.0;
      for (const double v : values) var += (v - mean) * (v - mean);
      row.stddev = values.size() > 1 ? std::sqrt(var / (values.size() - 1)) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void save_benchmark_csv(const std::vector<CoherenceBenchRow>& rows,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "sampler,k,mean,stddev,best,welch\n";
  for (const auto& row : rows)
    out << row.sampler << ',' << row.k << ',' << g17(row.mean) << ','
        << g17(row.stddev) << ',' << g17(row.best) << ',' << g17(row.welch)
        << '\n';
}

nlohmann::json PhaseGridConfig::to_json() const {
  return {{"kind", to_string(kind)},   {"N", n_max},
          {"k_over_l", k_over_l},      {"s_over_k", s_over_k},
          {"trials", trials},          {"sampler", to_string(sampler)},
          {"seed", seed},              {"rel_tol", rel_tol},
          {"opt_restarts", budget.restarts}, {"opt_iters", budget.iters},
          {"jobs", jobs}};
}

nlohmann::json PhaseGridResult::to_json() const {
  nlohmann::json rates = nlohmann::json::array();
  for (Eigen::Index i = 0; i < success_rate.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index jj = 0; jj < success_rate.cols(); ++jj)
      row.push_back(success_rate(i, jj));
    rates.push_back(row);
  }
  nlohmann::json contour = nlohmann::json::array();
  for (const double c : contour50)
    contour.push_back(std::isnan(c) ? nlohmann::json(nullptr)
                                    : nlohmann::json(c));
  return {{"config", config.to_json()},
          {"k_per_column", k_per_column},
          {"success_rate", rates},
          {"contour50", contour},
          {"monotonicity_violations", monotonicity_violations}};
}

PhaseGridResult phase_transition(const PhaseGridConfig& config) {
  if (config.k_over_l.empty() || config.s_over_k.empty())
    throw std::invalid_argument("phase_transition: empty grid");
  if (config.trials < 1)
    throw std::invalid_argument("phase_transition: trials must be >= 1");
  for (const double ratio : config.k_over_l)
    if (!(ratio > 0.0 && ratio <= 1.0))
      throw std::invalid_argument("phase_transition: K/L ratios must be in (0,1]");
  for (const double ratio : config.s_over_k)
    if (!(ratio > 0.0 && ratio <= 1.0))
      throw std::invalid_argument("phase_transition: s/K ratios must be in (0,1]");

  const int l = static_cast<int>(mode_count(config.kind, config.n_max));
  const int n_cols = static_cast<int>(config.k_over_l.size());
  const int n_rows = static_cast<int>(config.s_over_k.size());

  PhaseGridResult result;
  result.config = config;
  result.k_per_column.resize(static_cast<std::size_t>(n_cols));
  result.success_rate.setZero(n_rows, n_cols);

  const bool random_matrix = config.sampler == Sampler::Random;

  // Fixed samplers share one matrix (and one cached solver) per column.
  std::vector<std::shared_ptr<BpSolver>> solvers(
      static_cast<std::size_t>(n_cols));
  for (int col = 0; col < n_cols; ++col) {
    const int k = std::max(1, static_cast<int>(std::lround(
                                  config.k_over_l[static_cast<std::size_t>(col)] * l)));
    result.k_per_column[static_cast<std::size_t>(col)] = k;
    if (!random_matrix) {
      const SamplingSet samples = make_samples(
          config.sampler, config.kind, k, config.n_max,
          Rng::derive(config.seed, {0x20, static_cast<std::uint64_t>(col)}),
          config.budget, effective_jobs(config.jobs));
      solvers[static_cast<std::size_t>(col)] = std::make_shared<BpSolver>(
          build_matrix(config.kind, config.n_max, samples).data);
    }
  }

  // One job per (cell, trial); success flags reduce per cell afterwards.
  const long jobs_total =
      static_cast<long>(n_rows) * n_cols * config.trials;
  std::vector<std::uint8_t> success(static_cast<std::size_t>(jobs_total), 0);
  parallel_for(static_cast<int>(jobs_total), config.jobs, [&](int idx) {
    const int trial = idx % config.trials;
    const int cell = idx / config.trials;
    const int col = cell % n_cols;
    const int row = cell / n_cols;
    const int k = result.k_per_column[static_cast<std::size_t>(col)];
    const int s = std::max(
        1, static_cast<int>(std::lround(
               config.s_over_k[static_cast<std::size_t>(row)] * k)));

    Rng rng(Rng::derive(config.seed,
                        {kTagSignal, static_cast<std::uint64_t>(col),
                         static_cast<std::uint64_t>(row),
                         static_cast<std::uint64_t>(trial)}));

    std::shared_ptr<BpSolver> solver = solvers[static_cast<std::size_t>(col)];
    if (random_matrix) {
      const SamplingSet samples = random_uniform(
          k, Rng::derive(config.seed,
                         {kTagMatrix, static_cast<std::uint64_t>(col),
                          static_cast<std::uint64_t>(row),
                          static_cast<std::uint64_t>(trial)}));
      solver = std::make_shared<BpSolver>(
          build_matrix(config.kind, config.n_max, samples).data);
    }

    // Exactly sparse coefficients: uniform support, Gaussian values.
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(l);
    std::vector<int> order(static_cast<std::size_t>(l));
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < s; ++i) {
      const int pick =
          i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(l - i)));
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(pick)]);
      x(order[static_cast<std::size_t>(i)]) = rng.normal_complex();
    }

    const Eigen::VectorXcd y = solver->matrix() * x;
    const RecoveryResult rec = solver->solve(y);
    success[static_cast<std::size_t>(idx)] =
        support_recovery_success(rec.x_hat, x, config.rel_tol) ? 1 : 0;
  });

  for (int row = 0; row < n_rows; ++row)
    for (int col = 0; col < n_cols; ++col) {
      long hits = 0;
      const long base = (static_cast<long>(row) * n_cols + col) * config.trials;
      for (int t = 0; t < config.trials; ++t)
        hits += success[static_cast<std::size_t>(base + t)];
      result.success_rate(row, col) =
          static_cast<double>(hits) / config.trials;
    }

  // 50% contour per column, scanning s/K upward from the sparsest row.
  result.contour50.assign(static_cast<std::size_t>(n_cols),
                          std::numeric_limits<double>::quiet_NaN());
  for (int col = 0; col < n_cols; ++col) {
    const auto rate = [&](int row) { return result.success_rate(row, col); };
    if (rate(0) < 0.5) continue;  // never reaches 50%: contour absent
    double value = config.s_over_k.back();
    for (int row = 0; row + 1 < n_rows; ++row) {
      if (rate(row) >= 0.5 && rate(row + 1) < 0.5) {
        const double span = rate(row) - rate(row + 1);
        const double fraction = span > 0.0 ? (rate(row) - 0.5) / span : 0.0;
        value = config.s_over_k[static_cast<std::size_t>(row)] +
                fraction * (config.s_over_k[static_cast<std::size_t>(row + 1)] -
                            config.s_over_k[static_cast<std::size_t>(row)]);
        break;
      }
    }
    result.contour50[static_cast<std::size_t>(col)] = value;
  }

  for (int col = 0; col < n_cols; ++col)
    for (int row = 0; row + 1 < n_rows; ++row)
      if (result.success_rate(row + 1, col) >
          result.success_rate(row, col) + 1e-12)
        ++result.monotonicity_violations;

  return result;
}

void save_phase_grid_csv(const PhaseGridResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "k_over_l,s_over_k,k,s,success_rate\n";
  const auto& cfg = result.config;
  for (std::size_t row = 0; row < cfg.s_over_k.size(); ++row)
    for (std::size_t col = 0; col < cfg.k_over_l.size(); ++col) {
      const int k = result.k_per_column[col];
      const int s =
          std::max(1, static_cast<int>(std::lround(cfg.s_over_k[row] * k)));
      out << g17(cfg.k_over_l[col]) << ',' << g17(cfg.s_over_k[row]) << ',' << k
          << ',' << s << ','
          << g17(result.success_rate(static_cast<Eigen::Index>(row),
                                     static_cast<Eigen::Index>(col)))
          << '\n';
    }
}

void save_contour_csv(const PhaseGridResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "k_over_l,contour_s_over_k\n";
  for (std::size_t col = 0; col < result.config.k_over_l.size(); ++col) {
    const double c = result.contour50[col];
    out << g17(result.config.k_over_l[col]) << ','
        << (std::isnan(c) ? std::string("nan") : g17(c)) << '\n';
  }
}

SyntheticSmc SyntheticSmc::exact_sparse(int length, int sparsity,
                                        std::uint64_t seed) {
  if (sparsity < 1 || sparsity > length)
    throw std::invalid_argument("exact_sparse: need 1 <= s <= L");
  SyntheticSmc out;
  out.model = Model::ExactSparse;
  out.sparsity = sparsity;
  out.seed = seed;
  out.coeffs = Eigen::VectorXcd::Zero(length);
  Rng rng(Rng::derive(seed, {0x31}));
  std::vector<int> order(static_cast<std::size_t>(length));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < sparsity; ++i) {
    const int pick = i + static_cast<int>(rng.next_below(
                             static_cast<std::uint64_t>(length - i)));
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(pick)]);
    out.coeffs(order[static_cast<std::size_t>(i)]) = rng.normal_complex();
  }
  return out;
}

SyntheticSmc SyntheticSmc::compressible(int length, double decay_rate,
                                        std::uint64_t seed) {
  SyntheticSmc out;
  out.model = Model::Compressible;
  out.decay_rate = decay_rate;
  out.seed = seed;
  out.coeffs.resize(length);
  Rng rng(Rng::derive(seed, {0x32}));
  std::vector<int> order(static_cast<std::size_t>(length));
  std::iota(order.begin(), order.end(), 0);
  for (int i = length - 1; i > 0; --i) {
    const int pick =
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(pick)]);
  }
  for (int rank = 0; rank < length; ++rank) {
    const double magnitude = std::pow(rank + 1.0, -decay_rate);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.coeffs(order[static_cast<std::size_t>(rank)]) =
        std::polar(magnitude, phase);
  }
  return out;
}

Eigen::VectorXcd synth_forward(ModeKind kind, int n_max,
                               const SamplingSet& samples,
                               const Eigen::VectorXcd& coeffs) {
  const SensingMatrix matrix = build_matrix(kind, n_max, samples);
  if (coeffs.size() != matrix.cols())
    throw std::invalid_argument("synth_forward: coefficient length mismatch");
  return matrix.data * coeffs;
}

PatternCut farfield_cut(const Eigen::VectorXcd& coeffs, ModeKind kind,
                        int n_max, double phi_cut,
                        const std::vector<double>& theta_grid) {
  if (theta_grid.empty())
    throw std::invalid_argument("farfield_cut: empty theta grid");
  if (coeffs.size() != mode_count(kind, n_max))
    throw std::invalid_argument("farfield_cut: coefficient length mismatch");
  SamplingSet grid;
  grid.theta = theta_grid;
  grid.phi.assign(theta_grid.size(), phi_cut);
  grid.chi.assign(theta_grid.size(), 0.0);
  const ModeTable table(kind, n_max);
  const Eigen::VectorXcd field = basis_values(table, grid) * coeffs;
  const double peak = field.cwiseAbs().maxCoeff();
  if (peak <= 0.0)
    throw std::domain_error("farfield_cut: field is identically zero");
  PatternCut cut;
  cut.phi_cut = phi_cut;
  cut.theta_grid = theta_grid;
  cut.magnitude_db.resize(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const double rel =
        std::max(std::abs(field(static_cast<Eigen::Index>(i))) / peak, 1e-15);
    cut.magnitude_db[i] = 20.0 * std::log10(rel);
  }
  return cut;
}

std::pair<double, double> farfield_error(const PatternCut& recon,
                                         const PatternCut& truth) {
  if (recon.theta_grid != truth.theta_grid)
    throw std::invalid_argument("farfield_error: grids differ");
  double max_db = 0.0;
  double sum_db = 0.0;
  long count = 0;
  for (std::size_t i = 0; i < truth.magnitude_db.size(); ++i) {
    if (truth.magnitude_db[i] <= -60.0) continue;
    const double diff = std::abs(recon.magnitude_db[i] - truth.magnitude_db[i]);
    max_db = std::max(max_db, diff);
    sum_db += diff;
    ++count;
  }
  return {max_db, count > 0 ? sum_db / count : 0.0};
}

nlohmann::json FarfieldConfig::to_json() const {
  return {{"N", n_max},
          {"k_list", k_list},
          {"sampler", to_string(sampler)},
          {"kind", to_string(kind)},
          {"smc_model",
           smc_model == SyntheticSmc::Model::ExactSparse ? "sparse" : "compressible"},
          {"sparsity", sparsity},
          {"decay_rate", decay_rate},
          {"trials", trials},
          {"phi_cut", phi_cut},
          {"theta_points", theta_points},
          {"seed", seed},
          {"opt_restarts", budget.restarts},
          {"opt_iters", budget.iters},
          {"jobs", jobs}};
}

nlohmann::json FarfieldReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows)
    rows_json.push_back({{"k", row.k},
                         {"max_db", row.max_db},
                         {"mean_db", row.mean_db},
                         {"recovery_rel_error", row.recovery_rel_error},
                         {"success_rate", row.success_rate}});
  return {{"kind", to_string(kind)},
          {"N", n_max},
          {"config", config_echo},
          {"rows", rows_json}};
}

FarfieldReport farfield_demo(const FarfieldConfig& config) {
  const int l = static_cast<int>(mode_count(config.kind, config.n_max));
  for (const int k : config.k_list)
    if (k < 1 || k > 2 * l)
      throw std::invalid_argument(
          "farfield_demo: K must be in [1, 2L] (conventional sampling needs K > 2L)");
  if (config.trials < 1)
    throw std::invalid_argument("farfield_demo: trials must be >= 1");

  FarfieldReport report;
  report.kind = config.kind;
  report.n_max = config.n_max;
  report.config_echo = config.to_json();
  report.theta_grid.resize(static_cast<std::size_t>(config.theta_points));
  for (int i = 0; i < config.theta_points; ++i)
    report.theta_grid[static_cast<std::size_t>(i)] =
        std::numbers::pi * i / (config.theta_points - 1);

  for (const int k : config.k_list) {
    const SamplingSet samples = make_samples(
        config.sampler, config.kind, k, config.n_max,
        Rng::derive(config.seed, {kTagSamples, static_cast<std::uint64_t>(k)}),
        config.budget, effective_jobs(config.jobs));
    const SensingMatrix matrix = build_matrix(config.kind, config.n_max, samples);
    const BpSolver solver(matrix.data);

    FarfieldRow row;
    row.k = k;
    std::vector<double> max_db(static_cast<std::size_t>(config.trials));
    std::vector<double> mean_db(static_cast<std::size_t>(config.trials));
    std::vector<double> rel_err(static_cast<std::size_t>(config.trials));
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(config.trials));
    std::vector<PatternCut> last_cuts(2);

    parallel_for(config.trials, config.jobs, [&](int trial) {
      const std::uint64_t smc_seed = Rng::derive(
          config.seed, {kTagSignal, static_cast<std::uint64_t>(trial)});
      const SyntheticSmc smc =
          config.smc_model == SyntheticSmc::Model::ExactSparse
              ? SyntheticSmc::exact_sparse(l, config.sparsity, smc_seed)
              : SyntheticSmc::compressible(l, config.decay_rate, smc_seed);
      const Eigen::VectorXcd y = matrix.data * smc.coeffs;
      const RecoveryResult rec = solver.solve(y);
      const PatternCut truth = farfield_cut(smc.coeffs, config.kind,
                                            config.n_max, config.phi_cut,
                                            report.theta_grid);
      const PatternCut recon = farfield_cut(rec.x_hat, config.kind,
                                            config.n_max, config.phi_cut,
                                            report.theta_grid);
      const auto [mx, mn] = farfield_error(recon, truth);
      max_db[static_cast<std::size_t>(trial)] = mx;
      mean_db[static_cast<std::size_t>(trial)] = mn;
      rel_err[static_cast<std::size_t>(trial)] =
          (rec.x_hat - smc.coeffs).norm() / smc.coeffs.norm();
      ok[static_cast<std::size_t>(trial)] =
          rel_err[static_cast<std::size_t>(trial)] < 1e-4 ? 1 : 0;
      if (trial == config.trials - 1) {
        last_cuts[0] = truth;
        last_cuts[1] = recon;
      }
    });

    row.max_db = std::accumulate(max_db.begin(), max_db.end(), 0.0) /
                 config.trials;
    row.mean_db = std::accumulate(mean_db.begin(), mean_db.end(), 0.0) /
                  config.trials;
    row.recovery_rel_error =
        std::accumulate(rel_err.begin(), rel_err.end(), 0.0) / config.trials;
    row.success_rate =
        std::accumulate(ok.begin(), ok.end(), 0.0) / config.trials;
    report.rows.push_back(row);
    report.truth_db.push_back(last_cuts[0].magnitude_db);
    report.recon_db.push_back(last_cuts[1].magnitude_db);
  }
  return report;
}

void save_farfield_errors_csv(const FarfieldReport& report,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "k,max_db,mean_db,recovery_rel_error,success_rate\n";
  for (const auto& row : report.rows)
    out << row.k << ',' << g17(row.max_db) << ',' << g17(row.mean_db) << ','
        << g17(row.recovery_rel_error) << ',' << g17(row.success_rate) << '\n';
}

void save_farfield_cut_csv(const FarfieldReport& report, int k_index,
                           const std::string& path) {
  if (k_index < 0 || k_index >= static_cast<int>(report.rows.size()))
    throw std::invalid_argument("save_farfield_cut_csv: bad K index");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "theta_deg,truth_db,recon_db\n";
  const auto& truth = report.truth_db[static_cast<std::size_t>(k_index)];
  const auto& recon = report.recon_db[static_cast<std::size_t>(k_index)];
  for (std::size_t i = 0; i < report.theta_grid.size(); ++i)
    out << g17(report.theta_grid[i] * 180.0 / std::numbers::pi) << ','
        << g17(truth[i]) << ',' << g17(recon[i]) << '\n';
}

}  // namespace snfcs
