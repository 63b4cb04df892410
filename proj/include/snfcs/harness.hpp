// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers: coherence-versus-K benchmark tables, phase-transition
// grids with the 50% recovery contour, and the synthetic far-field
// reconstruction pipeline.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "snfcs/modes.hpp"
#include "snfcs/optim.hpp"
#include "snfcs/sampling.hpp"

namespace snfcs {

enum class Sampler { Spiral, Hammersley, Random, OptimizedGD, OptimizedALM };

std::string to_string(Sampler s);
Sampler sampler_from_string(const std::string& name);

// Iteration/restart budget for optimizer-backed samplers inside the
// experiment drivers.
struct OptBudget {
  int restarts = 3;
  int iters = 200;
  double gd_eta = 0.2;
  double gd_p = 6.0;
  double alm_tau = 1.0;
  double alm_lambda = 0.1;
  double alm_eta = 0.1;
  int alm_inner_iters = 5;
};

// Builds the measurement set a sampler contributes for a given kind.
//   - Spherical harmonics ignore chi.
//   - WignerGeneral: spiral/Hammersley get the even chi spread, random draws
//     chi uniformly, optimizers move chi freely.
//   - SnfMuPm1: deterministic samplers emit ceil(K/2) spatial points, each
//     acquired at chi = 0 and chi = pi/2 (truncated to K rows when K is
//     odd); optimizers keep that alternating chi frozen.
SamplingSet make_samples(Sampler sampler, ModeKind kind, int k, int n_max,
                         std::uint64_t seed, const OptBudget& budget = {},
                         int jobs = 1);

struct CoherenceBenchRow {
  std::string sampler;
  int k = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double best = 0.0;
  double welch = 0.0;
};

// One row per (sampler, K): mean/std/best coherence over `restarts` draws
// (deterministic samplers contribute a single draw) plus the Welch bound.
std::vector<CoherenceBenchRow> coherence_benchmark(
    ModeKind kind, int n_max, const std::vector<int>& k_values,
    const std::vector<Sampler>& samplers, int restarts, std::uint64_t seed,
    const OptBudget& budget = {}, int jobs = 0);

void save_benchmark_csv(const std::vector<CoherenceBenchRow>& rows,
                        const std::string& path);

struct PhaseGridConfig {
  ModeKind kind = ModeKind::SphericalHarmonics;
  int n_max = 9;
  std::vector<double> k_over_l;  // in (0, 1]
  std::vector<double> s_over_k;  // in (0, 1]
  int trials = 50;
  Sampler sampler = Sampler::Random;
  std::uint64_t seed = 0;
  double rel_tol = 1e-4;
  OptBudget budget;
  int jobs = 0;

  nlohmann::json to_json() const;
};

struct PhaseGridResult {
  PhaseGridConfig config;
  std::vector<int> k_per_column;
  // success_rate(i, j): row i = s_over_k index, column j = k_over_l index.
  Eigen::MatrixXd success_rate;
  // Interpolated s/K of the 50% crossing per column; quiet NaN when the
  // column never reaches 50%.
  std::vector<double> contour50;
  int monotonicity_violations = 0;  // informational, see spec of the grid

  nlohmann::json to_json() const;
};

PhaseGridResult phase_transition(const PhaseGridConfig& config);

void save_phase_grid_csv(const PhaseGridResult& result, const std::string& path);
void save_contour_csv(const PhaseGridResult& result, const std::string& path);

// Synthetic spherical-mode coefficient vectors.
struct SyntheticSmc {
  enum class Model { ExactSparse, Compressible };

  Eigen::VectorXcd coeffs;
  Model model = Model::ExactSparse;
  int sparsity = 0;
  double decay_rate = 2.0;
  std::uint64_t seed = 0;

  // Exactly s nonzeros on a uniform random support, standard complex
  // Gaussian values.
  static SyntheticSmc exact_sparse(int length, int sparsity, std::uint64_t seed);
  // Magnitudes j^{-decay_rate} over a random permutation, random phases.
  static SyntheticSmc compressible(int length, double decay_rate,
                                   std::uint64_t seed);
};

// y = A x, noise free.
Eigen::VectorXcd synth_forward(ModeKind kind, int n_max,
                               const SamplingSet& samples,
                               const Eigen::VectorXcd& coeffs);

struct PatternCut {
  double phi_cut = 0.0;
  std::vector<double> theta_grid;
  std::vector<double> magnitude_db;  // peak-normalized, peak at 0 dB
};

// Evaluates the angular expansion of `coeffs` along the phi = phi_cut great
// circle (chi = 0) and returns the peak-normalized magnitude in dB.
PatternCut farfield_cut(const Eigen::VectorXcd& coeffs, ModeKind kind,
                        int n_max, double phi_cut,
                        const std::vector<double>& theta_grid);

// Max and mean |recon_db - truth_db| over grid points where the truth is
// above a -60 dB floor.
std::pair<double, double> farfield_error(const PatternCut& recon,
                                         const PatternCut& truth);

struct FarfieldRow {
  int k = 0;
  double max_db = 0.0;   // averaged over trials
  double mean_db = 0.0;  // averaged over trials
  double recovery_rel_error = 0.0;
  double success_rate = 0.0;
};

struct FarfieldReport {
  ModeKind kind = ModeKind::SnfMuPm1;
  int n_max = 0;
  std::vector<FarfieldRow> rows;
  // Cut of the last trial per K, for plotting: theta grid plus truth and
  // reconstruction in dB.
  std::vector<double> theta_grid;
  std::vector<std::vector<double>> truth_db;  // per K
  std::vector<std::vector<double>> recon_db;  // per K
  nlohmann::json config_echo;

  nlohmann::json to_json() const;
};

struct FarfieldConfig {
  int n_max = 8;
  std::vector<int> k_list;  // each <= 2 * mode_count(kind, N)
  Sampler sampler = Sampler::OptimizedGD;
  ModeKind kind = ModeKind::SnfMuPm1;
  SyntheticSmc::Model smc_model = SyntheticSmc::Model::ExactSparse;
  int sparsity = 20;
  double decay_rate = 2.0;
  int trials = 1;
  double phi_cut = 0.0;
  int theta_points = 181;
  std::uint64_t seed = 0;
  OptBudget budget;
  int jobs = 0;

  nlohmann::json to_json() const;
};

// End to end: synthetic truth -> forward acquisition at the sampler's
// points -> basis pursuit -> far-field cut against the truth cut.
FarfieldReport farfield_demo(const FarfieldConfig& config);

void save_farfield_errors_csv(const FarfieldReport& report,
                              const std::string& path);
void save_farfield_cut_csv(const FarfieldReport& report, int k_index,
                           const std::string& path);

}  // namespace snfcs
