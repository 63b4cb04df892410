// SPDX-License-Identifier: Apache-2.0
//
// The two coherence minimizers: gradient descent on the l_p smoothing of
// the max-correlation objective, and the augmented-Lagrangian scheme with
// the l_inf proximal step, plus the l1-ball projection and l_inf proximal
// primitives they build on.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "snfcs/modes.hpp"
#include "snfcs/sampling.hpp"

namespace snfcs {

enum class ChiMode {
  Free,         // optimize chi together with theta and phi
  FixedPolicy,  // assign chi once at init per policy and never move it
};

struct GdConfig {
  ModeKind kind = ModeKind::SphericalHarmonics;
  int n_max = 1;
  int k = 1;
  double p = 6.0;     // smoothing exponent, >= 2
  double eta = 0.1;   // step size; halved up to 20 times on objective increase
  int iters = 300;
  int restarts = 5;
  std::uint64_t seed = 0;
  ChiMode chi_mode = ChiMode::Free;
  ChiPolicy chi_policy = ChiPolicy::free();
  int jobs = 1;  // concurrent restarts

  nlohmann::json to_json() const;
};

struct AlmConfig {
  ModeKind kind = ModeKind::SphericalHarmonics;
  int n_max = 1;
  int k = 1;
  double tau = 1.0;         // penalty / dual scaling
  double lambda_reg = 0.1;  // weight of the l_inf term in the z proximal
  double eta_inner = 0.1;   // step size for the z and angle updates
  int iters = 300;
  int inner_iters = 5;  // angle gradient steps per outer iteration
  int restarts = 5;
  std::uint64_t seed = 0;
  ChiMode chi_mode = ChiMode::Free;
  ChiPolicy chi_policy = ChiPolicy::free();
  // Dual update variants: the default accumulates tau * (z - g); the
  // alternate form adds the previous multiplier inside the parenthesis.
  bool legacy_dual_update = false;
  int jobs = 1;

  nlohmann::json to_json() const;
};

struct OptimizerRun {
  SamplingSet best_angles;
  std::vector<double> rho_trace;  // best-so-far coherence, entry 0 = init
  double best_mu = 1.0;
  int iterations_used = 0;
  // ALM only: constraint residual sum_j |z_j - g_j| per outer iteration.
  std::vector<double> constraint_residual;
  nlohmann::json config_echo;
  nlohmann::json to_json() const;
};

// Smoothed coherence (sum over pairs r < q of |g_qr|^p)^(1/p). At least the
// true coherence and at most J^(1/p) times it. Throws std::domain_error on
// a zero-norm column.
double lp_objective(const SamplingSet& angles, ModeKind kind, int n_max,
                    double p);

struct AngleGradient {
  Eigen::VectorXd dtheta;
  Eigen::VectorXd dphi;
  Eigen::VectorXd dchi;
};

// Analytic gradient of lp_objective with respect to every angle coordinate.
AngleGradient lp_gradient(const SamplingSet& angles, ModeKind kind, int n_max,
                          double p);

OptimizerRun gd_optimize(const GdConfig& config);
OptimizerRun alm_optimize(const AlmConfig& config);

// Euclidean projection onto the complex l1 ball of the given radius:
// phases preserved, magnitudes water-filled per the sorted-threshold rule.
Eigen::VectorXcd project_l1(const Eigen::VectorXcd& v, double radius);

// Proximal operator of scale * ||.||_inf at v, via the Moreau identity:
// v - scale * project_l1(v / scale, 1).
Eigen::VectorXcd prox_linf(const Eigen::VectorXcd& v, double scale);

// phi and chi wrapped into [0, 2 pi); theta reflected into [0, pi] with the
// matching phi shift of pi per reflection.
SamplingSet wrap_angles(SamplingSet angles);

}  // namespace snfcs
