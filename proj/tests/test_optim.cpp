// SPDX-License-Identifier: Apache-2.0

#include "snfcs/optim.hpp"

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "snfcs/rng.hpp"
#include "snfcs/sensing.hpp"
#include "support/oracles.hpp"

using namespace snfcs;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Blockwise finite-difference check of lp_gradient.
void check_gradient_block(const SamplingSet& angles, ModeKind kind, int n_max,
                          double p) {
  const AngleGradient grad = lp_gradient(angles, kind, n_max, p);
  const double h = 1e-6;
  auto fd_block = [&](auto mutate) {
    Eigen::VectorXd fd(angles.size());
    for (int i = 0; i < angles.size(); ++i) {
      SamplingSet up = angles;
      SamplingSet down = angles;
      mutate(up, i, h);
      mutate(down, i, -h);
      fd(i) = (lp_objective(up, kind, n_max, p) -
               lp_objective(down, kind, n_max, p)) /
              (2.0 * h);
    }
    return fd;
  };
  const Eigen::VectorXd fd_theta = fd_block(
      [](SamplingSet& s, int i, double d) { s.theta[i] += d; });
  const Eigen::VectorXd fd_phi =
      fd_block([](SamplingSet& s, int i, double d) { s.phi[i] += d; });
  CHECK((grad.dtheta - fd_theta).norm() <= 1e-4 * std::max(1e-8, fd_theta.norm()));
  CHECK((grad.dphi - fd_phi).norm() <= 1e-4 * std::max(1e-8, fd_phi.norm()));
  if (kind != ModeKind::SphericalHarmonics) {
    const Eigen::VectorXd fd_chi =
        fd_block([](SamplingSet& s, int i, double d) { s.chi[i] += d; });
    CHECK((grad.dchi - fd_chi).norm() <= 1e-4 * std::max(1e-8, fd_chi.norm()));
  }
}

SamplingSet interior_random(int k, std::uint64_t seed) {
  SamplingSet s = random_uniform(k, seed);
  // Keep away from the poles so finite differences stay clean.
  for (double& t : s.theta) t = 0.2 + 0.6 * t;
  return s;
}

}  // namespace

TEST_CASE("lp_objective: sandwich between coherence and J^(1/p) coherence") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const SamplingSet s = random_uniform(10, 100 + trial);
    const double p = 4.0 + 2.0 * (trial % 3);
    const double obj = lp_objective(s, ModeKind::SphericalHarmonics, 3, p);
    const auto rep = coherence(build_matrix(ModeKind::SphericalHarmonics, 3, s));
    const double j_pairs = 15.0 * 14.0 / 2.0;
    CHECK(obj >= rep.mu - 1e-12);
    CHECK(obj <= std::pow(j_pairs, 1.0 / p) * rep.mu + 1e-12);
  }
}

TEST_CASE("lp_objective: p = 2 equals the Frobenius-style pair sum") {
  const SamplingSet s = random_uniform(8, 5);
  const SensingMatrix m = build_matrix(ModeKind::SphericalHarmonics, 2, s);
  double sum = 0.0;
  for (int q = 1; q < m.cols(); ++q)
    for (int r = 0; r < q; ++r) sum += std::norm(column_pair_corr(m, q, r));
  CHECK(lp_objective(s, ModeKind::SphericalHarmonics, 2, 2.0) ==
        doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
}

TEST_CASE("lp_objective: large p approaches the max term") {
  // One sample: every normalized column is a unit scalar, so every pair
  // correlation has magnitude 1 and the max term dominates.
  SamplingSet one;
  one.theta = {1.0};
  one.phi = {0.5};
  one.chi = {0.2};
  const double obj = lp_objective(one, ModeKind::SphericalHarmonics, 2, 200.0);
  const auto rep = coherence(build_matrix(ModeKind::SphericalHarmonics, 2, one));
  CHECK(rep.mu == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(obj == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(lp_objective(one, ModeKind::SphericalHarmonics, 2, 1.5),
                  std::invalid_argument);
}

TEST_CASE("lp_gradient: finite differences, SH and Wigner") {
  for (int trial = 0; trial < 5; ++trial) {
    check_gradient_block(interior_random(20, 40 + trial),
                         ModeKind::SphericalHarmonics, 4, 6.0);
    check_gradient_block(interior_random(8, 50 + trial),
                         ModeKind::WignerGeneral, 2, 6.0);
    check_gradient_block(interior_random(8, 60 + trial), ModeKind::SnfMuPm1, 2,
                         6.0);
  }
}

TEST_CASE("lp_gradient: chi gradient vanishes for spherical harmonics") {
  const SamplingSet s = interior_random(12, 9);
  const AngleGradient grad =
      lp_gradient(s, ModeKind::SphericalHarmonics, 4, 6.0);
  CHECK(grad.dchi.norm() == 0.0);
}

TEST_CASE("lp objective: global azimuth rotation invariance") {
  const SamplingSet s = interior_random(10, 12);
  for (ModeKind kind : {ModeKind::SphericalHarmonics, ModeKind::WignerGeneral}) {
    const int n_max = kind == ModeKind::WignerGeneral ? 2 : 4;
    const double base = lp_objective(s, kind, n_max, 6.0);
    SamplingSet shifted = s;
    for (double& f : shifted.phi) f = std::fmod(f + 1.234, 2 * kPi);
    CHECK(std::abs(lp_objective(shifted, kind, n_max, 6.0) - base) < 1e-10);
    const AngleGradient grad = lp_gradient(s, kind, n_max, 6.0);
    CHECK(std::abs(grad.dphi.sum()) < 1e-10);
  }
}

TEST_CASE("project_l1: anchors") {
  Eigen::VectorXcd v(2);
  v << Complex(3, 0), Complex(0, 0);
  const Eigen::VectorXcd p1 = project_l1(v, 1.0);
  CHECK(std::abs(p1(0) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(p1(1)) < 1e-14);

  v << Complex(1, 0), Complex(1, 0);
  const Eigen::VectorXcd p2 = project_l1(v, 1.0);
  CHECK(std::abs(p2(0) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(p2(1) - Complex(0.5, 0)) < 1e-14);

  v << Complex(0.25, 0.25), Complex(0, -0.3);
  CHECK((project_l1(v, 2.0) - v).norm() == 0.0);  // already feasible

  CHECK_THROWS_AS(project_l1(v, 0.0), std::invalid_argument);
}

TEST_CASE("project_l1: matches the bisection oracle, phases preserved") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd v(10);
    for (int i = 0; i < 10; ++i) v(i) = 2.0 * rng.normal_complex();
    const double radius = 0.3 + 2.0 * rng.next_double();
    const Eigen::VectorXcd fast = project_l1(v, radius);
    const Eigen::VectorXcd slow = testing::project_l1_bisect(v, radius);
    CHECK((fast - slow).norm() < 1e-10);
    for (int i = 0; i < 10; ++i)
      if (std::abs(fast(i)) > 1e-12)
        CHECK(std::abs(std::arg(fast(i)) - std::arg(v(i))) < 1e-12);
  }
}

TEST_CASE("prox_linf: anchors and the Moreau identity") {
  Eigen::VectorXcd v(2);
  v << Complex(0.4, 0), Complex(0.3, 0);
  CHECK(prox_linf(v, 1.0).norm() < 1e-14);  // ||v||_1 <= scale maps to 0

  v << Complex(3, 0), Complex(0, 0);
  const Eigen::VectorXcd p = prox_linf(v, 1.0);
  CHECK(std::abs(p(0) - Complex(2, 0)) < 1e-14);
  CHECK(std::abs(p(1)) < 1e-14);

  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd w(8);
    for (int i = 0; i < 8; ++i) w(i) = rng.normal_complex();
    const double scale = 0.2 + rng.next_double();
    const Eigen::VectorXcd recombined =
        prox_linf(w, scale) + scale * project_l1(w / scale, 1.0);
    CHECK((recombined - w).norm() < 1e-12);
  }
}

TEST_CASE("wrap_angles") {
  SamplingSet s;
  s.theta = {-0.1, 0.5, kPi + 0.2};
  s.phi = {0.3, 2 * kPi + 0.3, 1.0};
  s.chi = {0.1, 0.2, -0.5};
  const SamplingSet w = wrap_angles(s);
  CHECK(w.theta[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(w.phi[0] == doctest::Approx(0.3 + kPi).epsilon(1e-12));
  CHECK(w.theta[2] == doctest::Approx(kPi - 0.2).epsilon(1e-12));
  CHECK(w.phi[2] == doctest::Approx(1.0 + kPi).epsilon(1e-12));
  CHECK(w.phi[1] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(w.chi[2] == doctest::Approx(2 * kPi - 0.5).epsilon(1e-12));

  SamplingSet valid = random_uniform(20, 3);
  const SamplingSet same = wrap_angles(valid);
  CHECK(same.theta == valid.theta);
  CHECK(same.phi == valid.phi);
  CHECK(same.chi == valid.chi);
}

TEST_CASE("gd_optimize: zero step returns the initial coherence") {
  GdConfig cfg;
  cfg.kind = ModeKind::SphericalHarmonics;
  cfg.n_max = 3;
  cfg.k = 10;
  cfg.eta = 0.0;
  cfg.iters = 1;
  cfg.restarts = 1;
  cfg.seed = 5;
  const OptimizerRun run = gd_optimize(cfg);
  REQUIRE(run.rho_trace.size() == 2);
  CHECK(run.rho_trace[0] == run.rho_trace[1]);
  CHECK(run.best_mu == run.rho_trace[0]);
  const auto rep =
      coherence(build_matrix(cfg.kind, cfg.n_max, run.best_angles));
  CHECK(std::abs(rep.mu - run.best_mu) < 1e-12);
}

TEST_CASE("gd_optimize: trace properties, improvement, determinism") {
  GdConfig cfg;
  cfg.kind = ModeKind::SphericalHarmonics;
  cfg.n_max = 3;
  cfg.k = 12;
  cfg.eta = 0.3;
  cfg.iters = 40;
  cfg.restarts = 2;
  cfg.seed = 11;
  const OptimizerRun run = gd_optimize(cfg);
  for (std::size_t i = 1; i < run.rho_trace.size(); ++i)
    CHECK(run.rho_trace[i] <= run.rho_trace[i - 1]);
  CHECK(run.best_mu <= run.rho_trace.front());
  CHECK(run.best_mu == run.rho_trace.back());
  CHECK(run.best_mu < run.rho_trace.front());  // 40 steps should move
  const auto rep =
      coherence(build_matrix(cfg.kind, cfg.n_max, run.best_angles));
  CHECK(std::abs(rep.mu - run.best_mu) < 1e-12);

  const OptimizerRun again = gd_optimize(cfg);
  CHECK(again.best_mu == run.best_mu);
  CHECK(again.rho_trace == run.rho_trace);
  CHECK(again.best_angles.theta == run.best_angles.theta);
  CHECK(again.best_angles.phi == run.best_angles.phi);

  GdConfig parallel_cfg = cfg;
  parallel_cfg.jobs = 2;
  const OptimizerRun par = gd_optimize(parallel_cfg);
  CHECK(par.best_mu == run.best_mu);
  CHECK(par.best_angles.theta == run.best_angles.theta);
}

TEST_CASE("gd_optimize: frozen alternating chi stays frozen") {
  GdConfig cfg;
  cfg.kind = ModeKind::SnfMuPm1;
  cfg.n_max = 2;
  cfg.k = 10;
  cfg.eta = 0.2;
  cfg.iters = 15;
  cfg.restarts = 1;
  cfg.seed = 2;
  cfg.chi_mode = ChiMode::FixedPolicy;
  cfg.chi_policy = ChiPolicy::alternate_pair();
  const OptimizerRun run = gd_optimize(cfg);
  for (int i = 0; i < run.best_angles.size(); ++i)
    CHECK(run.best_angles.chi[i] ==
          doctest::Approx(i % 2 == 0 ? 0.0 : kPi / 2));
}

TEST_CASE("alm_optimize: trace, residual decrease fixture, determinism") {
  AlmConfig cfg;
  cfg.kind = ModeKind::SphericalHarmonics;
  cfg.n_max = 4;
  cfg.k = 20;
  cfg.tau = 1.0;
  cfg.iters = 200;
  cfg.restarts = 1;
  cfg.seed = 0;
  const OptimizerRun run = alm_optimize(cfg);
  for (std::size_t i = 1; i < run.rho_trace.size(); ++i)
    CHECK(run.rho_trace[i] <= run.rho_trace[i - 1]);
  CHECK(run.best_mu <= run.rho_trace.front());
  const auto rep =
      coherence(build_matrix(cfg.kind, cfg.n_max, run.best_angles));
  CHECK(std::abs(rep.mu - run.best_mu) < 1e-12);

  REQUIRE(run.constraint_residual.size() == 200);
  CHECK(run.constraint_residual.back() <=
        run.constraint_residual.front() / 10.0);

  const OptimizerRun again = alm_optimize(cfg);
  CHECK(again.best_mu == run.best_mu);
  CHECK(again.rho_trace == run.rho_trace);
}

TEST_CASE("alm_optimize: legacy dual update variant runs") {
  AlmConfig cfg;
  cfg.kind = ModeKind::SphericalHarmonics;
  cfg.n_max = 2;
  cfg.k = 6;
  cfg.iters = 20;
  cfg.restarts = 1;
  cfg.seed = 9;
  cfg.legacy_dual_update = true;
  const OptimizerRun run = alm_optimize(cfg);
  CHECK(run.best_mu <= run.rho_trace.front());
  CHECK(std::isfinite(run.best_mu));
}
