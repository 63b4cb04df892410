// SPDX-License-Identifier: Apache-2.0

#include "snfcs/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <doctest.h>

#include "snfcs/recovery.hpp"
#include "snfcs/rng.hpp"
#include "snfcs/sensing.hpp"

using namespace snfcs;
using Complex = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> theta_grid(int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(i)] = kPi * i / (n - 1);
  return grid;
}
}  // namespace

TEST_CASE("make_samples: chi policies per kind") {
  const SamplingSet wig = make_samples(Sampler::Spiral, ModeKind::WignerGeneral,
                                       8, 2, 0);
  for (int i = 0; i < 8; ++i)
    CHECK(wig.chi[i] == doctest::Approx(2 * kPi * i / 8));

  const SamplingSet snf =
      make_samples(Sampler::Hammersley, ModeKind::SnfMuPm1, 10, 2, 0);
  REQUIRE(snf.size() == 10);
  for (int i = 0; i < 10; i += 2) {
    CHECK(snf.theta[i] == snf.theta[i + 1]);
    CHECK(snf.chi[i] == doctest::Approx(0.0));
    CHECK(snf.chi[i + 1] == doctest::Approx(kPi / 2));
  }

  const SamplingSet odd =
      make_samples(Sampler::Spiral, ModeKind::SnfMuPm1, 9, 2, 0);
  CHECK(odd.size() == 9);
}

TEST_CASE("synth_forward: linearity and single-mode columns") {
  const SamplingSet samples = random_uniform(7, 4);
  const int n_max = 2;
  const int l = static_cast<int>(mode_count(ModeKind::SnfMuPm1, n_max));
  const Eigen::VectorXcd zero =
      synth_forward(ModeKind::SnfMuPm1, n_max, samples,
                    Eigen::VectorXcd::Zero(l));
  CHECK(zero.norm() == 0.0);

  Eigen::VectorXcd single = Eigen::VectorXcd::Zero(l);
  single(5) = Complex(2.0, -1.0);
  const SensingMatrix m = build_matrix(ModeKind::SnfMuPm1, n_max, samples);
  const Eigen::VectorXcd y = synth_forward(ModeKind::SnfMuPm1, n_max, samples,
                                           single);
  CHECK((y - Complex(2.0, -1.0) * m.data.col(5)).norm() < 1e-13);

  Rng rng(5);
  Eigen::VectorXcd a(l);
  Eigen::VectorXcd b(l);
  for (int i = 0; i < l; ++i) {
    a(i) = rng.normal_complex();
    b(i) = rng.normal_complex();
  }
  const Eigen::VectorXcd lhs =
      synth_forward(ModeKind::SnfMuPm1, n_max, samples, a + b);
  const Eigen::VectorXcd rhs =
      synth_forward(ModeKind::SnfMuPm1, n_max, samples, a) +
      synth_forward(ModeKind::SnfMuPm1, n_max, samples, b);
  CHECK((lhs - rhs).norm() < 1e-12);

  CHECK_THROWS_AS(
      synth_forward(ModeKind::SnfMuPm1, n_max, samples,
                    Eigen::VectorXcd::Zero(l + 1)),
      std::invalid_argument);
}

TEST_CASE("farfield_cut: shape, normalization, scale invariance") {
  const auto grid = theta_grid(181);
  const int l = static_cast<int>(mode_count(ModeKind::SphericalHarmonics, 1));
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(l);
  coeffs(1) = Complex(1.0, 0.0);  // the (n=1, m=0) mode, proportional to cos
  const PatternCut cut =
      farfield_cut(coeffs, ModeKind::SphericalHarmonics, 1, 0.0, grid);
  CHECK(cut.magnitude_db[0] == doctest::Approx(0.0));   // peak at theta = 0
  CHECK(cut.magnitude_db[180] == doctest::Approx(0.0)); // and theta = pi
  // |cos| at 60 degrees is 0.5: -6.02 dB.
  CHECK(cut.magnitude_db[60] ==
        doctest::Approx(20.0 * std::log10(0.5)).epsilon(1e-9));

  const PatternCut doubled =
      farfield_cut(2.0 * coeffs, ModeKind::SphericalHarmonics, 1, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(doubled.magnitude_db[i] ==
          doctest::Approx(cut.magnitude_db[i]).epsilon(1e-12));

  CHECK_THROWS_AS(farfield_cut(coeffs, ModeKind::SphericalHarmonics, 1, 0.0, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(farfield_cut(Eigen::VectorXcd::Zero(l),
                               ModeKind::SphericalHarmonics, 1, 0.0, grid),
                  std::domain_error);
}

TEST_CASE("farfield_error: trivial cases") {
  PatternCut truth;
  truth.theta_grid = theta_grid(10);
  truth.magnitude_db.assign(10, -3.0);
  truth.magnitude_db[0] = 0.0;
  PatternCut same = truth;
  const auto [max0, mean0] = farfield_error(same, truth);
  CHECK(max0 == 0.0);
  CHECK(mean0 == 0.0);

  PatternCut shifted = truth;
  for (double& v : shifted.magnitude_db) v += 3.0;
  const auto [max3, mean3] = farfield_error(shifted, truth);
  CHECK(max3 == doctest::Approx(3.0));
  CHECK(mean3 == doctest::Approx(3.0));

  // Points below the -60 dB floor of the truth are ignored.
  PatternCut floored = truth;
  floored.magnitude_db[5] = -80.0;
  PatternCut recon = floored;
  recon.magnitude_db[5] = -20.0;
  const auto [maxf, meanf] = farfield_error(recon, floored);
  CHECK(maxf == 0.0);
  CHECK(meanf == 0.0);

  PatternCut other;
  other.theta_grid = theta_grid(12);
  other.magnitude_db.assign(12, 0.0);
  CHECK_THROWS_AS(farfield_error(other, truth), std::invalid_argument);
}

TEST_CASE("SyntheticSmc: models") {
  const SyntheticSmc sparse = SyntheticSmc::exact_sparse(50, 7, 3);
  int nonzeros = 0;
  for (int i = 0; i < 50; ++i)
    if (sparse.coeffs(i) != Complex{0.0, 0.0}) ++nonzeros;
  CHECK(nonzeros == 7);

  const SyntheticSmc comp = SyntheticSmc::compressible(50, 2.0, 3);
  Eigen::VectorXd mags = comp.coeffs.cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  CHECK(mags(0) == doctest::Approx(1.0));
  CHECK(mags(9) == doctest::Approx(std::pow(10.0, -2.0)));

  const SyntheticSmc again = SyntheticSmc::exact_sparse(50, 7, 3);
  CHECK((again.coeffs - sparse.coeffs).norm() == 0.0);
}

TEST_CASE("phase_transition: tiny grid properties and determinism") {
  PhaseGridConfig cfg;
  cfg.kind = ModeKind::SphericalHarmonics;
  cfg.n_max = 3;  // L = 15
  cfg.k_over_l = {0.2, 0.9};
  cfg.s_over_k = {0.1, 1.0};
  cfg.trials = 10;
  cfg.sampler = Sampler::Random;
  cfg.seed = 7;
  cfg.jobs = 2;

  const PhaseGridResult res = phase_transition(cfg);
  CHECK(res.k_per_column[0] == 3);
  CHECK(res.k_per_column[1] == 14);
  for (Eigen::Index i = 0; i < res.success_rate.rows(); ++i)
    for (Eigen::Index j = 0; j < res.success_rate.cols(); ++j) {
      CHECK(res.success_rate(i, j) >= 0.0);
      CHECK(res.success_rate(i, j) <= 1.0);
      // With 10 trials every rate is a multiple of 0.1.
      const double scaled = res.success_rate(i, j) * 10.0;
      CHECK(scaled == doctest::Approx(std::round(scaled)));
    }
  // One nonzero at K/L = 0.9 is essentially determined.
  CHECK(res.success_rate(0, 1) == doctest::Approx(1.0));
  // s = K at K/L = 0.2 is hopeless.
  CHECK(res.success_rate(1, 0) <= 0.2);

  const PhaseGridResult again = phase_transition(cfg);
  CHECK((again.success_rate - res.success_rate).norm() == 0.0);

  PhaseGridConfig serial = cfg;
  serial.jobs = 1;
  const PhaseGridResult ser = phase_transition(serial);
  CHECK((ser.success_rate - res.success_rate).norm() == 0.0);

  PhaseGridConfig bad = cfg;
  bad.k_over_l.clear();
  CHECK_THROWS_AS(phase_transition(bad), std::invalid_argument);
}

TEST_CASE("phase_transition: contour interpolation") {
  PhaseGridConfig cfg;
  cfg.kind = ModeKind::SphericalHarmonics;
  cfg.n_max = 3;
  cfg.k_over_l = {0.8};
  cfg.s_over_k = {0.05, 0.3, 0.6, 0.9};
  cfg.trials = 16;
  cfg.sampler = Sampler::Random;
  cfg.seed = 21;
  cfg.jobs = 2;
  const PhaseGridResult res = phase_transition(cfg);
  const double contour = res.contour50[0];
  if (!std::isnan(contour)) {
    CHECK(contour >= cfg.s_over_k.front());
    CHECK(contour <= cfg.s_over_k.back());
  }
}

TEST_CASE("coherence_benchmark: welch column and determinism of spiral") {
  const std::vector<CoherenceBenchRow> rows = coherence_benchmark(
      ModeKind::SphericalHarmonics, 3, {10, 14},
      {Sampler::Spiral, Sampler::Random}, 3, 5, {}, 2);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.best >= welch_bound(row.k, 15) - 1e-12);
    CHECK(row.welch == doctest::Approx(welch_bound(row.k, 15)));
    CHECK(row.mean >= row.best - 1e-15);
    if (row.sampler == "spiral") CHECK(row.stddev == 0.0);
  }

  const auto path =
      std::filesystem::temp_directory_path() / "snfcs_bench_test.csv";
  save_benchmark_csv(rows, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "sampler,k,mean,stddev,best,welch");
  int count = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++count;
  CHECK(count == 4);
  std::filesystem::remove(path);
}

TEST_CASE("farfield_demo: optimized points beat spiral at equal K") {
  FarfieldConfig cfg;
  cfg.n_max = 5;  // L = 70
  cfg.kind = ModeKind::SnfMuPm1;
  cfg.k_list = {42};
  cfg.sparsity = 14;
  cfg.trials = 10;
  cfg.seed = 11;
  cfg.jobs = 2;
  cfg.budget.iters = 150;
  cfg.budget.restarts = 3;

  cfg.sampler = Sampler::Spiral;
  const FarfieldReport spiral_rep = farfield_demo(cfg);
  cfg.sampler = Sampler::OptimizedGD;
  const FarfieldReport opt_rep = farfield_demo(cfg);
  CHECK(opt_rep.rows[0].mean_db <= spiral_rep.rows[0].mean_db);
  CHECK(opt_rep.rows[0].success_rate >= spiral_rep.rows[0].success_rate);
}

TEST_CASE("farfield_demo: oversampled acquisition reconstructs exactly") {
  FarfieldConfig cfg;
  cfg.n_max = 3;  // L = 30
  cfg.kind = ModeKind::SnfMuPm1;
  cfg.k_list = {60};  // 2L: determined
  cfg.sampler = Sampler::Spiral;
  cfg.sparsity = 5;
  cfg.seed = 13;
  cfg.trials = 1;
  cfg.theta_points = 61;
  const FarfieldReport report = farfield_demo(cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].max_db < 0.01);
  CHECK(report.rows[0].recovery_rel_error < 1e-8);

  FarfieldConfig bad = cfg;
  bad.k_list = {61};
  CHECK_THROWS_AS(farfield_demo(bad), std::invalid_argument);

  FarfieldConfig comp = cfg;
  comp.smc_model = SyntheticSmc::Model::Compressible;
  comp.decay_rate = 2.0;
  const FarfieldReport comp_rep = farfield_demo(comp);
  CHECK(std::isfinite(comp_rep.rows[0].mean_db));
  CHECK(comp_rep.rows[0].max_db < 0.01);  // determined system, exact solve
}
