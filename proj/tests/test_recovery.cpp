// SPDX-License-Identifier: Apache-2.0

#include "snfcs/recovery.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "snfcs/rng.hpp"

using namespace snfcs;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_gaussian(int k, int l, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd a(k, l);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < l; ++j) a(i, j) = rng.normal_complex();
  return a;
}

Eigen::VectorXcd sparse_vector(int l, int s, Rng& rng) {
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(l);
  for (int placed = 0; placed < s;) {
    const int idx = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(l)));
    if (x(idx) != Complex{0.0, 0.0}) continue;
    x(idx) = rng.normal_complex();
    ++placed;
  }
  return x;
}

Eigen::MatrixXcd dft_matrix(int k) {
  Eigen::MatrixXcd f(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      f(i, j) = std::polar(1.0 / std::sqrt(static_cast<double>(k)),
                           -2.0 * std::numbers::pi * i * j / k);
  return f;
}

}  // namespace

TEST_CASE("bp_solve: unitary system returns the adjoint solution") {
  const Eigen::MatrixXcd a = dft_matrix(8);
  Rng rng(1);
  Eigen::VectorXcd y(8);
  for (int i = 0; i < 8; ++i) y(i) = rng.normal_complex();
  const RecoveryResult res = bp_solve(a, y);
  CHECK(res.converged);
  CHECK((res.x_hat - a.adjoint() * y).norm() < 1e-8);
}

TEST_CASE("bp_solve: 1-sparse recovery against support enumeration") {
  const Eigen::MatrixXcd a = random_gaussian(4, 8, 17);
  Rng rng(18);
  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(8);
  x0(5) = rng.normal_complex();
  const Eigen::VectorXcd y = a * x0;

  // Oracle: the unique single column whose least-squares fit is exact.
  int oracle_support = -1;
  for (int j = 0; j < 8; ++j) {
    const Complex coeff = a.col(j).dot(y) / a.col(j).squaredNorm();
    if ((a.col(j) * coeff - y).norm() < 1e-9 * y.norm()) {
      CHECK(oracle_support == -1);
      oracle_support = j;
    }
  }
  REQUIRE(oracle_support == 5);

  RecoveryOptions tight;
  tight.tol_primal = tight.tol_dual = 1e-9;
  const RecoveryResult res = bp_solve(a, y, tight);
  CHECK(res.converged);
  CHECK((res.x_hat - x0).norm() < 1e-6 * x0.norm());
}

TEST_CASE("bp_solve: empirical exact recovery rate at s=3, K=20, L=40") {
  const Eigen::MatrixXcd a = random_gaussian(20, 40, 99);
  const BpSolver solver(a);
  int successes = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(1000 + trial);
    const Eigen::VectorXcd x0 = sparse_vector(40, 3, rng);
    const RecoveryResult res = solver.solve(a * x0);
    if (support_recovery_success(res.x_hat, x0, 1e-4)) ++successes;
  }
  CHECK(successes >= 95);
}

TEST_CASE("bp_solve: feasibility and l1 optimality sandwich") {
  const Eigen::MatrixXcd a = random_gaussian(12, 30, 5);
  Rng rng(6);
  const Eigen::VectorXcd x0 = sparse_vector(30, 3, rng);
  const Eigen::VectorXcd y = a * x0;
  RecoveryOptions tight;
  tight.tol_primal = tight.tol_dual = 1e-9;
  const RecoveryResult res = bp_solve(a, y, tight);
  CHECK(res.converged);
  CHECK(res.residual_norm <= 1e-6 * y.norm());
  // x0 is feasible, so the minimizer's l1 value cannot exceed it (up to tol).
  CHECK(res.l1_value <= x0.cwiseAbs().sum() * (1.0 + 1e-6));
  // Stored residual matches a recomputation from x_hat.
  CHECK(std::abs(res.residual_norm - (a * res.x_hat - y).norm()) < 1e-12);
}

TEST_CASE("bp_solve: scaling equivariance") {
  const Eigen::MatrixXcd a = random_gaussian(10, 24, 7);
  Rng rng(8);
  const Eigen::VectorXcd x0 = sparse_vector(24, 2, rng);
  const Eigen::VectorXcd y = a * x0;
  const Complex c{-2.5, 1.25};
  const RecoveryResult base = bp_solve(a, y);
  const RecoveryResult scaled = bp_solve(a, c * y);
  CHECK((scaled.x_hat - c * base.x_hat).norm() <
        1e-8 * std::max(1.0, base.x_hat.norm() * std::abs(c)));
}

TEST_CASE("bp_solve: edge cases") {
  const Eigen::MatrixXcd a = random_gaussian(5, 12, 9);
  const RecoveryResult zero = bp_solve(a, Eigen::VectorXcd::Zero(5));
  CHECK(zero.converged);
  CHECK(zero.x_hat.norm() == 0.0);
  CHECK(zero.iterations == 0);

  Eigen::VectorXcd bad(4);
  bad.setZero();
  CHECK_THROWS_AS(bp_solve(a, bad), std::invalid_argument);

  // Rank-deficient rows: duplicated measurement.
  Eigen::MatrixXcd dup = a;
  dup.row(4) = dup.row(3);
  Rng rng(10);
  const Eigen::VectorXcd x0 = sparse_vector(12, 2, rng);
  const RecoveryResult res = bp_solve(dup, dup * x0);
  CHECK(res.residual_norm < 1e-6 * (dup * x0).norm());
}

TEST_CASE("bp_solve: determinism") {
  const Eigen::MatrixXcd a = random_gaussian(10, 20, 11);
  Rng rng(12);
  const Eigen::VectorXcd x0 = sparse_vector(20, 3, rng);
  const Eigen::VectorXcd y = a * x0;
  const RecoveryResult r1 = bp_solve(a, y);
  const RecoveryResult r2 = bp_solve(a, y);
  CHECK(r1.iterations == r2.iterations);
  CHECK((r1.x_hat - r2.x_hat).norm() == 0.0);
}

TEST_CASE("bp_solve: overdetermined consistent system solves directly") {
  const Eigen::MatrixXcd a = random_gaussian(30, 10, 13);
  Rng rng(14);
  Eigen::VectorXcd x0(10);
  for (int i = 0; i < 10; ++i) x0(i) = rng.normal_complex();
  const RecoveryResult res = bp_solve(a, a * x0);
  CHECK(res.converged);
  CHECK((res.x_hat - x0).norm() < 1e-10 * x0.norm());
}

TEST_CASE("support_recovery_success: strict threshold semantics") {
  Eigen::VectorXcd t(2);
  t << Complex(1, 0), Complex(0, 1);
  CHECK(support_recovery_success(t, t, 1e-12));
  CHECK_FALSE(support_recovery_success(Eigen::VectorXcd::Zero(2), t, 0.5));
  // Error exactly rel_tol fails (strict comparison).
  Eigen::VectorXcd off = t;
  off(0) += Complex(0.1 * t.norm(), 0.0);
  const double rel = (off - t).norm() / t.norm();
  CHECK_FALSE(support_recovery_success(off, t, rel));
  CHECK(support_recovery_success(off, t, rel + 1e-12));
  CHECK_THROWS_AS(support_recovery_success(t, Eigen::VectorXcd::Zero(2), 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(support_recovery_success(t, Eigen::VectorXcd::Zero(3), 0.1),
                  std::invalid_argument);
}
