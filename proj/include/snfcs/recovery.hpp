// SPDX-License-Identifier: Apache-2.0
//
// Complex-valued basis pursuit: minimize ||x||_1 subject to A x = y, solved
// with an alternating-direction scheme whose equality subproblem reuses a
// cached factorization across solves that share the matrix.
#pragma once

#include <Eigen/Dense>

namespace snfcs {

struct RecoveryOptions {
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  int max_iters = 2000;
  double rho = 1.0;  // penalty, rebalanced x2 / /2 on residual imbalance
};

struct RecoveryResult {
  Eigen::VectorXcd x_hat;
  double residual_norm = 0.0;  // ||A x_hat - y||_2, recomputed from x_hat
  double l1_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Holds A and the factorization of A A^H (wide case) or the least-squares
// decomposition (K >= L). Immutable after construction; safe to share
// across threads running independent solves.
class BpSolver {
 public:
  explicit BpSolver(Eigen::MatrixXcd a);

  RecoveryResult solve(const Eigen::VectorXcd& y,
                       const RecoveryOptions& options = {}) const;

  const Eigen::MatrixXcd& matrix() const { return a_; }
  int rows() const { return static_cast<int>(a_.rows()); }
  int cols() const { return static_cast<int>(a_.cols()); }

 private:
  Eigen::MatrixXcd a_;
  bool wide_ = true;
  Eigen::LDLT<Eigen::MatrixXcd> gram_ldlt_;           // A A^H, K < L
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr_;   // K >= L
};

RecoveryResult bp_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                        const RecoveryOptions& options = {});

// True iff ||x_hat - x_true||_2 / ||x_true||_2 < rel_tol (strict).
// Throws std::invalid_argument on length mismatch or x_true = 0.
bool support_recovery_success(const Eigen::VectorXcd& x_hat,
                              const Eigen::VectorXcd& x_true, double rel_tol);

}  // namespace snfcs
