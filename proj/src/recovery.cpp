// SPDX-License-Identifier: Apache-2.0

#include "snfcs/recovery.hpp"

#include <cmath>
#include <stdexcept>

namespace snfcs {

namespace {

using Complex = std::complex<double>;

// Complex soft threshold: v * max(1 - kappa / |v|, 0).
Eigen::VectorXcd shrink(const Eigen::VectorXcd& v, double kappa) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    out(i) = mag > kappa ? v(i) * ((mag - kappa) / mag) : Complex{0.0, 0.0};
  }
  return out;
}

}  // namespace

BpSolver::BpSolver(Eigen::MatrixXcd a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.cols() < 1)
    throw std::invalid_argument("BpSolver: empty matrix");
  wide_ = a_.rows() < a_.cols();
  if (wide_) {
    Eigen::MatrixXcd gram = a_ * a_.adjoint();
    // Tiny diagonal shift keeps rank-deficient row spaces solvable.
    const double jitter = 1e-12 * gram.diagonal().real().maxCoeff();
    gram.diagonal().array() += std::max(jitter, 1e-300);
    gram_ldlt_.compute(gram);
    if (gram_ldlt_.info() != Eigen::Success)
      throw std::runtime_error("BpSolver: factorization of A A^H failed");
  } else {
    qr_.compute(a_);
  }
}

RecoveryResult BpSolver::solve(const Eigen::VectorXcd& y,
                               const RecoveryOptions& options) const {
  if (y.size() != a_.rows())
    throw std::invalid_argument("BpSolver::solve: y length != matrix rows");
  const Eigen::Index l = a_.cols();

  RecoveryResult result;
  const double y_norm = y.norm();
  if (y_norm == 0.0) {
    result.x_hat = Eigen::VectorXcd::Zero(l);
    result.converged = true;
    return result;
  }

  if (!wide_) {
    // At most one feasible point: the least-squares solution.
    result.x_hat = qr_.solve(y);
    result.residual_norm = (a_ * result.x_hat - y).norm();
    result.l1_value = result.x_hat.cwiseAbs().sum();
    result.converged = result.residual_norm <= options.tol_primal * y_norm;
    return result;
  }

  // Scaled-form ADMM on min ||z||_1 s.t. z = x, A x = y, with x kept on the
  // affine set; solved on y / ||y|| so the shrink threshold is scale-free.
  const Eigen::VectorXcd yn = y / y_norm;
  const Eigen::VectorXcd feas = a_.adjoint() * gram_ldlt_.solve(yn);
  auto project = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    const Eigen::VectorXcd av = a_ * v;
    return v - a_.adjoint() * gram_ldlt_.solve(av) + feas;
  };

  Eigen::VectorXcd x = feas;
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(l);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(l);
  double rho = options.rho;

  int it = 0;
  bool converged = false;
  for (; it < options.max_iters; ++it) {
    x = project(z - u);
    const Eigen::VectorXcd z_prev = z;
    z = shrink(x + u, 1.0 / rho);
    u += x - z;

    const double r_primal = (x - z).norm();
    const double s_dual = rho * (z - z_prev).norm();
    const double scale = std::max({x.norm(), z.norm(), 1e-12});
    if (r_primal <= options.tol_primal * scale &&
        s_dual <= options.tol_dual * std::max(rho * u.norm(), 1e-12)) {
      converged = true;
      ++it;
      break;
    }
    if (r_primal > 10.0 * s_dual) {
      rho *= 2.0;
      u *= 0.5;
    } else if (s_dual > 10.0 * r_primal) {
      rho *= 0.5;
      u *= 2.0;
    }
  }

  result.x_hat = x * y_norm;
  result.residual_norm = (a_ * result.x_hat - y).norm();
  result.l1_value = result.x_hat.cwiseAbs().sum();
  result.iterations = it;
  result.converged = converged;
  return result;
}

RecoveryResult bp_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                        const RecoveryOptions& options) {
  return BpSolver(a).solve(y, options);
}

bool support_recovery_success(const Eigen::VectorXcd& x_hat,
                              const Eigen::VectorXcd& x_true, double rel_tol) {
  if (x_hat.size() != x_true.size())
    throw std::invalid_argument("support_recovery_success: length mismatch");
  const double truth_norm = x_true.norm();
  if (truth_norm == 0.0)
    throw std::invalid_argument("support_recovery_success: x_true is zero");
  return (x_hat - x_true).norm() / truth_norm < rel_tol;
}

}  // namespace snfcs
