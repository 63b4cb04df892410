// SPDX-License-Identifier: Apache-2.0
//
// Construction of the three sensing-matrix families from a sampling set,
// mutual coherence and the Welch bound, and the basis-entry evaluation
// (values and angle derivatives) shared with the optimizers.
#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "snfcs/modes.hpp"
#include "snfcs/sampling.hpp"

namespace snfcs {

struct SensingMatrix {
  ModeKind kind = ModeKind::SphericalHarmonics;
  int n_max = 0;
  Eigen::MatrixXcd data;          // K x L
  Eigen::VectorXd column_norms;   // L

  int rows() const { return static_cast<int>(data.rows()); }
  int cols() const { return static_cast<int>(data.cols()); }
};

struct CoherenceReport {
  double mu = 0.0;
  int argmax_q = 0;  // column pair with r < q
  int argmax_r = 0;
  double welch = 0.0;
  long pair_count = 0;  // L(L-1)/2
};

// Entry values of all modes in `table` at every sample: K x L.
//   WignerGeneral      A_iq = D^{n}_{mu,m}(theta_i, phi_i, chi_i)
//   SphericalHarmonics A_iq = Y_n^m(theta_i, phi_i)
//   SnfMuPm1           A_iq = D^n_{1,m} + D^n_{-1,m}   (s = 1 block)
//                      A_iq = D^n_{1,m} - D^n_{-1,m}   (s = 2 block)
Eigen::MatrixXcd basis_values(const ModeTable& table, const SamplingSet& samples);

// Values together with the analytic derivatives with respect to each
// sample's theta, phi and chi. Entry (i, q) of each derivative matrix is
// the derivative with respect to the angle of sample i only.
struct BasisDerivatives {
  Eigen::MatrixXcd value;
  Eigen::MatrixXcd dtheta;
  Eigen::MatrixXcd dphi;
  Eigen::MatrixXcd dchi;
};
BasisDerivatives basis_derivatives(const ModeTable& table,
                                   const SamplingSet& samples);

SensingMatrix build_matrix(ModeKind kind, int n_max, const SamplingSet& samples);

// Normalized pair correlation <a_q, a_r> / (|a_q| |a_r|) with
// <a_q, a_r> = sum_i A_iq conj(A_ir). Requires 0 <= r < q < L.
// Throws std::domain_error on a zero-norm column.
std::complex<double> column_pair_corr(const SensingMatrix& matrix, int q, int r);

// Columns scaled to unit norm; throws std::domain_error on a zero norm.
Eigen::MatrixXcd normalize_columns(const Eigen::MatrixXcd& a);

// Maximum |column_pair_corr| over all pairs r < q, with the argmax pair.
// Ties resolve to the lexicographically smallest (q, r).
CoherenceReport coherence(const SensingMatrix& matrix);

// sqrt((L - K) / (K (L - 1))); 0 when K >= L. Requires K >= 1, L >= 2.
double welch_bound(int k, int l);

// CSV: header re_0,im_0,...,re_{L-1},im_{L-1}, one row per sample, 17
// significant digits. The CSV holds raw values only; the JSON format also
// carries kind/N/K/L metadata. Round-trips preserve values to 1e-15
// relative (bit-exactness is not promised).
void save_matrix_csv(const Eigen::MatrixXcd& a, const std::string& path);
Eigen::MatrixXcd load_matrix_csv(const std::string& path);
void save_matrix_json(const SensingMatrix& matrix, const std::string& path);
SensingMatrix load_matrix_json(const std::string& path);

}  // namespace snfcs
