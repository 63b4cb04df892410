// SPDX-License-Identifier: Apache-2.0
//
// Scalar special functions: Jacobi polynomials and derivatives, Wigner
// d- and D-functions, orthonormal spherical harmonics, and the analytic
// theta-derivative of the Wigner d-function.
//
// All functions are pure and thread-safe.
#pragma once

#include <complex>

namespace snfcs::specfun {

// Degree/order triple of a Wigner D-function. Degree n >= 1, |mu| <= n,
// |m| <= n. The derived exponents xi = |m - mu|, lam = |m + mu| and the
// Jacobi degree alpha = n - (xi + lam)/2 are nonnegative integers.
struct WignerOrder {
  int n;
  int mu;
  int m;

  WignerOrder(int n_, int mu_, int m_);

  int xi() const;
  int lam() const;
  int alpha() const;
};

// Jacobi polynomial P_alpha^{(xi,lam)}(x) for nonnegative integer weights,
// evaluated with the standard three-term recurrence in alpha.
// Throws std::domain_error for negative parameters or |x| > 1 + 1e-12.
double jacobi(int alpha, int xi, int lam, double x);

// k-th derivative d^k/dx^k P_alpha^{(xi,lam)}(x). Returns 0 for k > alpha.
double jacobi_deriv(int alpha, int xi, int lam, int k, double x);

// Wigner d-function d^n_{mu,m}(cos theta):
//   omega * sqrt(gamma) * sin^xi(theta/2) * cos^lam(theta/2)
//     * P_alpha^{(xi,lam)}(cos theta)
// with gamma = alpha!(alpha+xi+lam)! / ((alpha+xi)!(alpha+lam)!) computed
// in log space, and omega = 1 for mu >= m, (-1)^{mu-m} otherwise.
double wigner_d(const WignerOrder& order, double theta);

// Analytic d/dtheta of wigner_d. Theta is clamped to [1e-7, pi - 1e-7];
// the closed form is indeterminate at the poles and the optimizers never
// need exact endpoint gradients.
double wigner_d_dtheta(const WignerOrder& order, double theta);

// D^n_{mu,m}(theta, phi, chi) = e^{i m phi} d^n_{mu,m}(cos theta) e^{i mu chi}.
std::complex<double> wigner_D(const WignerOrder& order, double theta,
                              double phi, double chi);

// Orthonormal spherical harmonic Y_n^m(theta, phi) with azimuthal phase
// e^{i m phi} and no Condon-Shortley factor, so that
//   D^n_{0,m} = (-1)^m sqrt(4 pi / (2n+1)) Y_n^m.
std::complex<double> sph_harm(int n, int m, double theta, double phi);

// Scale factor in the mu = 0 reduction above: (-1)^m sqrt(4 pi / (2n+1)).
double sh_wigner_factor(int n, int m);

}  // namespace snfcs::specfun
