// SPDX-License-Identifier: Apache-2.0

#include "snfcs/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace snfcs::specfun {

namespace {

constexpr double kDomainTol = 1e-12;

int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

double omega_sign(int mu, int m) {
  return mu >= m ? 1.0 : static_cast<double>(parity_sign(std::abs(mu - m)));
}

}  // namespace

WignerOrder::WignerOrder(int n_, int mu_, int m_) : n(n_), mu(mu_), m(m_) {
  if (n < 1) throw std::invalid_argument("WignerOrder: degree n must be >= 1");
  if (std::abs(mu) > n || std::abs(m) > n)
    throw std::invalid_argument("WignerOrder: orders must satisfy |mu|,|m| <= n");
}

int WignerOrder::xi() const { return std::abs(m - mu); }
int WignerOrder::lam() const { return std::abs(m + mu); }
int WignerOrder::alpha() const { return n - (xi() + lam()) / 2; }

double jacobi(int alpha, int xi, int lam, double x) {
  if (alpha < 0 || xi < 0 || lam < 0)
    throw std::domain_error("jacobi: parameters must be nonnegative");
  if (std::abs(x) > 1.0 + kDomainTol)
    throw std::domain_error("jacobi: |x| > 1, got " + std::to_string(x));

  if (alpha == 0) return 1.0;
  const double a = xi;
  const double b = lam;
  double pm1 = 1.0;
  double p = 0.5 * ((a - b) + (a + b + 2.0) * x);
  for (int j = 2; j <= alpha; ++j) {
    const double c = 2.0 * j + a + b;
    const double c1 = 2.0 * j * (j + a + b) * (c - 2.0);
    const double c2 = (c - 1.0) * (a * a - b * b);
    const double c3 = (c - 2.0) * (c - 1.0) * c;
    const double c4 = 2.0 * (j + a - 1.0) * (j + b - 1.0) * c;
    const double pnext = ((c2 + c3 * x) * p - c4 * pm1) / c1;
    pm1 = p;
    p = pnext;
  }
  return p;
}

double jacobi_deriv(int alpha, int xi, int lam, int k, double x) {
  if (k < 0) throw std::domain_error("jacobi_deriv: k must be nonnegative");
  if (k == 0) return jacobi(alpha, xi, lam, x);
  if (alpha < 0 || xi < 0 || lam < 0)
    throw std::domain_error("jacobi_deriv: parameters must be nonnegative");
  if (k > alpha) return 0.0;
  // Gamma(xi+lam+alpha+1+k) / (2^k Gamma(xi+lam+alpha+1)), via log-gamma.
  const double base = xi + lam + alpha + 1.0;
  const double scale =
      std::exp(std::lgamma(base + k) - std::lgamma(base) - k * std::numbers::ln2);
  return scale * jacobi(alpha - k, xi + k, lam + k, x);
}

double wigner_d(const WignerOrder& order, double theta) {
  const int xi = order.xi();
  const int lam = order.lam();
  const int alpha = order.alpha();
  const double log_gamma = std::lgamma(alpha + 1.0) +
                           std::lgamma(alpha + xi + lam + 1.0) -
                           std::lgamma(alpha + xi + 1.0) -
                           std::lgamma(alpha + lam + 1.0);
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  return omega_sign(order.mu, order.m) * std::exp(0.5 * log_gamma) *
         std::pow(s, xi) * std::pow(c, lam) *
         jacobi(alpha, xi, lam, std::cos(theta));
}

double wigner_d_dtheta(const WignerOrder& order, double theta) {
  constexpr double kEdge = 1e-7;
  theta = std::clamp(theta, kEdge, std::numbers::pi - kEdge);

  const int xi = order.xi();
  const int lam = order.lam();
  const int alpha = order.alpha();
  const double log_gamma = std::lgamma(alpha + 1.0) +
                           std::lgamma(alpha + xi + lam + 1.0) -
                           std::lgamma(alpha + xi + 1.0) -
                           std::lgamma(alpha + lam + 1.0);
  const double norm = omega_sign(order.mu, order.m) * std::exp(0.5 * log_gamma);
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  const double x = std::cos(theta);
  const double p = jacobi(alpha, xi, lam, x);

  // d/dtheta [ s^xi c^lam P(cos theta) ] expanded by the product rule; the
  // xi and lam terms are written with the half-angle powers factored so the
  // 1/(1 -+ cos theta) poles never appear.
  double value = 0.0;
  if (xi > 0) value += 0.5 * xi * std::pow(s, xi - 1) * std::pow(c, lam + 1) * p;
  if (lam > 0) value -= 0.5 * lam * std::pow(s, xi + 1) * std::pow(c, lam - 1) * p;
  value -= std::sin(theta) * std::pow(s, xi) * std::pow(c, lam) *
           jacobi_deriv(alpha, xi, lam, 1, x);
  return norm * value;
}

std::complex<double> wigner_D(const WignerOrder& order, double theta,
                              double phi, double chi) {
  const std::complex<double> phase =
      std::polar(1.0, order.m * phi) * std::polar(1.0, order.mu * chi);
  return phase * wigner_d(order, theta);
}

namespace {

// Fully normalized associated Legendre P~_n^m (m >= 0, no Condon-Shortley
// phase): integral over the sphere of |P~ e^{im phi}|^2 is 1.
double normalized_legendre(int n, int m, double x) {
  const double sine = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = std::sqrt(1.0 / (4.0 * std::numbers::pi));
  for (int k = 1; k <= m; ++k)
    pmm *= sine * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
  if (n == m) return pmm;
  double pm1 = pmm;
  double p = std::sqrt(2.0 * m + 3.0) * x * pmm;
  for (int k = m + 2; k <= n; ++k) {
    const double ak =
        std::sqrt((4.0 * k * k - 1.0) / (static_cast<double>(k) * k - m * m));
    const double akm1 = std::sqrt((4.0 * (k - 1.0) * (k - 1.0) - 1.0) /
                                  ((k - 1.0) * (k - 1.0) - m * m));
    const double pnext = ak * (x * p - pm1 / akm1);
    pm1 = p;
    p = pnext;
  }
  return p;
}

}  // namespace

std::complex<double> sph_harm(int n, int m, double theta, double phi) {
  if (n < 1) throw std::invalid_argument("sph_harm: degree n must be >= 1");
  if (std::abs(m) > n)
    throw std::invalid_argument("sph_harm: order must satisfy |m| <= n");
  const int ma = std::abs(m);
  const double plm = normalized_legendre(n, ma, std::cos(theta));
  const std::complex<double> value = plm * std::polar(1.0, ma * phi);
  if (m >= 0) return value;
  return static_cast<double>(parity_sign(ma)) * std::conj(value);
}

double sh_wigner_factor(int n, int m) {
  return parity_sign(std::abs(m)) *
         std::sqrt(4.0 * std::numbers::pi / (2.0 * n + 1.0));
}

}  // namespace snfcs::specfun
