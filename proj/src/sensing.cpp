// SPDX-License-Identifier: Apache-2.0

#include "snfcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "snfcs/specfun.hpp"

namespace snfcs {

namespace {

using specfun::WignerOrder;
using Complex = std::complex<double>;

constexpr Complex kI{0.0, 1.0};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fills one row (sample) of the value matrix, and of the derivative
// matrices when requested.
void fill_row(const ModeTable& table, double theta, double phi, double chi,
              int row, Eigen::MatrixXcd& value, Eigen::MatrixXcd* dtheta,
              Eigen::MatrixXcd* dphi, Eigen::MatrixXcd* dchi) {
  const int l = table.size();
  for (int q = 0; q < l; ++q) {
    const ModeEntry& e = table[q];
    Complex val;
    Complex dth;
    switch (table.kind()) {
      case ModeKind::WignerGeneral: {
        const WignerOrder order(e.n, e.mu, e.m);
        const Complex phase =
            std::polar(1.0, e.m * phi) * std::polar(1.0, e.mu * chi);
        val = phase * specfun::wigner_d(order, theta);
        if (dtheta) dth = phase * specfun::wigner_d_dtheta(order, theta);
        if (dchi)
          (*dchi)(row, q) = kI * static_cast<double>(e.mu) * val;
        break;
      }
      case ModeKind::SphericalHarmonics: {
        val = specfun::sph_harm(e.n, e.m, theta, phi);
        if (dtheta) {
          const WignerOrder order(e.n, 0, e.m);
          dth = std::polar(1.0, e.m * phi) *
                (specfun::wigner_d_dtheta(order, theta) /
                 specfun::sh_wigner_factor(e.n, e.m));
        }
        if (dchi) (*dchi)(row, q) = Complex{0.0, 0.0};
        break;
      }
      case ModeKind::SnfMuPm1: {
        const WignerOrder plus(e.n, 1, e.m);
        const WignerOrder minus(e.n, -1, e.m);
        const Complex phim = std::polar(1.0, e.m * phi);
        const Complex echi = std::polar(1.0, chi);
        const Complex dplus = specfun::wigner_d(plus, theta) * echi;
        const Complex dminus = specfun::wigner_d(minus, theta) * std::conj(echi);
        const double sign = e.s == 1 ? 1.0 : -1.0;
        val = phim * (dplus + sign * dminus);
        if (dtheta)
          dth = phim * (specfun::wigner_d_dtheta(plus, theta) * echi +
                        sign * specfun::wigner_d_dtheta(minus, theta) *
                            std::conj(echi));
        if (dchi) (*dchi)(row, q) = phim * kI * (dplus - sign * dminus);
        break;
      }
    }
    value(row, q) = val;
    if (dtheta) (*dtheta)(row, q) = dth;
    if (dphi) (*dphi)(row, q) = kI * static_cast<double>(e.m) * val;
  }
}

}  // namespace

Eigen::MatrixXcd basis_values(const ModeTable& table, const SamplingSet& samples) {
  samples.validate();
  const int k = samples.size();
  Eigen::MatrixXcd value(k, table.size());
  for (int i = 0; i < k; ++i)
    fill_row(table, samples.theta[i], samples.phi[i], samples.chi[i], i, value,
             nullptr, nullptr, nullptr);
  return value;
}

BasisDerivatives basis_derivatives(const ModeTable& table,
                                   const SamplingSet& samples) {
  samples.validate();
  const int k = samples.size();
  const int l = table.size();
  BasisDerivatives out{Eigen::MatrixXcd(k, l), Eigen::MatrixXcd(k, l),
                       Eigen::MatrixXcd(k, l), Eigen::MatrixXcd(k, l)};
  for (int i = 0; i < k; ++i)
    fill_row(table, samples.theta[i], samples.phi[i], samples.chi[i], i,
             out.value, &out.dtheta, &out.dphi, &out.dchi);
  return out;
}

SensingMatrix build_matrix(ModeKind kind, int n_max, const SamplingSet& samples) {
  const ModeTable table(kind, n_max);
  SensingMatrix out;
  out.kind = kind;
  out.n_max = n_max;
  out.data = basis_values(table, samples);
  out.column_norms = out.data.colwise().norm();
  return out;
}

std::complex<double> column_pair_corr(const SensingMatrix& matrix, int q, int r) {
  if (!(0 <= r && r < q && q < matrix.cols()))
    throw std::invalid_argument("column_pair_corr: need 0 <= r < q < L");
  const double nq = matrix.column_norms(q);
  const double nr = matrix.column_norms(r);
  if (nq <= 0.0 || nr <= 0.0)
    throw std::domain_error("column_pair_corr: zero-norm column");
  // <a_q, a_r> = sum_i A_iq conj(A_ir)
  const Complex inner = matrix.data.col(r).dot(matrix.data.col(q));
  return inner / (nq * nr);
}

Eigen::MatrixXcd normalize_columns(const Eigen::MatrixXcd& a) {
  Eigen::MatrixXcd out = a;
  for (int q = 0; q < a.cols(); ++q) {
    const double norm = a.col(q).norm();
    if (norm <= 0.0)
      throw std::domain_error("normalize_columns: zero-norm column " +
                              std::to_string(q));
    out.col(q) /= norm;
  }
  return out;
}

CoherenceReport coherence(const SensingMatrix& matrix) {
  const int l = matrix.cols();
  if (l < 2) throw std::invalid_argument("coherence: need at least 2 columns");
  const Eigen::MatrixXcd b = normalize_columns(matrix.data);
  const Eigen::MatrixXcd gram = b.adjoint() * b;
  CoherenceReport report;
  report.pair_count = static_cast<long>(l) * (l - 1) / 2;
  report.welch = welch_bound(matrix.rows(), l);
  report.mu = -1.0;
  report.argmax_q = 1;
  report.argmax_r = 0;
  for (int q = 1; q < l; ++q) {
    for (int r = 0; r < q; ++r) {
      const double val = std::abs(gram(r, q));
      if (val > report.mu) {
        report.mu = val;
        report.argmax_q = q;
        report.argmax_r = r;
      }
    }
  }
  return report;
}

double welch_bound(int k, int l) {
  if (l < 2) throw std::invalid_argument("welch_bound: L must be >= 2");
  if (k < 1) throw std::invalid_argument("welch_bound: K must be >= 1");
  if (k >= l) return 0.0;
  return std::sqrt(static_cast<double>(l - k) /
                   (static_cast<double>(k) * (l - 1)));
}

void save_matrix_csv(const Eigen::MatrixXcd& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int q = 0; q < a.cols(); ++q)
    out << (q ? "," : "") << "re_" << q << ",im_" << q;
  out << '\n';
  for (int i = 0; i < a.rows(); ++i) {
    for (int q = 0; q < a.cols(); ++q)
      out << (q ? "," : "") << g17(a(i, q).real()) << ',' << g17(a(i, q).imag());
    out << '\n';
  }
}

Eigen::MatrixXcd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("re_0,im_0", 0) != 0)
    throw std::runtime_error(path + ": expected matrix CSV header");
  const long cols = std::count(line.begin(), line.end(), ',') + 1;
  if (cols % 2 != 0) throw std::runtime_error(path + ": odd column count");
  std::vector<double> values;
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    long got = 0;
    while (std::getline(row, field, ',')) {
      values.push_back(std::stod(field));
      ++got;
    }
    if (got != cols) throw std::runtime_error(path + ": ragged row");
    ++rows;
  }
  Eigen::MatrixXcd a(rows, cols / 2);
  for (long i = 0; i < rows; ++i)
    for (long q = 0; q < cols / 2; ++q)
      a(i, q) = Complex(values[static_cast<std::size_t>(i * cols + 2 * q)],
                        values[static_cast<std::size_t>(i * cols + 2 * q + 1)]);
  return a;
}

void save_matrix_json(const SensingMatrix& matrix, const std::string& path) {
  nlohmann::json data = nlohmann::json::array();
  for (int i = 0; i < matrix.rows(); ++i)
    for (int q = 0; q < matrix.cols(); ++q) {
      data.push_back(matrix.data(i, q).real());
      data.push_back(matrix.data(i, q).imag());
    }
  const nlohmann::json j = {{"kind", to_string(matrix.kind)},
                            {"N", matrix.n_max},
                            {"K", matrix.rows()},
                            {"L", matrix.cols()},
                            {"data", data}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << '\n';
}

SensingMatrix load_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  SensingMatrix out;
  out.kind = mode_kind_from_string(j.at("kind").get<std::string>());
  out.n_max = j.at("N").get<int>();
  const int k = j.at("K").get<int>();
  const int l = j.at("L").get<int>();
  const auto& data = j.at("data");
  if (static_cast<long>(data.size()) != 2L * k * l)
    throw std::runtime_error(path + ": data length mismatch");
  out.data.resize(k, l);
  for (int i = 0; i < k; ++i)
    for (int q = 0; q < l; ++q)
      out.data(i, q) =
          Complex(data[static_cast<std::size_t>(2 * (i * l + q))].get<double>(),
                  data[static_cast<std::size_t>(2 * (i * l + q) + 1)].get<double>());
  out.column_norms = out.data.colwise().norm();
  return out;
}

}  // namespace snfcs
