// SPDX-License-Identifier: Apache-2.0

#include "snfcs/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "snfcs/parallel.hpp"
#include "snfcs/rng.hpp"
#include "snfcs/sensing.hpp"

namespace snfcs {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxBacktracks = 20;

double wrap_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Canonical pair enumeration j <-> (q, r): q outer ascending from 1,
// r inner ascending from 0. g_j is oriented as g_{q, r}.
struct PairIndex {
  std::vector<int> q;
  std::vector<int> r;

  explicit PairIndex(int l) {
    const long count = static_cast<long>(l) * (l - 1) / 2;
    q.reserve(count);
    r.reserve(count);
    for (int qq = 1; qq < l; ++qq)
      for (int rr = 0; rr < qq; ++rr) {
        q.push_back(qq);
        r.push_back(rr);
      }
  }

  long size() const { return static_cast<long>(q.size()); }
};

struct PointEval {
  Eigen::MatrixXcd b;     // column-normalized basis values, K x L
  Eigen::MatrixXcd gram;  // b^H b; g_{qr} = conj(gram(q, r)) for r < q
  double mu = 0.0;
  double lp = 0.0;
};

PointEval eval_point(const ModeTable& table, const SamplingSet& angles,
                     double p) {
  PointEval out;
  out.b = normalize_columns(basis_values(table, angles));
  out.gram = out.b.adjoint() * out.b;
  const int l = table.size();
  double mu = 0.0;
  for (int q = 1; q < l; ++q)
    for (int r = 0; r < q; ++r) mu = std::max(mu, std::abs(out.gram(r, q)));
  out.mu = mu;
  if (p > 0.0) {
    // Scaled by the max term so the p-th powers never underflow.
    if (mu == 0.0) {
      out.lp = 0.0;
    } else {
      double sum = 0.0;
      for (int q = 1; q < l; ++q)
        for (int r = 0; r < q; ++r)
          sum += std::pow(std::abs(out.gram(r, q)) / mu, p);
      out.lp = mu * std::pow(sum, 1.0 / p);
    }
  }
  return out;
}

struct NormalizedDerivs {
  Eigen::MatrixXcd dtheta;
  Eigen::MatrixXcd dphi;
  Eigen::MatrixXcd dchi;
};

NormalizedDerivs eval_derivs(const ModeTable& table, const SamplingSet& angles) {
  BasisDerivatives raw = basis_derivatives(table, angles);
  NormalizedDerivs out{std::move(raw.dtheta), std::move(raw.dphi),
                       std::move(raw.dchi)};
  for (int q = 0; q < table.size(); ++q) {
    const double norm = raw.value.col(q).norm();
    if (norm <= 0.0) throw std::domain_error("zero-norm column");
    out.dtheta.col(q) /= norm;
    out.dphi.col(q) /= norm;
    out.dchi.col(q) /= norm;
  }
  return out;
}

// Gradient blocks of a pair-weighted functional. For a Hermitian weight
// matrix what (zero or real diagonal), each block is
//   grad(i) = Re sum_q Bblock(i, q) * conj((B * what)(i, q)).
AngleGradient weighted_angle_gradient(const Eigen::MatrixXcd& b,
                                      const NormalizedDerivs& derivs,
                                      const Eigen::MatrixXcd& what) {
  const Eigen::MatrixXcd e = (b * what).conjugate();
  AngleGradient grad;
  grad.dtheta = derivs.dtheta.cwiseProduct(e).rowwise().sum().real();
  grad.dphi = derivs.dphi.cwiseProduct(e).rowwise().sum().real();
  grad.dchi = derivs.dchi.cwiseProduct(e).rowwise().sum().real();
  return grad;
}

// Weight matrix of the l_p objective gradient: off-diagonal entries
// (|g_qr| / F)^(p-1) * phase(gram_qr), diagonal -sigma_q with
// sigma_q = sum_{r != q} (|g_qr| / F)^(p-1) |g_qr|.
Eigen::MatrixXcd lp_weight_matrix(const Eigen::MatrixXcd& gram, double lp,
                                  double p) {
  const int l = static_cast<int>(gram.cols());
  Eigen::MatrixXcd what = Eigen::MatrixXcd::Zero(l, l);
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(l);
  if (lp <= 0.0) return what;
  for (int q = 1; q < l; ++q) {
    for (int r = 0; r < q; ++r) {
      const double mag = std::abs(gram(r, q));
      if (mag <= 0.0) continue;
      const double w = std::pow(mag / lp, p - 1.0);
      const Complex phase = gram(q, r) / mag;
      what(q, r) = w * phase;
      what(r, q) = w * std::conj(phase);
      sigma(q) += w * mag;
      sigma(r) += w * mag;
    }
  }
  what.diagonal() -= sigma.cast<Complex>();
  return what;
}

SamplingSet random_init(int k, Rng& rng) {
  SamplingSet angles;
  angles.theta.resize(k);
  angles.phi.resize(k);
  angles.chi.resize(k);
  for (int i = 0; i < k; ++i) angles.theta[i] = rng.uniform(0.0, std::numbers::pi);
  for (int i = 0; i < k; ++i) angles.phi[i] = rng.uniform(0.0, kTwoPi);
  for (int i = 0; i < k; ++i) angles.chi[i] = rng.uniform(0.0, kTwoPi);
  return angles;
}

void apply_chi_mode(SamplingSet& angles, ChiMode mode, const ChiPolicy& policy) {
  if (mode == ChiMode::FixedPolicy) angles = apply_chi(std::move(angles), policy);
}

// Random inits can land every sample on a zero of some basis function;
// perturb and retry instead of failing the run.
PointEval eval_with_reinit(const ModeTable& table, SamplingSet& angles,
                           double p, Rng& rng, ChiMode chi_mode,
                           const ChiPolicy& policy) {
  for (int attempt = 0;; ++attempt) {
    try {
      return eval_point(table, angles, p);
    } catch (const std::domain_error&) {
      if (attempt >= 8) throw;
      for (double& t : angles.theta) t += rng.uniform(-1e-3, 1e-3);
      for (double& f : angles.phi) f += rng.uniform(-1e-3, 1e-3);
      if (chi_mode == ChiMode::Free)
        for (double& c : angles.chi) c += rng.uniform(-1e-3, 1e-3);
      angles = wrap_angles(std::move(angles));
      apply_chi_mode(angles, chi_mode, policy);
    }
  }
}

SamplingSet step_angles(const SamplingSet& angles, const AngleGradient& grad,
                        double step, bool move_chi) {
  SamplingSet cand = angles;
  for (int i = 0; i < cand.size(); ++i) {
    cand.theta[i] -= step * grad.dtheta(i);
    cand.phi[i] -= step * grad.dphi(i);
    if (move_chi) cand.chi[i] -= step * grad.dchi(i);
  }
  return wrap_angles(std::move(cand));
}

struct RestartResult {
  SamplingSet best_angles;
  std::vector<double> trace;
  std::vector<double> residual;
  double best_mu = 1.0;
};

RestartResult run_gd_restart(const GdConfig& cfg, const ModeTable& table,
                             std::uint64_t stream) {
  Rng rng(stream);
  SamplingSet angles = random_init(cfg.k, rng);
  apply_chi_mode(angles, cfg.chi_mode, cfg.chi_policy);
  PointEval cur =
      eval_with_reinit(table, angles, cfg.p, rng, cfg.chi_mode, cfg.chi_policy);

  const bool move_chi =
      cfg.chi_mode == ChiMode::Free && cfg.kind != ModeKind::SphericalHarmonics;
  RestartResult out;
  out.best_mu = cur.mu;
  out.best_angles = angles;
  out.trace.push_back(cur.mu);

  for (int it = 0; it < cfg.iters; ++it) {
    const NormalizedDerivs derivs = eval_derivs(table, angles);
    const AngleGradient grad = weighted_angle_gradient(
        cur.b, derivs, lp_weight_matrix(cur.gram, cur.lp, cfg.p));

    double step = cfg.eta;
    for (int bt = 0; bt <= kMaxBacktracks && step > 0.0; ++bt) {
      SamplingSet cand = step_angles(angles, grad, step, move_chi);
      try {
        PointEval ev = eval_point(table, cand, cfg.p);
        if (ev.lp <= cur.lp) {
          angles = std::move(cand);
          cur = std::move(ev);
          break;
        }
      } catch (const std::domain_error&) {
        // fall through to a smaller step
      }
      step *= 0.5;
    }
    if (cur.mu < out.best_mu) {
      out.best_mu = cur.mu;
      out.best_angles = angles;
    }
    out.trace.push_back(out.best_mu);
  }
  return out;
}

RestartResult run_alm_restart(const AlmConfig& cfg, const ModeTable& table,
                              std::uint64_t stream) {
  Rng rng(stream);
  SamplingSet angles = random_init(cfg.k, rng);
  apply_chi_mode(angles, cfg.chi_mode, cfg.chi_policy);
  PointEval cur =
      eval_with_reinit(table, angles, 0.0, rng, cfg.chi_mode, cfg.chi_policy);

  const bool move_chi =
      cfg.chi_mode == ChiMode::Free && cfg.kind != ModeKind::SphericalHarmonics;
  const PairIndex pairs(table.size());
  const long j = pairs.size();

  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(j);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(j);

  auto pair_corr = [&pairs, j](const Eigen::MatrixXcd& gram) {
    Eigen::VectorXcd g(j);
    for (long idx = 0; idx < j; ++idx)
      g(idx) = std::conj(gram(pairs.q[idx], pairs.r[idx]));
    return g;
  };
  auto coupling = [&cfg](const Eigen::VectorXcd& z_, const Eigen::VectorXcd& g_,
                         const Eigen::VectorXcd& u_) {
    return 0.5 * cfg.tau * (z_ - g_ + u_).squaredNorm();
  };

  RestartResult out;
  out.best_mu = cur.mu;
  out.best_angles = angles;
  out.trace.push_back(cur.mu);

  Eigen::VectorXcd g = pair_corr(cur.gram);
  for (int it = 0; it < cfg.iters; ++it) {
    // z update: one proximal gradient step on the augmented Lagrangian.
    const Eigen::VectorXcd zhat = z - cfg.eta_inner * cfg.tau * (z - g + u);
    z = prox_linf(zhat, cfg.lambda_reg * cfg.eta_inner);

    // Angle update: gradient steps on the quadratic coupling term.
    for (int inner = 0; inner < cfg.inner_iters; ++inner) {
      const Eigen::VectorXcd rho = z - g + u;
      Eigen::MatrixXcd what =
          Eigen::MatrixXcd::Zero(table.size(), table.size());
      Eigen::VectorXd kappa = Eigen::VectorXd::Zero(table.size());
      for (long idx = 0; idx < j; ++idx) {
        const int qq = pairs.q[idx];
        const int rr = pairs.r[idx];
        what(qq, rr) = std::conj(rho(idx));
        what(rr, qq) = rho(idx);
        const double c = (std::conj(rho(idx)) * g(idx)).real();
        kappa(qq) += c;
        kappa(rr) += c;
      }
      what.diagonal() -= kappa.cast<Complex>();

      const NormalizedDerivs derivs = eval_derivs(table, angles);
      AngleGradient grad = weighted_angle_gradient(cur.b, derivs, what);
      grad.dtheta *= -cfg.tau;
      grad.dphi *= -cfg.tau;
      grad.dchi *= -cfg.tau;

      const double f_cur = coupling(z, g, u);
      double step = cfg.eta_inner;
      for (int bt = 0; bt <= kMaxBacktracks && step > 0.0; ++bt) {
        SamplingSet cand = step_angles(angles, grad, step, move_chi);
        try {
          PointEval ev = eval_point(table, cand, 0.0);
          const Eigen::VectorXcd g_cand = pair_corr(ev.gram);
          if (coupling(z, g_cand, u) <= f_cur) {
            angles = std::move(cand);
            cur = std::move(ev);
            g = g_cand;
            break;
          }
        } catch (const std::domain_error&) {
        }
        step *= 0.5;
      }
    }

    // Dual ascent on the scaled multipliers.
    if (cfg.legacy_dual_update)
      u += cfg.tau * (z - g + u);
    else
      u += cfg.tau * (z - g);

    if (cur.mu < out.best_mu) {
      out.best_mu = cur.mu;
      out.best_angles = angles;
    }
    out.trace.push_back(out.best_mu);
    out.residual.push_back((z - g).cwiseAbs().sum());
  }
  return out;
}

template <typename Config, typename RunRestart>
OptimizerRun optimize_with_restarts(const Config& cfg, Provenance provenance,
                                    const RunRestart& run_restart) {
  if (cfg.k < 1) throw std::invalid_argument("optimizer: K must be >= 1");
  if (cfg.restarts < 1)
    throw std::invalid_argument("optimizer: restarts must be >= 1");
  if (cfg.iters < 1) throw std::invalid_argument("optimizer: iters must be >= 1");
  const ModeTable table(cfg.kind, cfg.n_max);
  if (cfg.chi_mode == ChiMode::FixedPolicy &&
      cfg.chi_policy.kind == ChiPolicy::Kind::AlternatePair && cfg.k % 2 != 0)
    throw std::invalid_argument("optimizer: AlternatePair chi needs even K");

  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.restarts));
  parallel_for(cfg.restarts, cfg.jobs, [&](int restart) {
    results[static_cast<std::size_t>(restart)] = run_restart(
        cfg, table, Rng::derive(cfg.seed, {0x6f, static_cast<std::uint64_t>(restart)}));
  });

  int best = 0;
  for (int i = 1; i < cfg.restarts; ++i)
    if (results[static_cast<std::size_t>(i)].best_mu <
        results[static_cast<std::size_t>(best)].best_mu)
      best = i;

  RestartResult& winner = results[static_cast<std::size_t>(best)];
  OptimizerRun run;
  run.best_angles = std::move(winner.best_angles);
  run.best_angles.provenance = provenance;
  run.rho_trace = std::move(winner.trace);
  run.best_mu = run.rho_trace.back();
  run.iterations_used = cfg.iters;
  run.constraint_residual = std::move(winner.residual);
  run.config_echo = cfg.to_json();
  return run;
}

}  // namespace

double lp_objective(const SamplingSet& angles, ModeKind kind, int n_max,
                    double p) {
  if (p < 2.0) throw std::invalid_argument("lp_objective: p must be >= 2");
  const ModeTable table(kind, n_max);
  return eval_point(table, angles, p).lp;
}

AngleGradient lp_gradient(const SamplingSet& angles, ModeKind kind, int n_max,
                          double p) {
  if (p < 2.0) throw std::invalid_argument("lp_gradient: p must be >= 2");
  const ModeTable table(kind, n_max);
  const PointEval cur = eval_point(table, angles, p);
  const NormalizedDerivs derivs = eval_derivs(table, angles);
  return weighted_angle_gradient(cur.b, derivs,
                                 lp_weight_matrix(cur.gram, cur.lp, p));
}

OptimizerRun gd_optimize(const GdConfig& config) {
  if (config.p < 2.0) throw std::invalid_argument("gd_optimize: p must be >= 2");
  if (!(config.eta >= 0.0))
    throw std::invalid_argument("gd_optimize: eta must be nonnegative");
  return optimize_with_restarts(config, Provenance::OptimizedGD, run_gd_restart);
}

OptimizerRun alm_optimize(const AlmConfig& config) {
  if (!(config.tau > 0.0) || !(config.lambda_reg > 0.0) ||
      !(config.eta_inner > 0.0))
    throw std::invalid_argument(
        "alm_optimize: tau, lambda_reg and eta_inner must be positive");
  return optimize_with_restarts(config, Provenance::OptimizedALM,
                                run_alm_restart);
}

Eigen::VectorXcd project_l1(const Eigen::VectorXcd& v, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_l1: radius <= 0");
  const Eigen::VectorXd mag = v.cwiseAbs();
  if (mag.sum() <= radius) return v;

  // Duchi et al. sorted-threshold rule on the magnitudes.
  std::vector<double> sorted(mag.data(), mag.data() + mag.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) threshold = candidate;
  }

  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = mag(i);
    out(i) = m > threshold ? v(i) * ((m - threshold) / m) : Complex{0.0, 0.0};
  }
  return out;
}

Eigen::VectorXcd prox_linf(const Eigen::VectorXcd& v, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("prox_linf: scale <= 0");
  return v - scale * project_l1(v / scale, 1.0);
}

SamplingSet wrap_angles(SamplingSet angles) {
  for (int i = 0; i < angles.size(); ++i) {
    double th = std::fmod(angles.theta[i], kTwoPi);
    if (th < 0.0) th += kTwoPi;
    if (th > std::numbers::pi) {
      th = kTwoPi - th;
      angles.phi[i] += std::numbers::pi;
    }
    angles.theta[i] = th;
    angles.phi[i] = wrap_2pi(angles.phi[i]);
    angles.chi[i] = wrap_2pi(angles.chi[i]);
  }
  return angles;
}

nlohmann::json GdConfig::to_json() const {
  return {{"algo", "gd"},
          {"kind", to_string(kind)},
          {"N", n_max},
          {"K", k},
          {"p", p},
          {"eta", eta},
          {"iters", iters},
          {"restarts", restarts},
          {"seed", seed},
          {"chi_mode", chi_mode == ChiMode::Free ? "free" : "fixed"},
          {"chi_policy", to_string(chi_policy)},
          {"jobs", jobs}};
}

nlohmann::json AlmConfig::to_json() const {
  return {{"algo", "alm"},
          {"kind", to_string(kind)},
          {"N", n_max},
          {"K", k},
          {"tau", tau},
          {"lambda_reg", lambda_reg},
          {"eta_inner", eta_inner},
          {"iters", iters},
          {"inner_iters", inner_iters},
          {"restarts", restarts},
          {"seed", seed},
          {"chi_mode", chi_mode == ChiMode::Free ? "free" : "fixed"},
          {"chi_policy", to_string(chi_policy)},
          {"legacy_dual_update", legacy_dual_update},
          {"jobs", jobs}};
}

nlohmann::json OptimizerRun::to_json() const {
  nlohmann::json j = {{"config", config_echo},
                      {"best_mu", best_mu},
                      {"iterations_used", iterations_used},
                      {"rho_trace", rho_trace},
                      {"angles",
                       {{"theta", best_angles.theta},
                        {"phi", best_angles.phi},
                        {"chi", best_angles.chi},
                        {"provenance", to_string(best_angles.provenance)}}}};
  if (!constraint_residual.empty())
    j["constraint_residual"] = constraint_residual;
  return j;
}

}  // namespace snfcs
