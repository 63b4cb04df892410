// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the core operations: special functions, mode tables,
// samplers, sensing matrices and coherence, the two coherence optimizers,
// the proximal primitives and basis-pursuit recovery.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snfcs/harness.hpp"
#include "snfcs/modes.hpp"
#include "snfcs/optim.hpp"
#include "snfcs/recovery.hpp"
#include "snfcs/sampling.hpp"
#include "snfcs/sensing.hpp"
#include "snfcs/specfun.hpp"

namespace py = pybind11;
using namespace snfcs;

namespace {

ModeKind kind_arg(const std::string& kind) { return mode_kind_from_string(kind); }

SamplingSet make_sampling_set(std::vector<double> theta,
                              std::vector<double> phi,
                              std::vector<double> chi) {
  SamplingSet s;
  s.theta = std::move(theta);
  s.phi = std::move(phi);
  s.chi = std::move(chi);
  s.validate();
  return s;
}

py::dict run_to_dict(const OptimizerRun& run) {
  py::dict out;
  out["best_mu"] = run.best_mu;
  out["rho_trace"] = run.rho_trace;
  out["iterations_used"] = run.iterations_used;
  out["theta"] = run.best_angles.theta;
  out["phi"] = run.best_angles.phi;
  out["chi"] = run.best_angles.chi;
  if (!run.constraint_residual.empty())
    out["constraint_residual"] = run.constraint_residual;
  return out;
}

}  // namespace

PYBIND11_MODULE(_snfcs, m) {
  m.doc() = "Low-coherence sensing matrices from Wigner D-functions and "
            "spherical harmonics";

  py::class_<SamplingSet>(m, "SamplingSet")
      .def(py::init(&make_sampling_set), py::arg("theta"), py::arg("phi"),
           py::arg("chi"))
      .def_readonly("theta", &SamplingSet::theta)
      .def_readonly("phi", &SamplingSet::phi)
      .def_readonly("chi", &SamplingSet::chi)
      .def_property_readonly(
          "provenance",
          [](const SamplingSet& s) { return to_string(s.provenance); })
      .def("__len__", &SamplingSet::size);

  // Special functions.
  m.def("jacobi", &specfun::jacobi, py::arg("alpha"), py::arg("xi"),
        py::arg("lam"), py::arg("x"));
  m.def("jacobi_deriv", &specfun::jacobi_deriv, py::arg("alpha"),
        py::arg("xi"), py::arg("lam"), py::arg("k"), py::arg("x"));
  m.def(
      "wigner_d",
      [](int n, int mu, int mm, double theta) {
        return specfun::wigner_d(specfun::WignerOrder(n, mu, mm), theta);
      },
      py::arg("n"), py::arg("mu"), py::arg("m"), py::arg("theta"));
  m.def(
      "wigner_d_dtheta",
      [](int n, int mu, int mm, double theta) {
        return specfun::wigner_d_dtheta(specfun::WignerOrder(n, mu, mm), theta);
      },
      py::arg("n"), py::arg("mu"), py::arg("m"), py::arg("theta"));
  m.def(
      "wigner_D",
      [](int n, int mu, int mm, double theta, double phi, double chi) {
        return specfun::wigner_D(specfun::WignerOrder(n, mu, mm), theta, phi,
                                 chi);
      },
      py::arg("n"), py::arg("mu"), py::arg("m"), py::arg("theta"),
      py::arg("phi"), py::arg("chi"));
  m.def("sph_harm", &specfun::sph_harm, py::arg("n"), py::arg("m"),
        py::arg("theta"), py::arg("phi"));

  // Modes.
  m.def(
      "mode_count",
      [](const std::string& kind, int n_max) {
        return mode_count(kind_arg(kind), n_max);
      },
      py::arg("kind"), py::arg("n_max"));
  m.def(
      "mode_table",
      [](const std::string& kind, int n_max) {
        const ModeTable table(kind_arg(kind), n_max);
        std::vector<std::tuple<int, int, int, int>> out;
        out.reserve(static_cast<std::size_t>(table.size()));
        for (int q = 0; q < table.size(); ++q)
          out.emplace_back(table[q].n, table[q].m, table[q].mu, table[q].s);
        return out;
      },
      py::arg("kind"), py::arg("n_max"),
      "Canonically ordered (n, m, mu, s) tuples");
  m.def("truncation_degree", &truncation_degree, py::arg("wavenumber"),
        py::arg("r_min"), py::arg("n0") = 10);

  // Samplers.
  m.def("spiral", &spiral, py::arg("k"));
  m.def("hammersley", &hammersley, py::arg("k"));
  m.def("random_uniform", &random_uniform, py::arg("k"), py::arg("seed"));
  m.def("equiangular", &equiangular, py::arg("step_deg"));
  m.def(
      "apply_chi",
      [](const SamplingSet& s, const std::string& policy) {
        return apply_chi(s, chi_policy_from_string(policy));
      },
      py::arg("samples"), py::arg("policy"));
  m.def("duplicate_pairwise", &duplicate_pairwise, py::arg("samples"));

  // Sensing.
  m.def(
      "build_matrix",
      [](const std::string& kind, int n_max, const SamplingSet& samples) {
        return build_matrix(kind_arg(kind), n_max, samples).data;
      },
      py::arg("kind"), py::arg("n_max"), py::arg("samples"),
      "Complex K x L sensing matrix as a numpy array");
  m.def(
      "coherence",
      [](const std::string& kind, int n_max, const SamplingSet& samples) {
        const CoherenceReport rep =
            coherence(build_matrix(kind_arg(kind), n_max, samples));
        py::dict out;
        out["mu"] = rep.mu;
        out["argmax_q"] = rep.argmax_q;
        out["argmax_r"] = rep.argmax_r;
        out["welch"] = rep.welch;
        out["pair_count"] = rep.pair_count;
        return out;
      },
      py::arg("kind"), py::arg("n_max"), py::arg("samples"));
  m.def("welch_bound", &welch_bound, py::arg("k"), py::arg("l"));

  // Optimizers.
  m.def(
      "lp_objective",
      [](const SamplingSet& angles, const std::string& kind, int n_max,
         double p) { return lp_objective(angles, kind_arg(kind), n_max, p); },
      py::arg("angles"), py::arg("kind"), py::arg("n_max"), py::arg("p") = 6.0);
  m.def(
      "gd_optimize",
      [](const std::string& kind, int n_max, int k, double p, double eta,
         int iters, int restarts, std::uint64_t seed,
         const std::string& chi_policy, int jobs) {
        GdConfig cfg;
        cfg.kind = kind_arg(kind);
        cfg.n_max = n_max;
        cfg.k = k;
        cfg.p = p;
        cfg.eta = eta;
        cfg.iters = iters;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.jobs = jobs;
        if (chi_policy != "free") {
          cfg.chi_mode = ChiMode::FixedPolicy;
          cfg.chi_policy = chi_policy_from_string(chi_policy);
        }
        return run_to_dict(gd_optimize(cfg));
      },
      py::arg("kind"), py::arg("n_max"), py::arg("k"), py::arg("p") = 6.0,
      py::arg("eta") = 0.2, py::arg("iters") = 300, py::arg("restarts") = 5,
      py::arg("seed") = 0, py::arg("chi_policy") = "free", py::arg("jobs") = 0);
  m.def(
      "alm_optimize",
      [](const std::string& kind, int n_max, int k, double tau, double lam,
         double eta_inner, int iters, int inner_iters, int restarts,
         std::uint64_t seed, const std::string& chi_policy, int jobs) {
        AlmConfig cfg;
        cfg.kind = kind_arg(kind);
        cfg.n_max = n_max;
        cfg.k = k;
        cfg.tau = tau;
        cfg.lambda_reg = lam;
        cfg.eta_inner = eta_inner;
        cfg.iters = iters;
        cfg.inner_iters = inner_iters;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.jobs = jobs;
        if (chi_policy != "free") {
          cfg.chi_mode = ChiMode::FixedPolicy;
          cfg.chi_policy = chi_policy_from_string(chi_policy);
        }
        return run_to_dict(alm_optimize(cfg));
      },
      py::arg("kind"), py::arg("n_max"), py::arg("k"), py::arg("tau") = 1.0,
      py::arg("lambda_reg") = 0.1, py::arg("eta_inner") = 0.1,
      py::arg("iters") = 300, py::arg("inner_iters") = 5,
      py::arg("restarts") = 5, py::arg("seed") = 0,
      py::arg("chi_policy") = "free", py::arg("jobs") = 0);
  m.def("project_l1", &project_l1, py::arg("v"), py::arg("radius") = 1.0);
  m.def("prox_linf", &prox_linf, py::arg("v"), py::arg("scale"));

  // Recovery.
  m.def(
      "bp_solve",
      [](const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
         double tol_primal, double tol_dual, int max_iters) {
        RecoveryOptions options;
        options.tol_primal = tol_primal;
        options.tol_dual = tol_dual;
        options.max_iters = max_iters;
        const RecoveryResult res = bp_solve(a, y, options);
        py::dict out;
        out["x_hat"] = res.x_hat;
        out["residual_norm"] = res.residual_norm;
        out["l1_value"] = res.l1_value;
        out["iterations"] = res.iterations;
        out["converged"] = res.converged;
        return out;
      },
      py::arg("a"), py::arg("y"), py::arg("tol_primal") = 1e-6,
      py::arg("tol_dual") = 1e-6, py::arg("max_iters") = 2000);

  // Forward model and far-field comparison.
  m.def(
      "synth_forward",
      [](const std::string& kind, int n_max, const SamplingSet& samples,
         const Eigen::VectorXcd& coeffs) {
        return synth_forward(kind_arg(kind), n_max, samples, coeffs);
      },
      py::arg("kind"), py::arg("n_max"), py::arg("samples"), py::arg("coeffs"));
  m.def(
      "farfield_cut",
      [](const Eigen::VectorXcd& coeffs, const std::string& kind, int n_max,
         double phi_cut, const std::vector<double>& theta_grid) {
        const PatternCut cut =
            farfield_cut(coeffs, kind_arg(kind), n_max, phi_cut, theta_grid);
        py::dict out;
        out["phi_cut"] = cut.phi_cut;
        out["theta_grid"] = cut.theta_grid;
        out["magnitude_db"] = cut.magnitude_db;
        return out;
      },
      py::arg("coeffs"), py::arg("kind"), py::arg("n_max"), py::arg("phi_cut"),
      py::arg("theta_grid"));
}
