# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python extension module."""

import math

import numpy as np
import pytest

import snfcs


def test_special_functions():
    assert snfcs.jacobi(1, 0, 0, 0.7) == pytest.approx(0.7)
    assert snfcs.wigner_d(1, 0, 0, math.pi / 3) == pytest.approx(0.5)
    val = snfcs.wigner_D(1, 0, 0, math.pi / 3, 0.1, 0.2)
    assert val == pytest.approx(0.5 + 0j)
    # mu = 0 reduction against the spherical harmonic.
    lhs = snfcs.wigner_D(3, 0, 2, 0.7, 1.3, 0.0)
    rhs = math.sqrt(4 * math.pi / 7) * snfcs.sph_harm(3, 2, 0.7, 1.3)
    assert lhs == pytest.approx(rhs)


def test_modes():
    assert snfcs.mode_count("wigner", 3) == 83
    assert snfcs.mode_count("sh", 9) == 99
    assert snfcs.mode_count("snf", 16) == 576
    table = snfcs.mode_table("sh", 1)
    assert table == [(1, -1, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0)]
    assert snfcs.truncation_degree(2 * math.pi / 0.125, 0.119) == 16


def test_matrix_and_coherence_against_numpy():
    pts = snfcs.random_uniform(12, seed=3)
    a = snfcs.build_matrix("sh", 3, pts)
    assert a.shape == (12, 15)
    b = a / np.linalg.norm(a, axis=0, keepdims=True)
    gram = np.abs(b.conj().T @ b)
    np.fill_diagonal(gram, 0.0)
    report = snfcs.coherence("sh", 3, pts)
    assert report["mu"] == pytest.approx(gram.max(), abs=1e-12)
    assert report["mu"] >= snfcs.welch_bound(12, 15) - 1e-12


def test_optimizer_improves_over_init():
    run = snfcs.gd_optimize("sh", 3, 12, iters=40, restarts=2, seed=1, jobs=1)
    trace = run["rho_trace"]
    assert run["best_mu"] == trace[-1] <= trace[0]
    assert all(b <= a + 1e-15 for a, b in zip(trace, trace[1:]))


def test_bp_recovery():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(10, 20)) + 1j * rng.normal(size=(10, 20))
    x0 = np.zeros(20, dtype=complex)
    x0[[3, 11]] = rng.normal(size=2) + 1j * rng.normal(size=2)
    res = snfcs.bp_solve(a, a @ x0, tol_primal=1e-9, tol_dual=1e-9)
    assert res["converged"]
    assert np.linalg.norm(res["x_hat"] - x0) < 1e-6 * np.linalg.norm(x0)


def test_prox_primitives():
    v = np.array([3.0 + 0j, 0.0 + 0j])
    assert np.allclose(snfcs.project_l1(v, 1.0), [1.0, 0.0])
    assert np.allclose(snfcs.prox_linf(v, 1.0), [2.0, 0.0])


def test_forward_and_cut():
    pts = snfcs.random_uniform(8, seed=5)
    coeffs = np.zeros(snfcs.mode_count("sh", 1), dtype=complex)
    coeffs[1] = 1.0  # (n=1, m=0)
    y = snfcs.synth_forward("sh", 1, pts, coeffs)
    a = snfcs.build_matrix("sh", 1, pts)
    assert np.allclose(y, a @ coeffs)
    grid = list(np.linspace(0.0, math.pi, 61))
    cut = snfcs.farfield_cut(coeffs, "sh", 1, 0.0, grid)
    assert cut["magnitude_db"][0] == pytest.approx(0.0)
