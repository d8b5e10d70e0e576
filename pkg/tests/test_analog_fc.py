"""Tests for the stacked fully connected analog design."""

import numpy as np
import pytest

from coopbeam.analog_fc import assemble_stacked, build_stacked_problem, \
    build_tl_Tl, reconstruct_analog, solve_analog_fc, surrogate_value, \
    vectorize_analog
from coopbeam.manifold import RcgConfig
from coopbeam.objective import fp_objective

from util import analog_surrogate_direct, random_case


def test_vectorize_round_trip():
    rng = np.random.default_rng(0)
    F = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(3, 4, 2)))
    np.testing.assert_array_equal(
        reconstruct_analog(vectorize_analog(F), 3, 4, 2), F)


def test_vectorize_column_major_layout():
    F = np.arange(6, dtype=complex).reshape(1, 3, 2) + 1j
    f = vectorize_analog(F)
    # column-major: first column of F, then second, conjugated
    np.testing.assert_array_equal(f[:3], np.conj(F[0, :, 0]))
    np.testing.assert_array_equal(f[3:], np.conj(F[0, :, 1]))


def test_build_tl_Tl_zero_xi():
    rng = np.random.default_rng(1)
    scn, channels, assoc, state = random_case(rng)
    state.xi[:] = 0.0
    t, T = build_tl_Tl(0, state, channels, assoc, scn.weights)
    np.testing.assert_array_equal(t, 0.0)
    np.testing.assert_array_equal(T, 0.0)


def test_build_tl_Tl_hermitian_psd():
    rng = np.random.default_rng(2)
    scn, channels, assoc, state = random_case(rng, L=2, K=3, N_T=4, N_rf=2)
    for l in range(scn.L):
        _, T = build_tl_Tl(l, state, channels, assoc, scn.weights)
        np.testing.assert_allclose(T, T.conj().T, atol=1e-12)
        assert np.min(np.linalg.eigvalsh(T)) > -1e-10


def test_assemble_single_block():
    t = [np.arange(4, dtype=complex)]
    T = [np.eye(4, dtype=complex)]
    prob = assemble_stacked(t, T, N_T=2, N_rf=2)
    np.testing.assert_array_equal(prob.v, t[0])
    np.testing.assert_array_equal(prob.W, T[0])


def test_assemble_block_diagonal():
    rng = np.random.default_rng(3)
    scn, channels, assoc, state = random_case(rng, L=3, K=4, N_T=4, N_rf=2)
    prob = build_stacked_problem(state, channels, assoc, scn.weights)
    n = scn.N_T * scn.N_RF
    for l in range(scn.L):
        for m in range(scn.L):
            block = prob.W[l * n:(l + 1) * n, m * n:(m + 1) * n]
            if l != m:
                np.testing.assert_array_equal(block, 0.0)


def test_vectorization_identity():
    # the stacked quadratic evaluates the analog part of the surrogate exactly
    rng = np.random.default_rng(4)
    for _ in range(20):
        scn, channels, assoc, state = random_case(rng, L=3, K=4, N_T=6, N_rf=2)
        prob = build_stacked_problem(state, channels, assoc, scn.weights)
        f = np.exp(1j * rng.uniform(0, 2 * np.pi,
                                    size=scn.L * scn.N_T * scn.N_RF))
        trial = state.copy()
        trial.F_RF = reconstruct_analog(f, scn.L, scn.N_T, scn.N_RF)
        direct = analog_surrogate_direct(trial, channels, assoc, scn.weights)
        quad = surrogate_value(prob, f)
        assert quad == pytest.approx(direct, rel=1e-9, abs=1e-12)


def test_solve_zero_coefficients_keeps_input():
    rng = np.random.default_rng(5)
    scn, channels, assoc, state = random_case(rng)
    state.xi[:] = 0.0
    F = solve_analog_fc(state, channels, assoc, scn.weights)
    np.testing.assert_allclose(F, state.F_RF)


def test_solve_monotone_improvement():
    rng = np.random.default_rng(6)
    for _ in range(5):
        scn, channels, assoc, state = random_case(rng, L=2, K=3, N_T=6, N_rf=2)
        before = fp_objective(state, channels, assoc, scn.weights, scn.sigma2)
        state.F_RF = solve_analog_fc(state, channels, assoc, scn.weights,
                                     RcgConfig(max_iters=50))
        after = fp_objective(state, channels, assoc, scn.weights, scn.sigma2)
        assert after >= before - 1e-9
        assert np.max(np.abs(np.abs(state.F_RF) - 1.0)) < 1e-12
