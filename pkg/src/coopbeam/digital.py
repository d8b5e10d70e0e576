"""Closed-form digital beamformer with per-BS bisection on the power multiplier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .association import Association
from .channel import ChannelSet, Scenario
from .objective import BeamformerState

PINV_RCOND = 1e-12
POWER_TOL_REL = 1e-6
MAX_DOUBLINGS = 100
MAX_BISECT = 200


@dataclass
class DigitalSubproblem:
    """Per-BS quantities entering the closed-form update."""

    Gamma: np.ndarray    # (N_rf, N_rf) Hermitian PSD quadratic coefficient
    Fstar: np.ndarray    # (N_rf, N_rf) Gram matrix of the analog beamformer
    rhs: np.ndarray      # (K, N_rf) linear coefficients per user
    weights: np.ndarray  # (K,)


def build_subproblem(l: int, state: BeamformerState, channels: ChannelSet,
                     assoc: Association, weights: np.ndarray) -> DigitalSubproblem:
    F = state.F_RF[l]
    h = channels.h[l]                       # (K, N_T)
    w = np.asarray(weights)
    eff = np.conj(h) @ F                    # rows: (F^H h_k)^T conj -> F^H h_k = eff[k].conj()? no:
    # eff[k] = h_k^H F as a row; F^H h_k = conj(eff[k])
    fh = eff.conj()                         # (K, N_rf), row k = F^H h_k
    coefs = w * np.abs(state.xi) ** 2
    Gamma = np.einsum("k,kr,ks->rs", coefs.astype(complex), fh, np.conj(fh))
    Fstar = F.conj().T @ F
    rhs = (np.sqrt(w * (1.0 + state.rho)) * state.xi)[:, None] * fh
    return DigitalSubproblem(Gamma=Gamma, Fstar=Fstar, rhs=rhs, weights=w)


def fbb_closed_form(l: int, k: int, beta_l: float, sub: DigitalSubproblem,
                    assoc: Association) -> np.ndarray:
    """Stationary digital vector at the given multiplier; zero if unserved."""
    if assoc.alpha[l, k] == 0:
        return np.zeros(sub.Gamma.shape[0], dtype=complex)
    M = sub.weights[k] * (sub.Gamma + beta_l * sub.Fstar)
    return np.linalg.pinv(M, rcond=PINV_RCOND) @ sub.rhs[k]


def _power_of(fbb_rows: np.ndarray, Fstar: np.ndarray) -> float:
    return float(np.real(np.einsum("kr,rs,ks->", np.conj(fbb_rows), Fstar, fbb_rows)))


def bisect_beta(l: int, sub: DigitalSubproblem, assoc: Association,
                P_max: float):
    """Multiplier search enforcing the per-BS power budget.

    Returns (beta, f_BB rows for all K users of this BS).  beta = 0 when the
    unconstrained solution already fits the budget; otherwise the power curve,
    monotone decreasing in beta, is bisected to the budget.
    """
    if P_max <= 0:
        raise ValueError("P_max must be positive")
    served = np.flatnonzero(assoc.alpha[l])
    K, N_rf = sub.rhs.shape

    def solve_all(beta):
        rows = np.zeros((K, N_rf), dtype=complex)
        for k in served:
            rows[k] = fbb_closed_form(l, k, beta, sub, assoc)
        return rows

    rows0 = solve_all(0.0)
    if _power_of(rows0[served], sub.Fstar) <= P_max:
        return 0.0, rows0

    power_at = _make_power_curve(sub, served)

    hi = 1.0
    for _ in range(MAX_DOUBLINGS):
        if power_at(hi) <= P_max:
            break
        hi *= 2.0
    else:
        raise RuntimeError("bisection bracket expansion failed")
    lo = 0.0
    beta = hi
    for _ in range(MAX_BISECT):
        beta = 0.5 * (lo + hi)
        p = power_at(beta)
        # accept only from below so the budget is never exceeded
        if P_max * (1.0 - POWER_TOL_REL) <= p <= P_max:
            break
        if p > P_max:
            lo = beta
        else:
            hi = beta
    else:
        beta = hi
    return beta, solve_all(beta)


def _make_power_curve(sub: DigitalSubproblem, served):
    """Fast evaluation of the per-BS transmit power as a function of beta.

    Uses the generalized eigendecomposition Gamma v = lam Fstar v when the
    Gram matrix is well conditioned, falling back to direct solves.
    """
    Fstar = sub.Fstar
    evals = np.linalg.eigvalsh(Fstar)
    if evals[0] > 1e-10 * max(evals[-1], 1e-300):
        lam, V = scipy.linalg.eigh(sub.Gamma, Fstar)
        lam = np.maximum(lam, 0.0)
        # c[k] = V^H rhs_k / w_k ; power = sum_k sum_i |c_ki|^2 / (lam_i+beta)^2
        C = np.stack([V.conj().T @ (sub.rhs[k] / sub.weights[k]) for k in served])
        C2 = np.abs(C) ** 2

        def power_at(beta):
            return float(np.sum(C2 / (lam + beta)[None, :] ** 2))

        return power_at

    def power_at(beta):
        p = 0.0
        for k in served:
            M = sub.weights[k] * (sub.Gamma + beta * Fstar)
            f = np.linalg.pinv(M, rcond=PINV_RCOND) @ sub.rhs[k]
            p += float(np.real(np.vdot(f, Fstar @ f)))
        return p

    return power_at


def solve_digital(state: BeamformerState, channels: ChannelSet,
                  assoc: Association, weights: np.ndarray,
                  P_max: float):
    """Independent per-BS closed-form updates; returns (f_BB, beta)."""
    L, K, _ = channels.h.shape
    N_rf = state.F_RF.shape[2]
    f_BB = np.zeros((L, K, N_rf), dtype=complex)
    beta = np.zeros(L)
    for l in range(L):
        sub = build_subproblem(l, state, channels, assoc, weights)
        beta[l], f_BB[l] = bisect_beta(l, sub, assoc, P_max)
    return f_BB, beta
