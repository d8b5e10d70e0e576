"""Stacked quadratic reformulation of the fully connected analog design.

The analog matrices are vectorized (conjugated, column-major) and stacked
into one unit-modulus vector; the surrogate objective restricted to that
vector is 2 Re{f^H v} - f^H W f with W block diagonal over BSs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .association import Association
from .channel import ChannelSet
from .manifold import QuadraticObjective, RcgConfig, rcg_minimize
from .objective import BeamformerState


@dataclass(frozen=True)
class StackedAnalogProblem:
    v: np.ndarray        # (L*N_T*N_rf,)
    W: np.ndarray        # square, block diagonal over BSs
    L: int
    N_T: int
    N_rf: int

    def block(self, l: int):
        n = self.N_T * self.N_rf
        return slice(l * n, (l + 1) * n)


def vectorize_analog(F_RF: np.ndarray) -> np.ndarray:
    """Stack conj(vec(F_RF[l])) over BSs (column-major vec)."""
    L = F_RF.shape[0]
    return np.concatenate([np.conj(F_RF[l]).flatten(order="F") for l in range(L)])


def reconstruct_analog(f: np.ndarray, L: int, N_T: int, N_rf: int) -> np.ndarray:
    """Inverse of vectorize_analog."""
    n = N_T * N_rf
    F = np.empty((L, N_T, N_rf), dtype=complex)
    for l in range(L):
        F[l] = np.conj(f[l * n:(l + 1) * n]).reshape(N_T, N_rf, order="F")
    return F


def build_tl_Tl(l: int, state: BeamformerState, channels: ChannelSet,
                assoc: Association, weights: np.ndarray):
    """Per-BS linear and quadratic coefficients of the vectorized surrogate."""
    h = channels.h[l]                      # (K, N_T)
    fbb = state.f_BB[l]                    # (K, N_rf)
    alpha = assoc.alpha[l]
    w = np.asarray(weights)
    K, N_T = h.shape
    N_rf = fbb.shape[1]
    if state.F_RF.shape[1:] != (N_T, N_rf):
        raise ValueError("analog beamformer shape does not match channels")

    t = np.zeros(N_T * N_rf, dtype=complex)
    for k in range(K):
        if alpha[k] == 0:
            continue
        coef = np.sqrt(w[k] * (1.0 + state.rho[k])) * np.conj(state.xi[k])
        t += coef * np.kron(fbb[k], np.conj(h[k]))

    # kron factorization: sum_j alpha_j f_j f_j^H  (x)  sum_k w_k|xi_k|^2 h_k* h_k^T
    Fpart = np.einsum("j,jr,js->rs", alpha.astype(complex), fbb, np.conj(fbb))
    coefs = w * np.abs(state.xi) ** 2
    Hpart = np.einsum("k,kt,ks->ts", coefs.astype(complex), np.conj(h), h)
    T = np.kron(Fpart, Hpart)
    return t, T


def assemble_stacked(t_list, T_list, N_T: int, N_rf: int) -> StackedAnalogProblem:
    L = len(t_list)
    n = N_T * N_rf
    v = np.concatenate(t_list)
    W = np.zeros((L * n, L * n), dtype=complex)
    for l in range(L):
        W[l * n:(l + 1) * n, l * n:(l + 1) * n] = T_list[l]
    return StackedAnalogProblem(v=v, W=W, L=L, N_T=N_T, N_rf=N_rf)


def build_stacked_problem(state, channels, assoc, weights) -> StackedAnalogProblem:
    L, _, N_T = channels.h.shape
    N_rf = state.f_BB.shape[2]
    pairs = [build_tl_Tl(l, state, channels, assoc, weights) for l in range(L)]
    return assemble_stacked([p[0] for p in pairs], [p[1] for p in pairs], N_T, N_rf)


def surrogate_value(prob: StackedAnalogProblem, f: np.ndarray) -> float:
    """2 Re{f^H v} - f^H W f; the analog part of the FP objective."""
    return float(2.0 * np.real(np.vdot(f, prob.v)) - np.real(np.vdot(f, prob.W @ f)))


def solve_analog_fc(state: BeamformerState, channels: ChannelSet,
                    assoc: Association, weights: np.ndarray,
                    cfg: RcgConfig = RcgConfig(max_iters=50)) -> np.ndarray:
    """Maximize the analog surrogate with RCG, warm-started from the current
    analog matrices; returns the per-BS unit-modulus matrices."""
    L, _, N_T = channels.h.shape
    N_rf = state.f_BB.shape[2]
    prob = build_stacked_problem(state, channels, assoc, weights)
    f0 = vectorize_analog(state.F_RF)
    obj = QuadraticObjective(W=prob.W, v=prob.v)
    f_star = rcg_minimize(obj, f0, cfg)
    return reconstruct_analog(f_star, L, N_T, N_rf)
