"""Weighted sum-rate, the FP surrogate objective, and its auxiliary updates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .association import Association
from .channel import ChannelSet, Scenario


@dataclass
class BeamformerState:
    """Per-BS analog matrices, per-(BS,user) digital vectors, FP auxiliaries."""

    F_RF: np.ndarray   # (L, N_T, N_rf) complex
    f_BB: np.ndarray   # (L, K, N_rf) complex
    rho: np.ndarray    # (K,) real
    xi: np.ndarray     # (K,) complex
    beta: np.ndarray   # (L,) nonnegative multipliers

    @classmethod
    def zeros(cls, L, K, N_T, N_rf):
        return cls(
            F_RF=np.zeros((L, N_T, N_rf), dtype=complex),
            f_BB=np.zeros((L, K, N_rf), dtype=complex),
            rho=np.zeros(K),
            xi=np.zeros(K, dtype=complex),
            beta=np.zeros(L),
        )

    def copy(self):
        return BeamformerState(
            F_RF=self.F_RF.copy(), f_BB=self.f_BB.copy(),
            rho=self.rho.copy(), xi=self.xi.copy(), beta=self.beta.copy(),
        )


def effective_gains(state: BeamformerState, channels: ChannelSet,
                    assoc: Association) -> np.ndarray:
    """A[k, j] = sum_l alpha[l, j] h[l, k]^H F_RF[l] f_BB[l, j]."""
    # beams[l, j] = F_RF[l] @ f_BB[l, j]
    beams = np.einsum("ltr,ljr->ljt", state.F_RF, state.f_BB)
    g = np.einsum("lkt,ljt->lkj", np.conj(channels.h), beams)
    return np.einsum("lj,lkj->kj", assoc.alpha, g)


def _signal_and_denominator(state, channels, assoc, sigma2):
    A = effective_gains(state, channels, assoc)
    s = np.diag(A)                                   # desired coherent signal
    D = np.sum(np.abs(A) ** 2, axis=1) + np.asarray(sigma2)  # total rx power + noise
    return s, D


def sinr(k: int, state: BeamformerState, channels: ChannelSet,
         assoc: Association, sigma2: np.ndarray) -> float:
    s, D = _signal_and_denominator(state, channels, assoc, sigma2)
    sig = np.abs(s[k]) ** 2
    return float(sig / (D[k] - sig))


def sinr_all(state, channels, assoc, sigma2) -> np.ndarray:
    s, D = _signal_and_denominator(state, channels, assoc, sigma2)
    sig = np.abs(s) ** 2
    return sig / (D - sig)


def weighted_sum_rate(state: BeamformerState, channels: ChannelSet,
                      assoc: Association, weights: np.ndarray,
                      sigma2: np.ndarray) -> float:
    g = sinr_all(state, channels, assoc, sigma2)
    return float(np.sum(np.asarray(weights) * np.log2(1.0 + g)))


def fp_objective(state: BeamformerState, channels: ChannelSet,
                 assoc: Association, weights: np.ndarray,
                 sigma2: np.ndarray) -> float:
    """Surrogate objective: log term, linear rho penalty, signal cross term,
    and the quadratic term grouping total received power with the noise."""
    if np.any(state.rho < 0):
        raise ValueError("rho must be nonnegative")
    w = np.asarray(weights)
    s, D = _signal_and_denominator(state, channels, assoc, sigma2)
    t_log = np.sum(w * np.log2(1.0 + state.rho))
    t_rho = -np.sum(w * state.rho)
    t_sig = np.sum(2.0 * np.sqrt(w * (1.0 + state.rho))
                   * np.real(np.conj(state.xi) * s))
    t_quad = -np.sum(w * np.abs(state.xi) ** 2 * D)
    return float(t_log + t_rho + t_sig + t_quad)


def update_rho(state: BeamformerState, channels: ChannelSet,
               assoc: Association, sigma2: np.ndarray) -> np.ndarray:
    """Optimal rho equals the per-user SINR."""
    return sinr_all(state, channels, assoc, sigma2)


def update_xi(state: BeamformerState, channels: ChannelSet,
              assoc: Association, weights: np.ndarray,
              sigma2: np.ndarray) -> np.ndarray:
    """Optimal xi: scaled desired signal over total received power plus noise."""
    w = np.asarray(weights)
    s, D = _signal_and_denominator(state, channels, assoc, sigma2)
    return np.sqrt(w * (1.0 + state.rho)) * s / D


def per_bs_power(state: BeamformerState, assoc: Association) -> np.ndarray:
    """Transmit power sum_k alpha[l,k] ||F_RF[l] f_BB[l,k]||^2 per BS."""
    beams = np.einsum("ltr,lkr->lkt", state.F_RF, state.f_BB)
    p = np.sum(np.abs(beams) ** 2, axis=2)
    return np.sum(assoc.alpha * p, axis=1)
