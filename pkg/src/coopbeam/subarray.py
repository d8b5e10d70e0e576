"""Analog beamforming for the fixed and dynamic subarray architectures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analog_fc import (build_stacked_problem, reconstruct_analog,
                        solve_analog_fc, vectorize_analog)
from .association import Association
from .channel import ChannelSet
from .manifold import QuadraticObjective, RcgConfig, rcg_minimize
from .objective import BeamformerState


# ---------------------------------------------------------------- fixed subarray

def fs_support_indices(N_T: int, N_rf: int) -> np.ndarray:
    """Column-major vec indices of the block-diagonal support (the selection
    matrix applied to vec(F)); chain r keeps antennas r*N_sub .. (r+1)*N_sub."""
    if N_T % N_rf != 0:
        raise ValueError(f"N_T={N_T} not divisible by N_RF={N_rf}")
    n_sub = N_T // N_rf
    idx = []
    for r in range(N_rf):
        base = r * N_T + r * n_sub
        idx.extend(range(base, base + n_sub))
    return np.array(idx, dtype=int)


def fs_mask(N_T: int, N_rf: int) -> np.ndarray:
    """Binary block-diagonal support pattern of the fixed subarray matrix."""
    n_sub = N_T // N_rf
    V = np.zeros((N_T, N_rf))
    for r in range(N_rf):
        V[r * n_sub:(r + 1) * n_sub, r] = 1.0
    return V


def reconstruct_fs(f_fs: np.ndarray, L: int, N_T: int, N_rf: int) -> np.ndarray:
    """Per-BS block-diagonal matrices from the stacked length-L*N_T solution."""
    n_sub = N_T // N_rf
    F = np.zeros((L, N_T, N_rf), dtype=complex)
    for l in range(L):
        g = np.conj(f_fs[l * N_T:(l + 1) * N_T])
        for r in range(N_rf):
            F[l, r * n_sub:(r + 1) * n_sub, r] = g[r * n_sub:(r + 1) * n_sub]
    return F


def _solve_restricted(state: BeamformerState, channels: ChannelSet,
                      assoc: Association, weights: np.ndarray,
                      sel_per_bs, warm_F: np.ndarray,
                      cfg: RcgConfig) -> np.ndarray:
    """Solve the stacked surrogate restricted to a single-connection support.

    sel_per_bs[l] holds the column-major vec indices of BS l's nonzero
    entries (one per antenna).  Entries off the support come out exactly zero.
    """
    L, _, N_T = channels.h.shape
    N_rf = state.f_BB.shape[2]
    prob = build_stacked_problem(state, channels, assoc, weights)
    n = N_T * N_rf
    v_r = np.concatenate([prob.v[l * n:(l + 1) * n][sel_per_bs[l]]
                          for l in range(L)])
    W_r = np.zeros((L * N_T, L * N_T), dtype=complex)
    for l in range(L):
        Tl = prob.W[l * n:(l + 1) * n, l * n:(l + 1) * n]
        W_r[l * N_T:(l + 1) * N_T, l * N_T:(l + 1) * N_T] = \
            Tl[np.ix_(sel_per_bs[l], sel_per_bs[l])]
    f0 = np.concatenate([
        vectorize_analog(warm_F[l:l + 1])[sel_per_bs[l]] for l in range(L)
    ])
    mod = np.abs(f0)
    f0 = np.where(mod > 1e-12, f0 / np.maximum(mod, 1e-300), 1.0 + 0j)
    f_star = rcg_minimize(QuadraticObjective(W=W_r, v=v_r), f0, cfg)
    F = np.zeros((L, N_T, N_rf), dtype=complex)
    for l in range(L):
        vec = np.zeros(n, dtype=complex)
        vec[sel_per_bs[l]] = np.conj(f_star[l * N_T:(l + 1) * N_T])
        F[l] = vec.reshape((N_T, N_rf), order="F")
    return F


def solve_analog_fs(state: BeamformerState, channels: ChannelSet,
                    assoc: Association, weights: np.ndarray,
                    cfg: RcgConfig = RcgConfig(max_iters=50)) -> np.ndarray:
    """Restrict the stacked surrogate to the block-diagonal support and solve."""
    L, _, N_T = channels.h.shape
    N_rf = state.f_BB.shape[2]
    sel = fs_support_indices(N_T, N_rf)
    return _solve_restricted(state, channels, assoc, weights,
                             [sel] * L, state.F_RF, cfg)


# --------------------------------------------------------------- dynamic subarray

@dataclass
class AntennaGrouping:
    """Per-BS partition of antennas into RF-chain clusters."""

    sets: list   # sets[l][q] = sorted list of antenna indices
    V: np.ndarray  # (L, N_T, N_rf) binary masks

    def validate(self):
        L, N_T, N_rf = self.V.shape
        for l in range(L):
            union = sorted(i for q in range(N_rf) for i in self.sets[l][q])
            if union != list(range(N_T)):
                raise ValueError("grouping is not a partition of the antennas")
            if any(len(self.sets[l][q]) == 0 for q in range(N_rf)):
                raise ValueError("grouping contains an empty cluster")
            if not np.all(self.V[l].sum(axis=1) == 1):
                raise ValueError("mask rows must have exactly one nonzero")
        return self


def correlation_within(R: np.ndarray, S) -> float:
    """Average absolute correlation inside one antenna set."""
    S = list(S)
    if not S:
        raise ValueError("antenna set must be nonempty")
    block = R[np.ix_(S, S)]
    return float(np.sum(np.abs(block)) / len(S))


def correlation_between(S_i, S_j, R: np.ndarray) -> float:
    """Average absolute correlation between two antenna sets."""
    S_i, S_j = list(S_i), list(S_j)
    if not S_i or not S_j:
        raise ValueError("antenna sets must be nonempty")
    block = R[np.ix_(S_i, S_j)]
    return float(np.sum(np.abs(block)) / (len(S_i) * len(S_j)))


def grouping_objective(R: np.ndarray, sets) -> float:
    return sum(correlation_within(R, S) for S in sets)


def _group_one_bs(R: np.ndarray, N_rf: int, max_iters: int,
                  rng: np.random.Generator):
    """Returns (partition, per-round objective trace); the trace is the
    accepted-objective sequence and is non-decreasing by construction."""
    N_T = R.shape[0]
    absR = np.abs(R)
    centroids = sorted(rng.choice(N_T, size=N_rf, replace=False).tolist())
    sets = None
    best_obj = -np.inf
    best_sets = None
    trace = []
    for _ in range(max_iters):
        new_sets = [[c] for c in centroids]
        for i in range(N_T):
            if i in centroids:
                continue
            scores = [correlation_between([i], new_sets[q], R)
                      for q in range(N_rf)]
            new_sets[int(np.argmax(scores))].append(i)
        new_sets = [sorted(S) for S in new_sets]
        obj = grouping_objective(R, new_sets)
        if obj < best_obj:
            break  # oscillation guard: keep the best partition seen
        best_obj, best_sets = obj, new_sets
        trace.append(obj)
        if new_sets == sets:
            break
        sets = new_sets
        # new centroid: member with the largest average correlation to its cluster
        centroids = [
            max(S, key=lambda i: (absR[i, S].sum() / len(S), -i)) for S in sets
        ]
    return best_sets, trace


def kmeans_antenna_grouping(F_fc: np.ndarray, N_rf: int,
                            max_iters: int = 50,
                            rng: np.random.Generator = None) -> AntennaGrouping:
    """Cluster each BS's antennas by analog-beam correlation (K-means style)."""
    if rng is None:
        rng = np.random.default_rng(0)
    L, N_T, _ = F_fc.shape
    if N_rf > N_T:
        raise ValueError(f"N_RF={N_rf} exceeds N_T={N_T}")
    sets = []
    V = np.zeros((L, N_T, N_rf))
    for l in range(L):
        R = F_fc[l] @ F_fc[l].conj().T
        S, _ = _group_one_bs(R, N_rf, max_iters, rng)
        sets.append(S)
        for q in range(N_rf):
            V[l, S[q], q] = 1.0
    return AntennaGrouping(sets=sets, V=V).validate()


def grouping_support_indices(grouping: AntennaGrouping) -> list:
    """Per-BS column-major vec indices of the partition's nonzero entries."""
    L, N_T, N_rf = grouping.V.shape
    sel = []
    for l in range(L):
        idx = sorted(q * N_T + i
                     for q in range(N_rf) for i in grouping.sets[l][q])
        sel.append(np.array(idx, dtype=int))
    return sel


def solve_analog_ds(state: BeamformerState, channels: ChannelSet,
                    assoc: Association, weights: np.ndarray,
                    cfg: RcgConfig = RcgConfig(max_iters=50),
                    kmeans_iters: int = 50,
                    rng: np.random.Generator = None,
                    F_fc_warm: np.ndarray = None):
    """Two-step dynamic subarray design: fully connected solve, then antenna
    grouping and masking.  Returns (masked F_RF, F_fc, grouping).

    The masked state.F_RF cannot seed the unit-modulus solver, so the
    unmasked fully connected iterate is warm-started via F_fc_warm.
    """
    fc_state = state.copy()
    if F_fc_warm is not None:
        fc_state.F_RF = F_fc_warm
    F_fc = solve_analog_fc(fc_state, channels, assoc, weights, cfg)
    grouping = kmeans_antenna_grouping(F_fc, state.f_BB.shape[2],
                                       max_iters=kmeans_iters, rng=rng)
    return F_fc * grouping.V, F_fc, grouping


def refine_on_support(state: BeamformerState, channels: ChannelSet,
                      assoc: Association, weights: np.ndarray,
                      grouping: AntennaGrouping, F_masked: np.ndarray,
                      cfg: RcgConfig = RcgConfig(max_iters=50)) -> np.ndarray:
    """Re-optimize the phases of a masked analog beamformer on its own
    single-connection support, warm-started from the masked entries."""
    return _solve_restricted(state, channels, assoc, weights,
                             grouping_support_indices(grouping), F_masked, cfg)
