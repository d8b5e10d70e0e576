"""Shared builders for randomized test instances."""

import numpy as np

from coopbeam.association import stable_match
from coopbeam.channel import ChannelSet, Scenario
from coopbeam.objective import BeamformerState, per_bs_power, update_rho, \
    update_xi
from coopbeam.subarray import fs_mask


def random_scenario(rng, L=2, K=3, N_T=8, N_rf=2, P_max=100.0, sigma2=1.0):
    """Scenario with direct channel draws, bypassing the geometric model."""
    scn = Scenario(
        L=L, K=K, N_T=N_T, N_RF=N_rf, P_max=P_max,
        sigma2=np.full(K, float(sigma2)),
        weights=np.ones(K),
    ).validate()
    h = (rng.standard_normal((L, K, N_T))
         + 1j * rng.standard_normal((L, K, N_T))) / np.sqrt(2.0 * N_T)
    # spread link strengths over a few orders of magnitude
    h *= 10.0 ** rng.uniform(-1.0, 1.0, size=(L, K, 1))
    channels = ChannelSet(h=h).validate(scn)
    return scn, channels


def random_state(rng, scn, channels, assoc, mask=None, set_aux=True):
    """Feasible beamformer state with random phases and scaled digital beams."""
    L, K, N_T, N_rf = scn.L, scn.K, scn.N_T, scn.N_RF
    F = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(L, N_T, N_rf)))
    if mask is not None:
        F = F * mask
    f_BB = (rng.standard_normal((L, K, N_rf))
            + 1j * rng.standard_normal((L, K, N_rf)))
    f_BB *= assoc.alpha[:, :, None]
    state = BeamformerState.zeros(L, K, N_T, N_rf)
    state.F_RF = F
    state.f_BB = f_BB
    p = per_bs_power(state, assoc)
    for l in range(L):
        if p[l] > 0:
            state.f_BB[l] *= np.sqrt(0.9 * scn.P_max / p[l])
    if set_aux:
        state.rho = update_rho(state, channels, assoc, scn.sigma2)
        state.xi = update_xi(state, channels, assoc, scn.weights, scn.sigma2)
    return state


def random_case(rng, L=2, K=3, N_T=8, N_rf=2, masked=False, **kw):
    scn, channels = random_scenario(rng, L=L, K=K, N_T=N_T, N_rf=N_rf, **kw)
    assoc = stable_match(channels, scn)
    mask = fs_mask(N_T, N_rf) if masked else None
    state = random_state(rng, scn, channels, assoc, mask=mask)
    return scn, channels, assoc, state


def analog_surrogate_direct(state, channels, assoc, weights):
    """Analog-dependent part of the surrogate objective, computed with plain
    scalar loops as an independent oracle."""
    L, K, _ = channels.h.shape
    w = np.asarray(weights)
    total = 0.0
    for k in range(K):
        s_k = 0.0 + 0.0j
        for l in range(L):
            if assoc.alpha[l, k]:
                s_k += np.vdot(channels.h[l, k],
                               state.F_RF[l] @ state.f_BB[l, k])
        total += 2.0 * np.sqrt(w[k] * (1.0 + state.rho[k])) \
            * np.real(np.conj(state.xi[k]) * s_k)
        rx = 0.0
        for j in range(K):
            a_kj = 0.0 + 0.0j
            for l in range(L):
                if assoc.alpha[l, j]:
                    a_kj += np.vdot(channels.h[l, k],
                                    state.F_RF[l] @ state.f_BB[l, j])
            rx += abs(a_kj) ** 2
        total -= w[k] * abs(state.xi[k]) ** 2 * rx
    return total
