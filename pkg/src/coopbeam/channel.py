"""Geometric scenario generation and multipath mmWave channel vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Pathloss model constants (dB). kappa = kappa_a + 10*kappa_b*log10(d) + shadowing.
KAPPA_A = 32.0
KAPPA_B = 2.0
SIGMA_C_DB2 = 8.7  # shadowing variance in dB^2

DEFAULT_N_RAYS = 10
DEFAULT_D_OVER_LAMBDA = 0.5
DEFAULT_AREA_SIDE = 500.0
MIN_BS_USER_DIST = 10.0


class ConfigurationError(ValueError):
    """A scenario field violates its invariant."""


@dataclass(frozen=True)
class Scenario:
    """System constants and deployment geometry for one simulation instance."""

    L: int
    K: int
    N_T: int
    N_RF: int
    P_max: float                 # linear mW
    sigma2: np.ndarray           # per-user noise variance, linear mW, shape (K,)
    weights: np.ndarray          # per-user priority, shape (K,)
    N_r: int = DEFAULT_N_RAYS
    d_over_lambda: float = DEFAULT_D_OVER_LAMBDA
    area_side: float = DEFAULT_AREA_SIDE
    bs_positions: np.ndarray = field(default=None)    # (L, 2) meters
    user_positions: np.ndarray = field(default=None)  # (K, 2) meters

    def validate(self):
        if self.L < 1:
            raise ConfigurationError("L must be >= 1")
        if self.K < 1:
            raise ConfigurationError("K must be >= 1")
        if self.K > self.L * self.N_RF:
            raise ConfigurationError(
                f"K={self.K} exceeds total serving capacity L*N_RF={self.L * self.N_RF}"
            )
        if self.N_T % self.N_RF != 0:
            raise ConfigurationError(
                f"N_T={self.N_T} not divisible by N_RF={self.N_RF}"
            )
        if self.P_max <= 0:
            raise ConfigurationError("P_max must be strictly positive")
        if np.any(np.asarray(self.sigma2) <= 0):
            raise ConfigurationError("sigma2 entries must be strictly positive")
        if np.any(np.asarray(self.weights) <= 0):
            raise ConfigurationError("weights entries must be strictly positive")
        if self.N_r < 1:
            raise ConfigurationError("N_r must be >= 1")
        return self


@dataclass(frozen=True)
class ChannelSet:
    """Complex channel vectors h[l, k] of length N_T for every BS-user pair."""

    h: np.ndarray  # (L, K, N_T) complex

    def validate(self, scn: Scenario):
        if self.h.shape != (scn.L, scn.K, scn.N_T):
            raise ConfigurationError(
                f"channel shape {self.h.shape} does not match scenario "
                f"({scn.L}, {scn.K}, {scn.N_T})"
            )
        if not np.all(np.isfinite(self.h)):
            raise ConfigurationError("channel contains non-finite entries")
        return self


def dbm_to_mw(x_dbm: float) -> float:
    return 10.0 ** (x_dbm / 10.0)


def array_response(theta: float, N_T: int, d_over_lambda: float = DEFAULT_D_OVER_LAMBDA) -> np.ndarray:
    """ULA steering vector, unit Euclidean norm."""
    n = np.arange(N_T)
    return np.exp(1j * 2.0 * np.pi * d_over_lambda * n * np.sin(theta)) / math.sqrt(N_T)


def pathloss_db(distance: float, rng: np.random.Generator,
                kappa_a: float = KAPPA_A, kappa_b: float = KAPPA_B,
                sigma_c_db2: float = SIGMA_C_DB2) -> float:
    """Distance pathloss in dB with lognormal shadowing drawn from rng."""
    if distance <= 0:
        raise ValueError(f"distance must be positive, got {distance}")
    kappa_c = rng.normal(0.0, math.sqrt(sigma_c_db2)) if sigma_c_db2 > 0 else 0.0
    return kappa_a + 10.0 * kappa_b * math.log10(distance) + kappa_c


def channel_from_rays(upsilon: np.ndarray, theta: np.ndarray, N_T: int,
                      d_over_lambda: float = DEFAULT_D_OVER_LAMBDA) -> np.ndarray:
    """Superpose rays with gains upsilon and departure angles theta."""
    upsilon = np.asarray(upsilon)
    theta = np.asarray(theta)
    N_r = len(upsilon)
    steering = np.stack([array_response(t, N_T, d_over_lambda) for t in theta])
    return math.sqrt(N_T / N_r) * (upsilon @ steering)


def generate_channel(scn: Scenario, l: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one multipath channel vector between BS l and user k."""
    d = float(np.linalg.norm(scn.bs_positions[l] - scn.user_positions[k]))
    kappa = pathloss_db(d, rng)
    var = 10.0 ** (-0.1 * kappa)
    upsilon = math.sqrt(var / 2.0) * (
        rng.standard_normal(scn.N_r) + 1j * rng.standard_normal(scn.N_r)
    )
    theta = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size=scn.N_r)
    return channel_from_rays(upsilon, theta, scn.N_T, scn.d_over_lambda)


def _bs_grid(L: int, side: float) -> np.ndarray:
    """Regular grid of L BS positions inside the square region."""
    m = math.ceil(math.sqrt(L))
    step = side / m
    pts = []
    for i in range(m):
        for j in range(m):
            pts.append(((j + 0.5) * step, (i + 0.5) * step))
    return np.array(pts[:L])


@dataclass
class ScenarioConfig:
    """User-facing scenario parameters; powers specified in dBm."""

    L: int = 3
    K: int = 9
    N_T: int = 48
    N_RF: int = 3
    P_max_dbm: float = 20.0
    noise_dbm: float = -20.0
    N_r: int = DEFAULT_N_RAYS
    weights: np.ndarray = None
    d_over_lambda: float = DEFAULT_D_OVER_LAMBDA
    area_side_m: float = DEFAULT_AREA_SIDE


def generate_scenario(config: ScenarioConfig, rng: np.random.Generator):
    """Build a Scenario (grid BSs, uniform users) and its full ChannelSet."""
    weights = config.weights
    if weights is None:
        weights = np.ones(config.K)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (config.K,):
        raise ConfigurationError(
            f"weights must have length K={config.K}, got shape {weights.shape}"
        )
    bs = _bs_grid(config.L, config.area_side_m)
    users = np.empty((config.K, 2))
    for k in range(config.K):
        while True:
            p = rng.uniform(0.0, config.area_side_m, size=2)
            if np.min(np.linalg.norm(bs - p, axis=1)) >= MIN_BS_USER_DIST:
                users[k] = p
                break
    scn = Scenario(
        L=config.L, K=config.K, N_T=config.N_T, N_RF=config.N_RF,
        P_max=dbm_to_mw(config.P_max_dbm),
        sigma2=np.full(config.K, dbm_to_mw(config.noise_dbm)),
        weights=weights,
        N_r=config.N_r,
        d_over_lambda=config.d_over_lambda,
        area_side=config.area_side_m,
        bs_positions=bs,
        user_positions=users,
    ).validate()
    h = np.empty((scn.L, scn.K, scn.N_T), dtype=complex)
    for l in range(scn.L):
        for k in range(scn.K):
            h[l, k] = generate_channel(scn, l, k, rng)
    return scn, ChannelSet(h=h).validate(scn)
