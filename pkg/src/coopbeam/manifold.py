"""Riemannian conjugate gradient on the product-of-unit-circles manifold.

Minimizes f(x) = x^H W x - 2 Re{x^H v} subject to |x_i| = 1 for all i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

ON_MANIFOLD_TOL = 1e-9


class DegenerateRetraction(RuntimeError):
    """An element of f + step*d has near-zero modulus; shrink the step."""


@dataclass(frozen=True)
class QuadraticObjective:
    W: np.ndarray  # (n, n) complex
    v: np.ndarray  # (n,) complex

    def value(self, f: np.ndarray) -> float:
        return float(np.real(np.vdot(f, self.W @ f)) - 2.0 * np.real(np.vdot(f, self.v)))

    @cached_property
    def W_sym(self) -> np.ndarray:
        return self.W + self.W.conj().T


@dataclass(frozen=True)
class RcgConfig:
    max_iters: int = 200
    grad_tol: float = 1e-6        # threshold on ||riemannian grad||^2
    step_init: float = 1.0        # fallback when the exact ambient step fails
    contraction: float = 0.5
    armijo_c: float = 1e-4
    max_backtracks: int = 50
    exact_init_step: bool = True  # seed the search with the ambient quadratic minimizer


def euclidean_grad(obj: QuadraticObjective, f: np.ndarray) -> np.ndarray:
    if obj.W.shape != (len(f), len(f)) or obj.v.shape != f.shape:
        raise ValueError(
            f"shape mismatch: W {obj.W.shape}, v {obj.v.shape}, f {f.shape}"
        )
    return obj.W_sym @ f - 2.0 * obj.v


def project_tangent(g: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Drop the radial component at each unit-circle factor."""
    return g - np.real(g * np.conj(f)) * f


def riemannian_grad(obj: QuadraticObjective, f: np.ndarray) -> np.ndarray:
    if np.max(np.abs(np.abs(f) - 1.0)) > ON_MANIFOLD_TOL:
        raise ValueError("point is off the unit-modulus manifold")
    return project_tangent(euclidean_grad(obj, f), f)


def retract(f: np.ndarray, step: float, d: np.ndarray) -> np.ndarray:
    x = f + step * d
    mod = np.abs(x)
    if np.min(mod) < 1e-14:
        raise DegenerateRetraction(f"element modulus {np.min(mod):.3e} below 1e-14")
    return x / mod


def vector_transport(d_prev: np.ndarray, f_new: np.ndarray) -> np.ndarray:
    """Carry a tangent vector to the tangent space at f_new by projection."""
    return project_tangent(d_prev, f_new)


def _initial_step(obj, f, d, slope, cfg):
    """Exact minimizer of the ambient quadratic along d (scale invariant)."""
    if not cfg.exact_init_step:
        return cfg.step_init
    curv = float(np.real(np.vdot(d, obj.W @ d)))
    if curv > 1e-300 and slope < 0.0:
        return -slope / (2.0 * curv)
    dnorm = float(np.linalg.norm(d))
    return 1.0 / dnorm if dnorm > 1e-300 else cfg.step_init


def _armijo_step(obj, f, d, g, cfg):
    """Backtracking line search; returns (new point, value) or None."""
    f_val = obj.value(f)
    slope = np.real(np.vdot(g, d))
    step = _initial_step(obj, f, d, slope, cfg)
    for _ in range(cfg.max_backtracks):
        try:
            f_new = retract(f, step, d)
        except DegenerateRetraction:
            step *= cfg.contraction
            continue
        val = obj.value(f_new)
        if val <= f_val + cfg.armijo_c * step * slope:
            return f_new, val
        step *= cfg.contraction
    return None


def rcg_minimize(obj: QuadraticObjective, f0: np.ndarray,
                 cfg: RcgConfig = RcgConfig()) -> np.ndarray:
    """Polak-Ribiere (nonnegative) conjugate gradient with Armijo search.

    The returned point never has a larger objective than f0.
    """
    f = retract(f0, 0.0, np.zeros_like(f0))  # normalize defensively
    g = riemannian_grad(obj, f)
    d = -g
    for _ in range(cfg.max_iters):
        gnorm2 = float(np.real(np.vdot(g, g)))
        if gnorm2 < cfg.grad_tol:
            break
        if np.real(np.vdot(g, d)) >= 0.0:
            d = -g  # restart on a non-descent direction
        res = _armijo_step(obj, f, d, g, cfg)
        if res is None:
            # steepest-descent restart; if that also fails, stop
            d = -g
            res = _armijo_step(obj, f, d, g, cfg)
            if res is None:
                break
        f_new, _ = res
        g_new = riemannian_grad(obj, f_new)
        g_old_t = vector_transport(g, f_new)
        a = np.real(np.vdot(g_new, g_new - g_old_t)) / max(gnorm2, 1e-300)
        a = max(a, 0.0)
        d = -g_new + a * vector_transport(d, f_new)
        f, g = f_new, g_new
    return f


def random_point(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=n))
