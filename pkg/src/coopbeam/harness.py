"""BCD orchestration per architecture, the EE model, and Monte Carlo sweeps."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .analog_fc import solve_analog_fc
from .association import stable_match
from .channel import ChannelSet, ConfigurationError, Scenario, ScenarioConfig, \
    generate_scenario
from .digital import solve_digital
from .manifold import RcgConfig
from .objective import BeamformerState, fp_objective, update_rho, update_xi, \
    weighted_sum_rate
from .subarray import fs_mask, refine_on_support, solve_analog_ds, \
    solve_analog_fs

log = logging.getLogger(__name__)

ARCHITECTURES = ("fd", "fc", "fs", "ds")

CSV_HEADER = ("arch,sweep_name,sweep_value,trial,seed,iterations,"
              "sum_rate_bpshz,p_tot_mw,ee_bpshzw")


@dataclass(frozen=True)
class PowerModel:
    """Hardware power draw per device, in mW."""

    P_BB: float = 200.0
    P_RF: float = 300.0
    P_PS: float = 25.0
    P_SW: float = 5.0

    def validate(self):
        if min(self.P_BB, self.P_RF, self.P_PS, self.P_SW) < 0:
            raise ConfigurationError("power model entries must be nonnegative")
        return self


@dataclass
class BcdConfig:
    max_iters: int = 50
    rel_tol: float = 1e-4
    rcg: RcgConfig = field(default_factory=lambda: RcgConfig(max_iters=50))
    kmeans_iters: int = 50
    regroup_each_iter: bool = True


@dataclass
class SweepResult:
    arch: str
    sweep_name: str
    sweep_value: float
    trial: int
    seed: int
    iterations: int
    sum_rate: float
    p_tot: float

    @property
    def ee(self) -> float:
        return self.sum_rate / (self.p_tot / 1000.0)

    def row(self):
        fmt = lambda x: f"{x:.9g}"
        return (f"{self.arch},{self.sweep_name},{fmt(self.sweep_value)},"
                f"{self.trial},{self.seed},{self.iterations},"
                f"{fmt(self.sum_rate)},{fmt(self.p_tot)},{fmt(self.ee)}")


def hardware_power(arch: str, scn: Scenario, pm: PowerModel = PowerModel()) -> float:
    """Total consumed power across all BSs for the given architecture (mW)."""
    N_T, N_rf = scn.N_T, scn.N_RF
    if arch == "fd":
        p_hw = N_T * pm.P_RF
    elif arch == "fc":
        p_hw = N_rf * pm.P_RF + N_T * N_rf * pm.P_PS
    elif arch == "fs":
        p_hw = N_rf * pm.P_RF + N_T * pm.P_PS
    elif arch == "ds":
        p_hw = N_rf * pm.P_RF + N_T * pm.P_PS + N_T * pm.P_SW
    else:
        raise ValueError(f"unknown architecture {arch!r}")
    return scn.L * (scn.P_max + pm.P_BB + p_hw)


def _init_state(arch, scn, channels, assoc, rng):
    """Feasible start: random unit-modulus analog phases, matched-filter
    digital beams splitting the power budget equally over served users."""
    L, K, N_T = channels.h.shape
    if arch == "fd":
        n_rf = N_T
        F = np.broadcast_to(np.eye(N_T, dtype=complex), (L, N_T, N_T)).copy()
        F_fc = None
    elif arch == "fc":
        n_rf = scn.N_RF
        F = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(L, N_T, n_rf)))
        F_fc = None
    elif arch == "fs":
        n_rf = scn.N_RF
        F = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(L, N_T, n_rf)))
        F = F * fs_mask(N_T, n_rf)
        F_fc = None
    elif arch == "ds":
        n_rf = scn.N_RF
        F_fc = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(L, N_T, n_rf)))
        F = F_fc * fs_mask(N_T, n_rf)  # any valid single-connection mask
    else:
        raise ValueError(f"unknown architecture {arch!r}")

    state = BeamformerState.zeros(L, K, N_T, n_rf)
    state.F_RF = F
    for l in range(L):
        served = assoc.served_sets[l]
        if not served:
            continue
        p_each = scn.P_max / len(served)
        for k in served:
            mf = F[l].conj().T @ channels.h[l, k]
            norm = np.linalg.norm(F[l] @ mf)
            if norm > 0:
                state.f_BB[l, k] = mf * np.sqrt(p_each) / norm
    return state, F_fc


def bcd_solve(arch: str, channels: ChannelSet, assoc, scn: Scenario,
              cfg: BcdConfig = None, rng: np.random.Generator = None):
    """Alternating closed-form updates of the FP auxiliaries, the analog
    beamformer (per architecture), and the digital beamformer.

    Returns (final state, list of surrogate-objective values per iteration).
    """
    if cfg is None:
        cfg = BcdConfig()
    if rng is None:
        rng = np.random.default_rng(0)
    w, s2 = scn.weights, scn.sigma2
    state, F_fc = _init_state(arch, scn, channels, assoc, rng)

    trace = []
    prev = None
    for _ in range(cfg.max_iters):
        snapshot = state.copy()
        state.rho = update_rho(state, channels, assoc, s2)
        state.xi = update_xi(state, channels, assoc, w, s2)

        if arch == "fc":
            state.F_RF = solve_analog_fc(state, channels, assoc, w, cfg.rcg)
        elif arch == "fs":
            state.F_RF = solve_analog_fs(state, channels, assoc, w, cfg.rcg)
        elif arch == "ds":
            F_masked, F_fc_new, grouping = solve_analog_ds(
                state, channels, assoc, w, cfg.rcg,
                kmeans_iters=cfg.kmeans_iters, rng=rng, F_fc_warm=F_fc)
            F_ds = refine_on_support(state, channels, assoc, w,
                                     grouping, F_masked, cfg.rcg)
            # masking is not monotone per se; keep the better analog point
            cand = state.copy()
            cand.F_RF = F_ds
            if fp_objective(cand, channels, assoc, w, s2) >= \
               fp_objective(state, channels, assoc, w, s2):
                state.F_RF = F_ds
            F_fc = F_fc_new
        # fd: analog stays the identity

        state.f_BB, state.beta = solve_digital(state, channels, assoc, w, scn.P_max)

        val = fp_objective(state, channels, assoc, w, s2)
        if prev is not None and val < prev - 1e-12:
            # the power-unconstrained analog step can overshoot; keep the
            # previous iterate so the trace stays monotone
            state = snapshot
            val = prev
        trace.append(val)
        if prev is not None and abs(val - prev) <= cfg.rel_tol * max(abs(prev), 1e-12):
            break
        prev = val
    return state, trace


def iterations_to_plateau(trace, rel_tol=1e-3) -> int:
    """First iteration index (1-based) after which the relative change stays
    below rel_tol."""
    for i in range(1, len(trace)):
        if abs(trace[i] - trace[i - 1]) <= rel_tol * max(abs(trace[i - 1]), 1e-12):
            return i
    return len(trace)


# ------------------------------------------------------------------ sweeps

SWEEP_PARAMS = ("power", "antennas", "rfchains")


@dataclass
class RunConfig:
    scenario: ScenarioConfig
    sweep_name: str
    sweep_values: list
    archs: tuple = ARCHITECTURES
    trials: int = 200
    master_seed: int = 0
    power_model: PowerModel = field(default_factory=PowerModel)
    bcd: BcdConfig = field(default_factory=BcdConfig)


def _scenario_for(cfg: RunConfig, value: float) -> ScenarioConfig:
    base = cfg.scenario
    if cfg.sweep_name == "power":
        return replace(base, P_max_dbm=value)
    if cfg.sweep_name == "antennas":
        return replace(base, N_T=int(value))
    if cfg.sweep_name == "rfchains":
        # denser scenarios: every BS serves as many users as it has RF chains
        return replace(base, N_RF=int(value), K=base.L * int(value))
    raise ValueError(f"unknown sweep parameter {cfg.sweep_name!r}")


def trial_seed(master_seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([master_seed, trial]).generate_state(1)[0])


def run_trial(cfg: RunConfig, arch: str, value: float, trial: int) -> SweepResult:
    seed = trial_seed(cfg.master_seed, trial)
    scn_cfg = _scenario_for(cfg, value)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, trial]))
    scn, channels = generate_scenario(scn_cfg, rng)
    assoc = stable_match(channels, scn)
    state, trace = bcd_solve(arch, channels, assoc, scn, cfg.bcd, rng)
    rate = weighted_sum_rate(state, channels, assoc, scn.weights, scn.sigma2)
    return SweepResult(
        arch=arch, sweep_name=cfg.sweep_name, sweep_value=float(value),
        trial=trial, seed=seed, iterations=len(trace),
        sum_rate=rate, p_tot=hardware_power(arch, scn, cfg.power_model),
    )


def run_sweep(cfg: RunConfig, n_jobs: int = 1):
    """All (architecture, swept value, trial) combinations, sorted rows."""
    tasks = [(arch, value, trial)
             for arch in cfg.archs
             for value in cfg.sweep_values
             for trial in range(cfg.trials)]

    def one(arch, value, trial):
        try:
            return run_trial(cfg, arch, value, trial)
        except Exception:
            log.exception("trial failed: arch=%s value=%s trial=%d",
                          arch, value, trial)
            return SweepResult(
                arch=arch, sweep_name=cfg.sweep_name, sweep_value=float(value),
                trial=trial, seed=trial_seed(cfg.master_seed, trial),
                iterations=-1, sum_rate=float("nan"), p_tot=float("nan"),
            )

    if n_jobs == 1:
        results = [one(*t) for t in tasks]
    else:
        from joblib import Parallel, delayed
        results = Parallel(n_jobs=n_jobs)(delayed(one)(*t) for t in tasks)
    results.sort(key=lambda r: (r.arch, r.sweep_name, r.sweep_value, r.trial))
    return results


def write_csv(results, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in results:
            fh.write(r.row() + "\n")


# ------------------------------------------------------------------ config file

CONFIG_KEYS = {"L", "K", "N_T", "N_RF", "P_max_dbm", "noise_dbm", "N_r",
               "weights", "area_side_m", "sweep", "rcg", "kmeans"}
SWEEP_KEYS = {"name", "values"}
RCG_KEYS = {"max_iters", "grad_tol", "step_init", "contraction",
            "armijo_c", "max_backtracks"}
KMEANS_KEYS = {"max_iters"}


def load_config(path) -> RunConfig:
    """Parse the JSON run configuration; unknown keys are rejected."""
    with open(path) as fh:
        raw = json.load(fh)
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    sweep = raw.get("sweep", {"name": "power", "values": [20.0]})
    unknown = set(sweep) - SWEEP_KEYS
    if unknown:
        raise ConfigurationError(f"unknown sweep keys: {sorted(unknown)}")
    if sweep.get("name") not in SWEEP_PARAMS:
        raise ConfigurationError(
            f"sweep name must be one of {SWEEP_PARAMS}, got {sweep.get('name')!r}")

    scn_kwargs = {}
    for key in ("L", "K", "N_T", "N_RF", "P_max_dbm", "noise_dbm", "N_r"):
        if key in raw:
            scn_kwargs[key] = raw[key]
    if "area_side_m" in raw:
        scn_kwargs["area_side_m"] = raw["area_side_m"]
    if raw.get("weights") is not None:
        scn_kwargs["weights"] = np.asarray(raw["weights"], dtype=float)
    scenario = ScenarioConfig(**scn_kwargs)

    rcg_raw = raw.get("rcg", {})
    unknown = set(rcg_raw) - RCG_KEYS
    if unknown:
        raise ConfigurationError(f"unknown rcg keys: {sorted(unknown)}")
    kmeans_raw = raw.get("kmeans", {})
    unknown = set(kmeans_raw) - KMEANS_KEYS
    if unknown:
        raise ConfigurationError(f"unknown kmeans keys: {sorted(unknown)}")
    bcd = BcdConfig(rcg=RcgConfig(**{"max_iters": 50, **rcg_raw}),
                    kmeans_iters=kmeans_raw.get("max_iters", 50))

    return RunConfig(
        scenario=scenario,
        sweep_name=sweep["name"],
        sweep_values=list(sweep["values"]),
        bcd=bcd,
    )


def validate_config(path):
    """Load and fully check a config, including scenario invariants."""
    cfg = load_config(path)
    for value in cfg.sweep_values:
        scn_cfg = _scenario_for(cfg, value)
        rng = np.random.default_rng(0)
        generate_scenario(replace(scn_cfg, N_r=1), rng)
    return cfg
