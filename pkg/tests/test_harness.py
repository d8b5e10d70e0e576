"""Tests for the BCD orchestration, EE model, sweeps, config, and CLI."""

import json

import numpy as np
import pytest

from coopbeam.channel import ChannelSet, ConfigurationError, Scenario, \
    ScenarioConfig, dbm_to_mw, generate_scenario
from coopbeam.association import Association, stable_match
from coopbeam.cli import main
from coopbeam.harness import CSV_HEADER, BcdConfig, PowerModel, RunConfig, \
    SweepResult, bcd_solve, hardware_power, iterations_to_plateau, \
    load_config, run_sweep, trial_seed, validate_config, write_csv
from coopbeam.objective import fp_objective, per_bs_power, update_rho, \
    update_xi, weighted_sum_rate
from coopbeam.subarray import fs_mask

SMALL = ScenarioConfig(L=2, K=4, N_T=8, N_RF=2, P_max_dbm=20.0)

FAST_BCD = BcdConfig(max_iters=25)


def small_instance(seed=0):
    scn, channels = generate_scenario(SMALL, np.random.default_rng(seed))
    return scn, channels, stable_match(channels, scn)


def test_hardware_power_cases():
    pm = PowerModel()
    scn = Scenario(L=3, K=9, N_T=48, N_RF=3, P_max=10.0,
                   sigma2=np.ones(9), weights=np.ones(9)).validate()
    assert hardware_power("fd", scn, pm) == pytest.approx(3 * (10 + 200 + 14400))
    assert hardware_power("fc", scn, pm) == pytest.approx(3 * (10 + 200 + 4500))
    assert hardware_power("fs", scn, pm) == pytest.approx(3 * (10 + 200 + 2100))
    assert hardware_power("ds", scn, pm) == pytest.approx(3 * (10 + 200 + 2340))
    with pytest.raises(ValueError):
        hardware_power("xx", scn, pm)


def test_bcd_single_user_capacity():
    # one BS, one user: the fully digital solution reaches the matched-filter
    # capacity log2(1 + P ||h||^2 / sigma^2)
    cfg = ScenarioConfig(L=1, K=1, N_T=8, N_RF=1, P_max_dbm=30.0)
    scn, channels = generate_scenario(cfg, np.random.default_rng(3))
    assoc = stable_match(channels, scn)
    state, _ = bcd_solve("fd", channels, assoc, scn, FAST_BCD,
                         np.random.default_rng(0))
    rate = weighted_sum_rate(state, channels, assoc, scn.weights, scn.sigma2)
    cap = np.log2(1 + scn.P_max * np.linalg.norm(channels.h[0, 0]) ** 2
                  / scn.sigma2[0])
    assert rate == pytest.approx(cap, rel=1e-3)


def test_bcd_zero_channels():
    scn, channels, assoc = small_instance()
    zero = ChannelSet(h=np.zeros_like(channels.h))
    state, trace = bcd_solve("fc", zero, assoc, scn, FAST_BCD,
                             np.random.default_rng(0))
    assert weighted_sum_rate(state, zero, assoc, scn.weights, scn.sigma2) == 0.0
    assert len(trace) <= 2


@pytest.mark.parametrize("arch", ["fd", "fc", "fs", "ds"])
def test_bcd_trace_monotone_and_feasible(arch):
    scn, channels, assoc = small_instance(seed=1)
    state, trace = bcd_solve(arch, channels, assoc, scn, FAST_BCD,
                             np.random.default_rng(2))
    assert all(b >= a - 1e-8 for a, b in zip(trace, trace[1:]))
    assert np.all(per_bs_power(state, assoc) <= scn.P_max * (1 + 1e-9))
    mods = np.abs(state.F_RF)
    if arch == "fc":
        assert np.max(np.abs(mods - 1.0)) < 1e-12
    elif arch in ("fs", "ds"):
        on = mods > 0
        assert np.all(on.sum(axis=2) == 1)
        assert np.max(np.abs(mods[on] - 1.0)) < 1e-12
        if arch == "fs":
            assert np.all((mods > 0) == (fs_mask(scn.N_T, scn.N_RF) > 0))


def test_bcd_tightness_at_convergence():
    scn, channels, assoc = small_instance(seed=4)
    state, _ = bcd_solve("fc", channels, assoc, scn, FAST_BCD,
                         np.random.default_rng(0))
    state.rho = update_rho(state, channels, assoc, scn.sigma2)
    state.xi = update_xi(state, channels, assoc, scn.weights, scn.sigma2)
    f_o = fp_objective(state, channels, assoc, scn.weights, scn.sigma2)
    rate = weighted_sum_rate(state, channels, assoc, scn.weights, scn.sigma2)
    assert abs(f_o - rate) <= 1e-6 * max(1.0, abs(rate))


def test_iterations_to_plateau():
    assert iterations_to_plateau([1.0, 2.0, 2.0005, 2.0006], rel_tol=1e-3) == 2
    assert iterations_to_plateau([1.0, 2.0, 3.0]) == 3


def test_sweep_result_row_format():
    r = SweepResult(arch="fc", sweep_name="power", sweep_value=20.0, trial=3,
                    seed=123, iterations=7, sum_rate=1.23456789012,
                    p_tot=14130.0)
    assert r.ee == pytest.approx(r.sum_rate / 14.13)
    row = r.row()
    assert row.split(",")[0] == "fc"
    assert row.split(",")[6] == "1.23456789"  # nine significant digits


def run_config(tmp_path, trials=1, values=(20.0,), archs=("fc",)):
    return RunConfig(
        scenario=SMALL, sweep_name="power", sweep_values=list(values),
        archs=tuple(archs), trials=trials, master_seed=7, bcd=FAST_BCD,
    )


def test_run_sweep_single_row(tmp_path):
    results = run_sweep(run_config(tmp_path))
    assert len(results) == 1
    out = tmp_path / "one.csv"
    write_csv(results, out)
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2


def test_run_sweep_deterministic_bytes(tmp_path):
    cfg = run_config(tmp_path, trials=2, values=(10.0, 20.0),
                     archs=("fd", "fs"))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run_sweep(cfg), a)
    write_csv(run_sweep(cfg), b)
    assert a.read_bytes() == b.read_bytes()


def test_trial_seed_depends_on_both_inputs():
    assert trial_seed(1, 2) != trial_seed(1, 3)
    assert trial_seed(1, 2) != trial_seed(2, 2)
    assert trial_seed(5, 9) == trial_seed(5, 9)


def write_config(tmp_path, extra=None, **overrides):
    cfg = {"L": 2, "K": 4, "N_T": 8, "N_RF": 2, "P_max_dbm": 20.0,
           "noise_dbm": -20.0,
           "sweep": {"name": "power", "values": [10.0, 20.0]}}
    cfg.update(overrides)
    if extra:
        cfg.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def test_load_config_round_trip(tmp_path):
    cfg = load_config(write_config(tmp_path))
    assert cfg.scenario.L == 2 and cfg.scenario.K == 4
    assert cfg.sweep_name == "power"
    assert cfg.sweep_values == [10.0, 20.0]


def test_load_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(ConfigurationError, match="unknown config"):
        load_config(write_config(tmp_path, extra={"bogus": 1}))
    with pytest.raises(ConfigurationError, match="unknown sweep"):
        load_config(write_config(
            tmp_path, sweep={"name": "power", "values": [1], "x": 2}))
    with pytest.raises(ConfigurationError, match="sweep name"):
        load_config(write_config(
            tmp_path, sweep={"name": "voltage", "values": [1]}))


def test_validate_config_checks_scenario(tmp_path):
    validate_config(write_config(tmp_path))
    with pytest.raises(ConfigurationError):
        validate_config(write_config(tmp_path, K=40))


def test_rfchains_sweep_scales_users(tmp_path):
    path = write_config(tmp_path,
                        sweep={"name": "rfchains", "values": [2, 4]})
    cfg = load_config(path)
    from coopbeam.harness import _scenario_for
    scn4 = _scenario_for(cfg, 4)
    assert scn4.N_RF == 4 and scn4.K == cfg.scenario.L * 4


def test_cli_validate_and_run(tmp_path, capsys):
    path = write_config(tmp_path, sweep={"name": "power", "values": [20.0]})
    assert main(["validate", "--config", str(path)]) == 0
    out = tmp_path / "out.csv"
    code = main(["run", "--config", str(path), "--seed", "3", "--trials", "1",
                 "--arch", "fd", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 2
    assert lines[1].startswith("fd,power,20,0,")


def test_cli_errors(tmp_path, capsys):
    assert main(["validate", "--config", str(tmp_path / "missing.json")]) == 2
    path = write_config(tmp_path, extra={"bogus": 1})
    assert main(["validate", "--config", str(path)]) == 2
    good = write_config(tmp_path)
    assert main(["run", "--config", str(good), "--arch", "zz",
                 "--out", str(tmp_path / "x.csv")]) == 2
