"""End-to-end artifact run: power sweep to CSV, then figures from the CSV.

Uses a deliberately small trial count so the demo finishes in about a
minute; the acceptance runs use 200 trials per point.
"""

import pathlib

from coopbeam import RunConfig, ScenarioConfig, run_sweep, write_csv

out_dir = pathlib.Path("demo_output")
out_dir.mkdir(exist_ok=True)
csv_path = out_dir / "power_sweep.csv"

cfg = RunConfig(
    scenario=ScenarioConfig(),
    sweep_name="power",
    sweep_values=[10.0, 20.0],
    trials=3,
    master_seed=42,
)
results = run_sweep(cfg)
write_csv(results, csv_path)
print(f"wrote {csv_path} ({len(results)} rows)")

try:
    from coopbeam_plots import render
except ImportError:
    print("coopbeam-plots not installed; skipping figures "
          "(pip install -e frontend)")
else:
    for kind in ("rate_vs_power", "ee_vs_power", "convergence"):
        out = out_dir / f"{kind}.png"
        render(csv_path, kind, out)
        print(f"wrote {out}")
