"""Drop a default network, inspect the geometry and the channel statistics.

Shows the uniform BS/user layout, the clustered-ray channel draw, and how
large-scale pathloss dominates the per-link gain spread.
"""

import numpy as np

from coopbeam import ScenarioConfig, array_response, generate_scenario, \
    pathloss_db

rng = np.random.default_rng(7)
cfg = ScenarioConfig()
scn, channels = generate_scenario(cfg, rng)

print(f"network: L={scn.L} BSs, K={scn.K} users, "
      f"N_T={scn.N_T} antennas, N_RF={scn.N_RF} chains")
print(f"budget per BS: {scn.P_max:.1f} mW, "
      f"noise power {scn.sigma2[0]:.3g} mW per user")

print("\nper-link channel gains in dB (rows: BS, cols: user)")
gains_db = 20.0 * np.log10(np.linalg.norm(channels.h, axis=2))
with np.printoptions(precision=1, suppress=True):
    print(gains_db)

# pathloss at reference distances, shadowing disabled for a clean curve
for d in (10.0, 50.0, 100.0, 250.0):
    pl = pathloss_db(d, rng, sigma_c_db2=0.0)
    print(f"pathloss at {d:6.1f} m: {pl:6.1f} dB")

# the steering vector has constant-modulus entries and unit norm
a = array_response(np.deg2rad(30.0), scn.N_T, scn.d_over_lambda)
print(f"\nsteering vector: |a_i| = {np.abs(a[0]):.4f} "
      f"(= 1/sqrt(N_T)), ||a||^2 = {np.vdot(a, a).real:.4f}")
