"""
Thermal squeezing of the mirror position
========================================

With a damped, thermally driven mirror the position variance settles to
(2 n_T + 1) hbar omega_m / (2 m chi^2). We compare it with the ground state
and with a Monte-Carlo ensemble of exact-update Langevin trajectories.
"""

# %%
import numpy as np

from optosqueeze import load_config, thermal
from optosqueeze.system import DerivedCouplings

cfg = load_config("fig2.cfg")
stats = thermal.stationary_statistics(cfg.couplings(), cfg.bath(), cfg.mass)
print(f"n_T = {stats.n_T:.4e}   R = {stats.R:.3f}   ({stats.squeezing_db:.2f} dB)")

# %% Squeezing in dB for a few ratios
for R in (1.0, 0.15, np.exp(-4)):
    print(f"R = {R:.4f}: {thermal.ratio_to_db(R):6.2f} dB, variance convention {thermal.ratio_to_db_variance(R):6.2f} dB")

# %% Monte-Carlo in natural units: omega_m = 1, chi = 2, ground-state bath
c = DerivedCouplings(omega_m=1.0, C_D=0.0, C_S=1.5)
lc = thermal.LangevinConfig.fluctuation_dissipation(1.0, 1.0, 0.5, 0.0, hbar=1.0, seed=1, dt=0.01, n_trajectories=2000)
ens = thermal.langevin_trajectories(lc, c, 1.0, 30.0)
var, err = ens.stationary_variance()
print(f"MC variance {var:.4f} +- {err:.4f}, closed form {thermal.stationary_position_variance(c, thermal.ThermalBath(0.0), 1.0, 1.0):.4f}")

# %% The sampled force is white with two-sided density S
psd = thermal.noise_spectrum_check(lc, np.linspace(-200, 200, 9), n_samples=2**18)
print(f"S = {lc.noise_strength:.3f}, estimated level {psd.level:.3f}, max deviation {psd.max_relative_deviation:.2%}")
