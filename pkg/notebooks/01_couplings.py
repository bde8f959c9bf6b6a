"""
From cavity geometry to optomechanical couplings
================================================

Walk the parameter chain for the shipped ``fig2.cfg`` three-mirror cavity:
mode index, base rates, split mode frequencies, photon numbers and finally
the couplings C_D, C_S and the effective frequency chi.
"""

# %%
import math

from optosqueeze import load_config
from optosqueeze.system import base_rates, cavity_decay_rate, classify_regime

cfg = load_config("fig2.cfg")
geom, mirror = cfg.geometry(), cfg.mirror()
print("mode index n =", geom.mode_index)

# %% Base rates of the unperturbed cavity
base = base_rates(geom)
print(f"omega_n = {base.omega_n:.6e} rad/s   k_n = {base.k_n:.6e} 1/m   tau = {base.tau:.4e} s")
print(f"cavity decay rate = {cavity_decay_rate(geom):.4e} 1/s")

# %% Couplings
c = cfg.couplings()
print(f"xi_D/xi = {c.xi_D / base.xi:+.8f}   xi_S = {c.xi_S:.4e}")
print(f"n_alpha = {c.n_alpha:.4e}   n_beta = {c.n_beta:.4e}")
print(f"C_D = {c.C_D:.4e}   C_S = {c.C_S:.4e}   chi = {c.chi:.4e} rad/s")
print(f"|2 C_D/omega_m| = {abs(2 * c.C_D / c.omega_m):.3e}")
print(f"max |kappa| = asinh(C_S/chi) = {math.asinh(c.C_S / c.chi):.3f}")

# %% The sign of C_S decides the regime
for C_S in (c.C_S, -0.5 * c.omega_m, -c.omega_m):
    print(f"C_S = {C_S:+.3e}: {classify_regime(c.omega_m, C_S).value}")
