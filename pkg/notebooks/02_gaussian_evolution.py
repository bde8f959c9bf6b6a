"""
Closed-form displacement and squeezing
======================================

The vacuum evolves into a displaced squeezed state. Here we tabulate
|nu(t)| and |kappa(t)| for toy couplings, check the small-time series, and
look at the error ellipse of the covariance matrix.
"""

# %%
import math

import numpy as np

from optosqueeze import gaussian
from optosqueeze.system import DerivedCouplings

c = DerivedCouplings(omega_m=1.0, C_D=0.3, C_S=0.4)
t = np.linspace(0, 2 * math.pi / c.chi, 9)
nu = gaussian.displacement_nu(c, t)
kappa = gaussian.kappa_magnitude(c, t)
for ti, n, k in zip(t, nu, kappa):
    print(f"t = {ti:6.3f}   |nu| = {abs(n):.6f}   |kappa| = {k:.6f}")

# %% The same numbers from the symplectic propagator acting on the vacuum
nu2, cov = gaussian.vacuum_trajectory(c, t)
sq = [gaussian.squeeze_from_covariance(v).magnitude for v in cov]
print("max |nu| difference   ", np.max(np.abs(nu2 - nu)))
print("max |kappa| difference", np.max(np.abs(np.array(sq) - kappa)))

# %% Short times: the t^3 term of |nu| vanishes at C_S = -omega_m/8
for C_S in (0.4, -1 / 8):
    cc = DerivedCouplings(omega_m=1.0, C_D=0.3, C_S=C_S)
    ts = 1e-2 / cc.chi
    rel = abs(abs(gaussian.displacement_nu(cc, ts)) - cc.C_D * ts) / (cc.C_D * ts)
    print(f"C_S = {C_S:+.3f}: deviation from linear growth {rel:.2e}")

# %% At C_S = -omega_m the squeezing grows linearly, |kappa| = omega_m t
inv = DerivedCouplings(omega_m=1.0, C_D=0.3, C_S=-1.0)
print(gaussian.kappa_magnitude(inv, np.array([0.5, 1.0, 2.0])))

# %% Large squeezing: |nu| follows |C_D/chi sin chi t|
big = DerivedCouplings(omega_m=1.0, C_D=0.3, C_S=(1e6 - 1) / 2)
tt = np.linspace(0, 2 * math.pi / big.chi, 1001)
gap = np.abs(np.abs(gaussian.displacement_nu(big, tt)) - gaussian.displacement_strong_squeezing_envelope(big, tt))
print("omega_m/chi =", 1 / big.chi, " relative gap =", gap.max() / (big.C_D / big.chi))

# %% Error ellipse a quarter period in
g = gaussian.ellipse_geometry(cov[2])
print("tilt", g.tilt_angle, "major axis", g.major_axis_angle, "variances", g.principal_variances)
