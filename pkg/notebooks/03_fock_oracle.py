"""
Checking the closed forms in a truncated Fock basis
===================================================

Diagonalise the Hamiltonian in a basis of N number states, propagate the
vacuum and compare the moments with the analytic displacement and squeezing.
"""

# %%
import math

import numpy as np

from optosqueeze import fock
from optosqueeze.errors import ToyScaleError
from optosqueeze.system import DerivedCouplings

c = DerivedCouplings(omega_m=1.0, C_D=0.3, C_S=0.4)
times = np.linspace(0, 4 * math.pi / c.chi, 200)

rep = fock.compare_with_closed_form(c, times, 80)
for name, value in rep.max_residuals.items():
    print(f"{name:13s} {value:.2e}")
print("passed:", rep.passed)

# %% How large must the basis be?
sweep = fock.truncation_convergence(c, times, [10, 20, 30, 40, 60, 80])
print("converged at N =", sweep.converged_N)
print("changes between successive N:", np.array(sweep.changes))

# %% The algebra of the squeezing generators survives truncation below the top two levels
print("commutator defect at N = 50:", fock.commutator_defect(50))

# %% Realistic couplings are far outside any Fock basis
big = DerivedCouplings(omega_m=1.0, C_D=1e4, C_S=0.4)
try:
    fock.check_toy_scale(big, times, 80)
except ToyScaleError as exc:
    print("refused:", exc)
