"""Physical constants (CODATA 2018, SI units)."""

#: speed of light in vacuum [m/s], exact
C_LIGHT = 299_792_458.0
#: reduced Planck constant [J s]
HBAR = 1.054_571_817e-34
#: Boltzmann constant [J/K], exact
K_B = 1.380_649e-23
