"""
Displacement and squeezing of a vibrating middle mirror coupled to two modes
of a high-finesse optical cavity.

Submodules:

* :mod:`~optosqueeze.system` - physical parameters to coupling constants
* :mod:`~optosqueeze.gaussian` - closed-form Gaussian evolution
* :mod:`~optosqueeze.fock` - truncated number-basis cross-check
* :mod:`~optosqueeze.thermal` - damping, thermal noise and stationary squeezing
* :mod:`~optosqueeze.config`, :mod:`~optosqueeze.reports`, :mod:`~optosqueeze.cli` - run files and output
"""
from .errors import (
    ConvergenceError,
    DegenerateCoupling,
    ImpureState,
    NotConverged,
    ParseError,
    RegimeError,
    StepSizeError,
    ToyScaleError,
    TruncationWarning,
    ValidationError,
)
from .system import (
    BaseRates,
    CavityGeometry,
    CouplingSigns,
    DerivedCouplings,
    MiddleMirror,
    Regime,
    base_rates,
    derive_couplings,
)
from .gaussian import (
    QuadratureState,
    displacement_nu,
    ellipse_geometry,
    evolve_gaussian,
    kappa_magnitude,
    squeeze_from_covariance,
    symplectic_propagator,
)
from .thermal import ThermalBath, LangevinConfig, langevin_trajectories, stationary_statistics
from .config import RunConfig, parse_config, load_config

__version__ = "0.1.0"
