"""
Physical parameters of the three-mirror cavity and the coupling constants
derived from them.

The chain is::

    CavityGeometry, MiddleMirror
        -> BaseRates (omega_n, xi, k_n, tau)
        -> xi_D, xi_S, omega_D, omega_S, photon numbers
        -> DerivedCouplings (C_D, C_S, C_R, chi^2, regime)

All rates are angular frequencies in rad/s. Everything here is a pure
function of frozen dataclasses.
"""
import enum
import math
from dataclasses import dataclass, field

from .constants import C_LIGHT, HBAR
from .errors import DegenerateCoupling, RegimeError, ValidationError

#: relative band |C_S + omega_m/2| <= FREE_PARTICLE_RTOL * omega_m
FREE_PARTICLE_RTOL = 1e-9

_DENOMINATOR_FLOOR = 1e-14


def _check(cond, message):
    if not cond:
        raise ValidationError(message)


def _check_sign(value, name):
    if value not in (-1, 1):
        raise ValidationError(f"{name} must be -1 or +1, got {value!r}")


def mode_index_for(length, wavelength):
    """Longitudinal mode index closest to the laser wavelength.

    Picks the integer ``n`` minimising ``|n pi c / L - 2 pi c / lambda|``,
    i.e. ``round(2 L / lambda)``.
    """
    _check(length > 0, "length_L must be > 0")
    _check(wavelength > 0, "wavelength_lambda must be > 0")
    return max(1, int(round(2.0 * length / wavelength)))


@dataclass(frozen=True)
class CavityGeometry:
    """Cavity length, drive wavelength and input powers.

    Args:
        length (float): end-mirror separation ``L`` [m]
        wavelength (float): drive wavelength [m]
        end_mirror_transmissivity (float): power transmissivity of the input mirror
        power_D (float): input power of the dissipatively coupled mode [W]
        power_S (float): input power of the dispersively coupled mode [W]
        mode_index (int): longitudinal mode number; derived from the
            wavelength when omitted
    """

    length: float
    wavelength: float
    end_mirror_transmissivity: float
    power_D: float = 0.0
    power_S: float = 0.0
    mode_index: int = None

    def __post_init__(self):
        _check(self.length > 0, "length_L must be > 0")
        _check(self.wavelength > 0, "wavelength_lambda must be > 0")
        _check(
            0.0 < self.end_mirror_transmissivity < 1.0,
            "end_mirror_transmissivity must lie in (0, 1)",
        )
        _check(self.power_D >= 0, "input_power_D must be >= 0")
        _check(self.power_S >= 0, "input_power_S must be >= 0")
        if self.mode_index is None:
            object.__setattr__(self, "mode_index", mode_index_for(self.length, self.wavelength))
        _check(
            isinstance(self.mode_index, int) and self.mode_index > 0,
            "mode_index_n must be a positive integer",
        )


@dataclass(frozen=True)
class MiddleMirror:
    """The vibrating, partially transmitting middle mirror.

    ``damping`` is the friction constant ``D_m`` [kg/s]; the amplitude decay
    rate is ``damping / mass``.
    """

    mass: float
    omega_m: float
    transmissivity: float
    q0: float = 0.0
    damping: float = 0.0
    temperature: float = 0.0

    def __post_init__(self):
        _check(self.mass > 0, "mass_m must be > 0")
        _check(self.omega_m > 0, "omega_m must be > 0")
        _check(0.0 < self.transmissivity < 1.0, "transmissivity_T must lie in (0, 1)")
        _check(self.damping >= 0, "damping_Dm must be >= 0")
        _check(self.temperature >= 0, "temperature_Te must be >= 0")

    @property
    def zero_point_length(self):
        """Ground-state position spread ``sqrt(hbar / 2 m omega_m)`` [m]."""
        return math.sqrt(HBAR / (2.0 * self.mass * self.omega_m))


@dataclass(frozen=True)
class BaseRates:
    omega_n: float
    xi: float
    k_n: float
    tau: float


@dataclass(frozen=True)
class CouplingSigns:
    """Signs of ``xi_D`` and ``xi_S``.

    ``sign_S = -1`` selects an anti-trapping mode, ``+1`` a trapping mode.
    """

    sign_D: int = -1
    sign_S: int = 1

    def __post_init__(self):
        _check_sign(self.sign_D, "sign_D")
        _check_sign(self.sign_S, "sign_S")


class Regime(enum.Enum):
    BOUND_OSCILLATOR = "BoundOscillator"
    FREE_PARTICLE = "FreeParticle"
    INVERTED_OSCILLATOR = "InvertedOscillator"


def classify_regime(omega_m, C_S, rtol=FREE_PARTICLE_RTOL):
    """Classify the mirror dynamics from the dispersive shift ``C_S``.

    The free-particle point ``C_S = -omega_m / 2`` is widened to a band of
    relative half-width ``rtol`` since exact equality never happens in floats.
    """
    if abs(C_S + 0.5 * omega_m) <= rtol * omega_m:
        return Regime.FREE_PARTICLE
    if omega_m * (omega_m + 2.0 * C_S) > 0:
        return Regime.BOUND_OSCILLATOR
    return Regime.INVERTED_OSCILLATOR


@dataclass(frozen=True)
class DerivedCouplings:
    """Semiclassical coupling constants of the mirror Hamiltonian.

    ``C_D``, ``C_S``, ``C_R`` and ``omega_m`` are in rad/s and fully determine
    the mirror dynamics. The optical quantities (``xi_D`` ... ``n_beta``) are
    ``nan`` when the couplings were given directly, e.g. in natural units.
    """

    omega_m: float
    C_D: float
    C_S: float
    C_R: float = field(init=False)
    chi_sq: float = field(init=False)
    regime: Regime = field(init=False)
    xi_D: float = math.nan
    xi_S: float = math.nan
    omega_D: float = math.nan
    omega_S: float = math.nan
    n_alpha: float = math.nan
    n_beta: float = math.nan

    def __post_init__(self):
        _check(self.omega_m > 0, "omega_m must be > 0")
        _check(math.isfinite(self.C_D) and math.isfinite(self.C_S), "couplings must be finite")
        object.__setattr__(self, "C_R", self.C_S + self.omega_m)
        object.__setattr__(self, "chi_sq", self.omega_m * (self.omega_m + 2.0 * self.C_S))
        object.__setattr__(self, "regime", classify_regime(self.omega_m, self.C_S))

    @property
    def chi(self):
        """Positive oscillation rate ``sqrt(chi^2)``; bound regime only."""
        self.require_bound()
        return math.sqrt(self.chi_sq)

    def require_bound(self):
        if self.regime is not Regime.BOUND_OSCILLATOR:
            raise RegimeError(
                f"operation requires a bound oscillator (C_S > -omega_m/2); "
                f"got C_S = {self.C_S!r}, omega_m = {self.omega_m!r} ({self.regime.value})"
            )


def base_rates(geom):
    """Cavity mode frequency, coupling scale, wavenumber and round-trip time.

    Returns:
        BaseRates: ``omega_n = n pi c / L``, ``xi = omega_n / L``,
        ``k_n = omega_n / c`` and ``tau = 2 L / c``
    """
    _check(geom.length > 0, "length_L must be > 0")
    _check(geom.mode_index > 0, "mode_index_n must be > 0")
    omega_n = geom.mode_index * math.pi * C_LIGHT / geom.length
    return BaseRates(
        omega_n=omega_n,
        xi=omega_n / geom.length,
        k_n=omega_n / C_LIGHT,
        tau=2.0 * geom.length / C_LIGHT,
    )


def dissipative_coupling(base, mirror, sign_D=-1):
    """Linear (radiation-pressure) coupling ``xi_D`` [rad/(s m)].

    Raises:
        DegenerateCoupling: if ``1/(1-T) - cos^2(2 k_n q0)`` is not positive
    """
    _check_sign(sign_D, "sign_D")
    phase = 2.0 * base.k_n * mirror.q0
    denom = 1.0 / (1.0 - mirror.transmissivity) - math.cos(phase) ** 2
    if denom <= _DENOMINATOR_FLOOR:
        raise DegenerateCoupling(f"dissipative coupling denominator {denom!r} is not positive")
    return sign_D * abs(math.sin(phase) * base.xi / math.sqrt(denom))


def dispersive_coupling(base, mirror, sign_S=1):
    """Quadratic coupling ``xi_S`` [rad/(s m^2)]."""
    _check_sign(sign_S, "sign_S")
    T = mirror.transmissivity
    _check(0.0 < T < 1.0, "transmissivity_T must lie in (0, 1)")
    return sign_S * 0.5 * base.tau * base.xi**2 * math.sqrt((1.0 - T) / T)


def mode_frequencies(base, mirror, signs):
    """Frequencies ``(omega_D, omega_S)`` of the two driven cavity modes.

    The branch for each mode follows the sign of its coupling constant.
    """
    r = math.sqrt(1.0 - mirror.transmissivity)
    cos_phase = math.cos(2.0 * base.k_n * mirror.q0)
    if signs.sign_D < 0:
        omega_D = base.omega_n - (math.asin(r) - math.asin(r * cos_phase)) / base.tau
    else:
        omega_D = (
            base.omega_n
            + math.pi / base.tau
            - (math.asin(r) + math.asin(r * cos_phase)) / base.tau
        )
    if signs.sign_S < 0:
        omega_S = base.omega_n
    else:
        omega_S = base.omega_n + 2.0 * math.acos(r) / base.tau
    return omega_D, omega_S


def cavity_decay_rate(geom):
    """Energy decay rate ``c T_end / 2L`` [1/s] through the input mirror."""
    return C_LIGHT * geom.end_mirror_transmissivity / (2.0 * geom.length)


def intracavity_photon_number(geom, mode_frequency, power):
    """Steady-state photon number of a resonantly driven mode.

    Uses the single-port build-up ``n = 4 P / (hbar omega kappa)`` with
    ``kappa = c T_end / 2L``.

    Args:
        geom (CavityGeometry): cavity supplying the decay rate
        mode_frequency (float): angular frequency of the driven mode [rad/s]
        power (float): input power [W]
    """
    _check(power >= 0, "power must be >= 0")
    _check(mode_frequency > 0, "mode frequency must be > 0")
    return 4.0 * power / (HBAR * mode_frequency * cavity_decay_rate(geom))


def semiclassical_couplings(mirror, xi_D, xi_S, n_alpha, n_beta, omega_D=math.nan, omega_S=math.nan):
    """Couplings of the mirror once both optical modes are replaced by
    classical amplitudes with photon numbers ``n_alpha`` and ``n_beta``."""
    _check(n_alpha >= 0 and n_beta >= 0, "photon numbers must be >= 0")
    C_D = xi_D * n_alpha * mirror.zero_point_length
    C_S = HBAR * xi_S * n_beta / (mirror.mass * mirror.omega_m)
    return DerivedCouplings(
        omega_m=mirror.omega_m,
        C_D=C_D,
        C_S=C_S,
        xi_D=xi_D,
        xi_S=xi_S,
        omega_D=omega_D,
        omega_S=omega_S,
        n_alpha=n_alpha,
        n_beta=n_beta,
    )


def derive_couplings(geom, mirror, signs=CouplingSigns()):
    """Run the whole parameter chain from physical inputs to couplings."""
    base = base_rates(geom)
    xi_D = dissipative_coupling(base, mirror, signs.sign_D)
    xi_S = dispersive_coupling(base, mirror, signs.sign_S)
    omega_D, omega_S = mode_frequencies(base, mirror, signs)
    n_alpha = intracavity_photon_number(geom, omega_D, geom.power_D)
    n_beta = intracavity_photon_number(geom, omega_S, geom.power_S)
    return semiclassical_couplings(mirror, xi_D, xi_S, n_alpha, n_beta, omega_D, omega_S)
