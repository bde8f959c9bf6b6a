"""
Closed-form Gaussian dynamics of the mirror under

    H / hbar = C_D (c + c^dag) + C_R (c^dag c + 1/2) + (C_S / 2) (c^2 + c^dag^2)

in the quadratures ``X = (c + c^dag)/2`` and ``Y = (c - c^dag)/2i``. The
Heisenberg equations ``dX/dt = omega_m Y``, ``dY/dt = -C_D - (chi^2/omega_m) X``
are linear, so a Gaussian state stays Gaussian and is fully described by its
mean vector and 2x2 covariance. Vacuum has ``cov = I/4``.

Time arguments may be scalars or numpy arrays; outputs broadcast accordingly.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ImpureState
from .system import Regime

VACUUM_VARIANCE = 0.25
PURE_DET = 1.0 / 16.0


def _scalar_or_array(x):
    return x.item() if np.ndim(x) == 0 else x


def displacement_nu(couplings, t):
    """Complex displacement amplitude of the evolution from rest.

    ``nu(t) = (C_D/chi) [(omega_m/chi)(cos chi t - 1) - i sin chi t]``, which
    equals ``<c>(t)`` for a mirror starting at the origin of phase space.

    Raises:
        RegimeError: outside the bound-oscillator regime
    """
    chi = couplings.chi
    t = np.asarray(t, dtype=float)
    wt = chi * t
    nu = (couplings.C_D / chi) * ((couplings.omega_m / chi) * (np.cos(wt) - 1.0) - 1j * np.sin(wt))
    return _scalar_or_array(nu)


def displacement_series(couplings, t):
    """Small-time expansion of ``|nu|`` through third order in ``t``.

    Valid for ``t << 1/chi``; the caller is responsible for staying there.
    """
    t = np.asarray(t, dtype=float)
    w = couplings.omega_m
    val = couplings.C_D * (t - (w / 3.0) * (w / 8.0 + couplings.C_S) * t**3)
    return _scalar_or_array(np.abs(val))


def displacement_free_envelope(couplings, t):
    """``|2 C_D / omega_m sin(omega_m t / 2)|``, exact for ``C_S = 0``."""
    t = np.asarray(t, dtype=float)
    w = couplings.omega_m
    return _scalar_or_array(np.abs(2.0 * couplings.C_D / w * np.sin(0.5 * w * t)))


def displacement_strong_squeezing_envelope(couplings, t):
    """``|C_D / chi sin chi t|``, the limit of ``|nu|`` as ``omega_m/chi -> 0``.

    Note the prefactor is ``C_D/chi``: the real part of ``nu`` is suppressed by
    ``omega_m/chi`` and the imaginary part has amplitude ``C_D/chi``.
    """
    chi = couplings.chi
    t = np.asarray(t, dtype=float)
    return _scalar_or_array(np.abs(couplings.C_D / chi * np.sin(chi * t)))


def _sin_over_chi(couplings, t):
    # sin(chi t)/chi continued through chi^2 = 0 to sinh(|chi| t)/|chi|
    chi_sq = couplings.chi_sq
    if couplings.regime is Regime.FREE_PARTICLE:
        return t
    if chi_sq > 0:
        chi = math.sqrt(chi_sq)
        return np.sin(chi * t) / chi
    chi = math.sqrt(-chi_sq)
    return np.sinh(chi * t) / chi


def kappa_magnitude(couplings, t):
    """Magnitude of the squeeze parameter, ``|asinh((C_S/chi) sin chi t)|``.

    Defined in every regime: for ``chi^2 <= 0`` the ratio ``sin(chi t)/chi``
    is analytically continued to ``sinh(|chi| t)/|chi|`` (or ``t`` at the
    free-particle point). At ``C_S = -omega_m`` this gives ``omega_m t``.
    """
    t = np.asarray(t, dtype=float)
    return _scalar_or_array(np.abs(np.arcsinh(couplings.C_S * _sin_over_chi(couplings, t))))


def kappa_series(couplings, t):
    """Small-time expansion ``|C_S [t - (omega_m + C_S)^2 t^3 / 6]|``."""
    t = np.asarray(t, dtype=float)
    C_S = couplings.C_S
    return _scalar_or_array(np.abs(C_S * (t - (couplings.omega_m + C_S) ** 2 / 6.0 * t**3)))


def symplectic_propagator(couplings, t):
    """Heisenberg propagator ``M(t)`` acting on ``(X, Y)``.

    ``M = [[cos chi t, (omega_m/chi) sin chi t], [-(chi/omega_m) sin chi t, cos chi t]]``

    Returns:
        array: shape ``(2, 2)`` for scalar ``t``, ``(..., 2, 2)`` otherwise
    """
    chi = couplings.chi
    w = couplings.omega_m
    t = np.asarray(t, dtype=float)
    c, s = np.cos(chi * t), np.sin(chi * t)
    M = np.empty(t.shape + (2, 2))
    M[..., 0, 0] = c
    M[..., 0, 1] = (w / chi) * s
    M[..., 1, 0] = -(chi / w) * s
    M[..., 1, 1] = c
    return M


@dataclass(frozen=True)
class QuadratureState:
    """Gaussian state of the mirror: means ``(<X>, <Y>)`` and covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        if not np.allclose(cov, cov.T, rtol=1e-12, atol=0):
            raise ValueError("covariance must be symmetric")
        if cov[0, 0] <= 0 or np.linalg.det(cov) <= 0:
            raise ValueError("covariance must be positive definite")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def vacuum(cls):
        return cls(np.zeros(2), VACUUM_VARIANCE * np.eye(2))

    @classmethod
    def coherent(cls, alpha):
        return cls([alpha.real, alpha.imag], VACUUM_VARIANCE * np.eye(2))

    @property
    def mean_c(self):
        """``<c> = <X> + i <Y>``."""
        return complex(self.mean[0], self.mean[1])


def evolve_gaussian(initial, couplings, t):
    """Evolve a Gaussian state for a time ``t`` (scalar).

    The map is affine: ``mean -> M mean + (Re nu, Im nu)`` and
    ``cov -> M cov M^T``.
    """
    M = symplectic_propagator(couplings, float(t))
    nu = displacement_nu(couplings, float(t))
    mean = M @ initial.mean + np.array([nu.real, nu.imag])
    cov = M @ initial.cov @ M.T
    # restore exact symmetry lost to rounding
    cov = 0.5 * (cov + cov.T)
    return QuadratureState(mean, cov)


def vacuum_trajectory(couplings, times):
    """Means and covariances of the vacuum evolved over a grid of times.

    Returns:
        tuple[array, array]: ``mean_c`` of shape ``(n,)`` (complex) and
        ``cov`` of shape ``(n, 2, 2)``
    """
    times = np.asarray(times, dtype=float)
    M = symplectic_propagator(couplings, times)
    cov = VACUUM_VARIANCE * np.einsum("...ij,...kj->...ik", M, M)
    return np.asarray(displacement_nu(couplings, times)), cov


@dataclass(frozen=True)
class SqueezeParameter:
    """Squeeze parameter ``kappa = magnitude * exp(i phase)``."""

    magnitude: float
    phase: float

    @property
    def value(self):
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))


def squeeze_from_covariance(cov, rtol=1e-6):
    """Extract the squeeze parameter of a pure Gaussian state.

    With principal variances ``v_max >= v_min`` the magnitude is
    ``log(v_max / v_min) / 4``. The phase follows the convention
    ``S(kappa) = exp((kappa^* c^2 - kappa c^dag^2)/2)``, for which
    ``<c^2> - <c>^2 = -exp(i phase) sinh|kappa| cosh|kappa|``; it is reported
    as 0 when the state is not squeezed.

    Args:
        cov (array): 2x2 quadrature covariance
        rtol (float): allowed relative deviation of ``det(cov)`` from 1/16

    Raises:
        ImpureState: if the determinant is off by more than ``rtol``
    """
    cov = np.asarray(cov, dtype=float)
    vx, vy, cxy = cov[0, 0], cov[1, 1], 0.5 * (cov[0, 1] + cov[1, 0])
    det = vx * vy - cxy * cxy
    if abs(det - PURE_DET) > rtol * PURE_DET:
        raise ImpureState(f"det(cov) = {det!r}, expected 1/16 for a pure state")
    v_min, v_max = _principal_variances(vx, vy, cxy)
    magnitude = 0.25 * math.log(v_max / v_min)
    anomalous = complex(vx - vy, 2.0 * cxy)
    phase = 0.0 if anomalous == 0 else math.atan2(-anomalous.imag, -anomalous.real)
    return SqueezeParameter(magnitude, phase)


def _principal_variances(vx, vy, cxy):
    mid = 0.5 * (vx + vy)
    rad = math.hypot(0.5 * (vx - vy), cxy)
    v_max = mid + rad
    # v_min via the determinant avoids cancellation for strong squeezing
    v_min = (vx * vy - cxy * cxy) / v_max
    return v_min, v_max


@dataclass(frozen=True)
class EllipseGeometry:
    """Orientation and size of the 1-sigma error ellipse.

    ``tilt_angle`` is the angle of the principal axes modulo pi/2, folded into
    ``(-pi/4, pi/4]``, so an ellipse aligned with X and Y has tilt 0 whichever
    quadrature is squeezed. ``major_axis_angle`` keeps the direction of the
    anti-squeezed axis in ``(-pi/2, pi/2]``.
    """

    tilt_angle: float
    major_axis_angle: float
    principal_variances: tuple

    @property
    def squeezed_variance(self):
        return self.principal_variances[0]


def ellipse_geometry(cov):
    """Error-ellipse orientation and principal variances (ascending)."""
    cov = np.asarray(cov, dtype=float)
    vx, vy, cxy = cov[0, 0], cov[1, 1], 0.5 * (cov[0, 1] + cov[1, 0])
    if vx == vy and cxy == 0:
        major = 0.0
    else:
        major = 0.5 * math.atan2(2.0 * cxy, vx - vy)
        if major <= -math.pi / 2:
            major += math.pi
    tilt = major
    if tilt > math.pi / 4:
        tilt -= math.pi / 2
    elif tilt <= -math.pi / 4:
        tilt += math.pi / 2
    return EllipseGeometry(tilt, major, _principal_variances(vx, vy, cxy))
