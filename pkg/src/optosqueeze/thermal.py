"""
Thermal mirror in the dispersive (squeezing) potential with damping.

Dynamics of the position fluctuations, with the drive of the dissipative mode
switched off::

    dq/dt = p / m
    dp/dt = -m chi^2 q - gamma p + eps(t),    <eps(t) eps(t')> = S delta(t - t')

with ``gamma = D_m / m`` and ``S = D_m hbar omega_m (2 n_T + 1)``. The noise
intensity is the one for which the stationary variance of ``q`` equals
``(2 n_T + 1) hbar omega_m / (2 m chi^2)`` for every ``gamma``.

Fourier convention for the noise: with ``eps(w) = pi^{-1/2} int eps(t) e^{iwt} dt``
one gets ``<eps(w) eps(w')> = 2 S delta(w + w') = 2 D_m hbar omega_m (2 n_T + 1)
delta(w + w')``. The spectral density reported by :func:`noise_spectrum_check`
is the plain two-sided one, ``int <eps(t) eps(0)> e^{iwt} dt = S``.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg, signal

from .constants import HBAR, K_B
from .errors import RegimeError, StepSizeError


def bose_occupation(omega_m, temperature, hbar=HBAR, k_B=K_B):
    """Mean thermal phonon number ``1 / (exp(hbar omega_m / k_B T) - 1)``; 0 at T = 0."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0:
        return 0.0
    return 1.0 / math.expm1(hbar * omega_m / (k_B * temperature))


@dataclass(frozen=True)
class ThermalBath:
    """Bath seen by the mirror; ``temperature`` is ``nan`` when only ``n_T`` is known."""

    n_T: float
    temperature: float = math.nan

    def __post_init__(self):
        if not self.n_T >= 0:
            raise ValueError("n_T must be >= 0")

    @classmethod
    def at_temperature(cls, omega_m, temperature):
        return cls(bose_occupation(omega_m, temperature), temperature)


def _require_stable(couplings):
    if not couplings.omega_m + 2.0 * couplings.C_S > 0:
        raise RegimeError(
            f"stationary state requires omega_m + 2 C_S > 0; got C_S = {couplings.C_S!r}"
        )


def stationary_position_variance(couplings, bath, mass, hbar=HBAR, damping=None):
    """Equal-time position variance ``(2 n_T + 1) hbar omega_m / (2 m chi^2)`` [m^2].

    ``damping`` is only checked: a stationary state needs ``D_m > 0``, but the
    variance does not depend on it.

    Raises:
        RegimeError: if ``chi^2 <= 0``
    """
    _require_stable(couplings)
    if damping is not None and not damping > 0:
        raise ValueError("a stationary state requires damping > 0")
    return (2.0 * bath.n_T + 1.0) * hbar * couplings.omega_m / (2.0 * mass * couplings.chi_sq)


def ratio_to_db(R):
    """Squeezing in dB of a position-uncertainty ratio, ``-10 log10 R``."""
    return 0.0 - 10.0 * math.log10(R)


def ratio_to_db_variance(R):
    """Variance-based convention, ``-10 log10 R^2``."""
    return 0.0 - 20.0 * math.log10(R)


@dataclass(frozen=True)
class StationaryStatistics:
    """Stationary position noise relative to the ground state.

    ``squeezing_db`` applies ``-10 log10`` to the amplitude ratio ``R``;
    ``squeezing_db_variance`` is the usual variance-based figure, ``-10 log10 R^2``.
    ``R_strong_squeezing`` is the ``C_S >> omega_m`` limit
    ``sqrt((2 n_T + 1) omega_m / 2 C_S)``, which tends to
    ``sqrt(k_B T_e / hbar C_S)`` at high temperature.
    """

    n_T: float
    var_q: float
    R: float
    squeezing_db: float
    squeezing_db_variance: float
    R_strong_squeezing: float


def uncertainty_ratio(couplings, bath):
    """Return ``(R, squeezing_db)`` with ``R = sqrt((2 n_T + 1) omega_m / (omega_m + 2 C_S))``.

    Raises:
        RegimeError: if ``omega_m + 2 C_S <= 0``
    """
    _require_stable(couplings)
    w = couplings.omega_m
    R = math.sqrt((2.0 * bath.n_T + 1.0) * w / (w + 2.0 * couplings.C_S))
    return R, ratio_to_db(R)


def stationary_statistics(couplings, bath, mass, hbar=HBAR):
    var_q = stationary_position_variance(couplings, bath, mass, hbar)
    R, db = uncertainty_ratio(couplings, bath)
    C_S = couplings.C_S
    strong = math.sqrt((2.0 * bath.n_T + 1.0) * couplings.omega_m / (2.0 * C_S)) if C_S > 0 else math.nan
    return StationaryStatistics(bath.n_T, var_q, R, db, ratio_to_db_variance(R), strong)


@dataclass(frozen=True)
class LangevinConfig:
    """Settings of a stochastic run.

    Args:
        damping_gamma (float): momentum damping rate ``D_m / m`` [1/s]
        noise_strength (float): white-noise intensity ``S`` [N^2 s]
        seed (int): master seed; trajectory ``i`` uses ``default_rng([seed, i])``
        dt (float): maximum step [s]
        n_trajectories (int): ensemble size
    """

    damping_gamma: float
    noise_strength: float
    seed: int = 0
    dt: float = 1e-2
    n_trajectories: int = 1000

    def __post_init__(self):
        if self.damping_gamma < 0:
            raise ValueError("damping_gamma must be >= 0")
        if self.noise_strength < 0:
            raise ValueError("noise_strength must be >= 0")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.n_trajectories < 1:
            raise ValueError("n_trajectories must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def fluctuation_dissipation(cls, mass, omega_m, damping, n_T, hbar=HBAR, **kwargs):
        """Config whose noise matches damping ``D_m`` at occupation ``n_T``."""
        strength = damping * hbar * omega_m * (2.0 * n_T + 1.0)
        return cls(damping_gamma=damping / mass, noise_strength=strength, **kwargs)


def exact_step(couplings, mass, gamma, noise_strength, dt):
    """Transition matrix and noise covariance for one step of length ``dt``.

    The linear SDE ``dx = A x dt + dW``, ``x = (q, p)``, is integrated
    exactly: ``x -> Phi x + w`` with ``Phi = expm(A dt)`` and
    ``w ~ N(0, Sigma)``, ``Sigma = int_0^dt e^{As} Q e^{A^T s} ds`` obtained
    from the Van Loan block exponential.
    """
    A = np.array([[0.0, 1.0 / mass], [-mass * couplings.chi_sq, -gamma]])
    Q = np.array([[0.0, 0.0], [0.0, noise_strength]])
    block = np.zeros((4, 4))
    block[:2, :2] = -A
    block[:2, 2:] = Q
    block[2:, 2:] = A.T
    F = linalg.expm(block * dt)
    Phi = F[2:, 2:].T
    Sigma = Phi @ F[:2, 2:]
    Sigma = 0.5 * (Sigma + Sigma.T)
    return Phi, Sigma


def _noise_factor(Sigma):
    # lower-triangular L with L L^T = Sigma; Sigma is singular when S = 0
    if not np.any(Sigma):
        return np.zeros((2, 2))
    return linalg.cholesky(Sigma, lower=True)


@dataclass(frozen=True)
class LangevinEnsemble:
    """Sampled paths: ``q`` and ``p`` have shape ``(len(times), n_trajectories)``."""

    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    dt: float

    def stationary_variance(self):
        """Ensemble variance of ``q`` at the final time and its standard error."""
        qf = self.q[-1]
        var = float(np.mean(qf**2))
        return var, var * math.sqrt(2.0 / qf.size)


def _run_block(indices, seed, Phi, L, n_steps, record_steps, q0, p0, chunk):
    n = len(indices)
    rngs = [np.random.default_rng([seed, int(i)]) for i in indices]
    q = np.full(n, q0, dtype=float)
    p = np.full(n, p0, dtype=float)
    out_q = np.empty((len(record_steps), n))
    out_p = np.empty((len(record_steps), n))
    rec = 0
    if record_steps[0] == 0:
        out_q[0], out_p[0] = q, p
        rec = 1
    a, b, c, d = Phi[0, 0], Phi[0, 1], Phi[1, 0], Phi[1, 1]
    l00, l10, l11 = L[0, 0], L[1, 0], L[1, 1]
    z = np.empty((chunk, 2, n))
    step = 0
    while step < n_steps:
        k = min(chunk, n_steps - step)
        for j, rng in enumerate(rngs):
            z[:k, :, j] = rng.standard_normal((k, 2))
        for i in range(k):
            z1, z2 = z[i, 0], z[i, 1]
            q, p = a * q + b * p + l00 * z1, c * q + d * p + (l10 * z1 + l11 * z2)
            step += 1
            if rec < len(record_steps) and record_steps[rec] == step:
                out_q[rec], out_p[rec] = q, p
                rec += 1
    return out_q, out_p


def langevin_trajectories(
    config, couplings, mass, t_final, q0=0.0, p0=0.0, n_records=2, block_size=1024, workers=1
):
    """Simulate an ensemble of damped, noise-driven mirror trajectories.

    The step is shrunk to ``t_final / ceil(t_final / config.dt)`` so the grid
    ends exactly at ``t_final``. Each trajectory draws from its own generator,
    so the result is bit-identical for any ``block_size`` or ``workers``.

    Args:
        config (LangevinConfig): damping, noise, seed, step and ensemble size
        couplings (DerivedCouplings): sets the restoring rate ``chi``
        mass (float): mirror mass
        t_final (float): simulated time
        n_records (int): number of evenly spaced recorded times, including 0
            and ``t_final``
        block_size (int): trajectories per work unit
        workers (int): threads used to run blocks

    Raises:
        StepSizeError: unless ``dt < 0.01 min(2 pi / chi, 1 / gamma)``
        RegimeError: outside the bound-oscillator regime
    """
    chi = couplings.chi
    gamma = config.damping_gamma
    limit = 0.01 * min(2.0 * math.pi / chi, math.inf if gamma == 0 else 1.0 / gamma)
    if not config.dt < limit:
        raise StepSizeError(f"dt = {config.dt:g} must be below {limit:g}")
    if not t_final > 0:
        raise ValueError("t_final must be > 0")
    n_steps = math.ceil(t_final / config.dt)
    dt = t_final / n_steps
    n_records = max(2, min(n_records, n_steps + 1))
    record_steps = np.unique(np.round(np.linspace(0, n_steps, n_records)).astype(int))

    Phi, Sigma = exact_step(couplings, mass, gamma, config.noise_strength, dt)
    L = _noise_factor(Sigma)
    chunk = max(1, min(n_steps, 2**21 // max(1, min(block_size, config.n_trajectories))))

    idx = np.arange(config.n_trajectories)
    blocks = [idx[i : i + block_size] for i in range(0, len(idx), block_size)]

    def run(block):
        return _run_block(block, config.seed, Phi, L, n_steps, record_steps, q0, p0, chunk)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]
    q = np.concatenate([r[0] for r in results], axis=1)
    p = np.concatenate([r[1] for r in results], axis=1)
    return LangevinEnsemble(record_steps * dt, q, p, dt)


@dataclass(frozen=True)
class NoiseSpectrum:
    """Two-sided spectral density of the sampled force noise on an angular-frequency grid."""

    omega: np.ndarray
    density: np.ndarray
    expected: float

    @property
    def level(self):
        return float(np.mean(self.density))

    @property
    def max_relative_deviation(self):
        if self.expected == 0:
            return float(np.max(np.abs(self.density)))
        return float(np.max(np.abs(self.density / self.expected - 1.0)))


def sample_force_noise(config, n_samples, trajectory=0):
    """Step-averaged force samples ``eps_k ~ N(0, S / dt)`` from one trajectory's stream."""
    rng = np.random.default_rng([config.seed, trajectory])
    return math.sqrt(config.noise_strength / config.dt) * rng.standard_normal(n_samples)


def noise_spectrum_check(config, omega_grid, n_samples=2**20, nperseg=128):
    """Welch estimate of the force-noise spectrum at the angular frequencies ``omega_grid``.

    For white noise the two-sided density ``int <eps(t) eps(0)> e^{iwt} dt``
    equals the configured intensity ``S`` at every frequency below Nyquist.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if np.any(np.abs(omega_grid) >= math.pi / config.dt):
        raise ValueError("omega_grid must lie below the Nyquist frequency pi/dt")
    x = sample_force_noise(config, n_samples)
    f, pxx = signal.welch(
        x, fs=1.0 / config.dt, nperseg=nperseg, return_onesided=False, detrend=False, scaling="density"
    )
    order = np.argsort(f)
    density = np.interp(np.abs(omega_grid) / (2.0 * math.pi), f[order], pxx[order])
    return NoiseSpectrum(omega_grid, density, config.noise_strength)
