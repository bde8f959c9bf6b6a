"""
Brute-force check of the Gaussian formulas in a truncated number basis.

The semiclassical Hamiltonian is written as a banded real-symmetric matrix
(units of hbar, so entries are rates in rad/s), diagonalised once, and the
vacuum is propagated exactly to every requested time. Moments of the
resulting Fock states are then compared against :mod:`optosqueeze.gaussian`.

This only works when the state fits in the basis, i.e. at "toy" scale with a
few tens of phonons; realistic mirror parameters are refused outright.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import gaussian
from .errors import ConvergenceError, NotConverged, ToyScaleError, TruncationWarning

TAIL_FRACTION = 0.1
TAIL_TOL = 1e-8
ORACLE_TOL = 1e-8
RESIDUAL_RTOL = 1e-8


def _check_dim(N):
    if int(N) != N or N < 4:
        raise ValueError(f"truncation must be an integer >= 4, got {N!r}")
    return int(N)


def annihilation(N):
    """Truncated lowering operator ``c`` with ``c|n> = sqrt(n)|n-1>``."""
    N = _check_dim(N)
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1)


def two_photon_operators(N):
    """``(K_0, K_minus, K_plus)`` of the two-photon algebra, truncated to N levels.

    ``K_0 = (c^dag c + c c^dag)/4``, ``K_- = c^2/2``, ``K_+ = (c^dag)^2/2``.
    ``c c^dag`` is taken as ``c^dag c + 1`` so ``K_0`` is exact on every level.
    """
    c = annihilation(N)
    n = np.arange(N, dtype=float)
    K0 = np.diag(0.5 * n + 0.25)
    Km = 0.5 * (c @ c)
    return K0, Km, Km.T.copy()


def commutator_defect(N):
    """Largest entry of ``[K_-, K_+] - 2 K_0`` on the lowest ``N - 2`` levels.

    Truncation spoils the algebra only on the top two levels.
    """
    K0, Km, Kp = two_photon_operators(N)
    comm = Km @ Kp - Kp @ Km
    block = slice(0, N - 2)
    return float(np.max(np.abs(comm[block, block] - 2.0 * K0[block, block])))


def build_hamiltonian(couplings, N):
    """Truncated matrix of ``H/hbar`` in the number basis.

    Nonzero entries: ``H[n,n] = C_R (n + 1/2)``, ``H[n,n+1] = C_D sqrt(n+1)``,
    ``H[n,n+2] = (C_S/2) sqrt((n+1)(n+2))`` and their transposes.

    Raises:
        ValueError: if ``N < 4``
    """
    N = _check_dim(N)
    n = np.arange(N, dtype=float)
    H = np.diag(couplings.C_R * (n + 0.5))
    off1 = couplings.C_D * np.sqrt(n[:-1] + 1.0)
    off2 = 0.5 * couplings.C_S * np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0))
    H += np.diag(off1, 1) + np.diag(off1, -1)
    H += np.diag(off2, 2) + np.diag(off2, -2)
    return H


def fock_state(N, n=0):
    """Number state ``|n>`` in an N-level basis."""
    psi = np.zeros(_check_dim(N), dtype=complex)
    psi[n] = 1.0
    return psi


class SpectralPropagator:
    """``exp(-i H t)`` for a fixed Hermitian ``H`` via one eigendecomposition.

    Args:
        H (array): Hermitian matrix in rad/s
        rtol (float): bound on ``||H V - V diag(w)|| / ||H||``

    Raises:
        ConvergenceError: if the decomposition residual exceeds ``rtol``
    """

    def __init__(self, H, rtol=RESIDUAL_RTOL):
        H = np.asarray(H)
        w, V = np.linalg.eigh(H)
        scale = np.linalg.norm(H)
        residual = np.linalg.norm(H @ V - V * w)
        if scale > 0 and residual > rtol * scale:
            raise ConvergenceError(f"eigendecomposition residual {residual:.3e} exceeds {rtol:g}*||H||")
        self.H = H
        self.energies = w
        self.modes = V

    def evolve(self, psi, times):
        """States at each of ``times``; returns shape ``(len(times), N)``."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        amps = self.modes.conj().T @ np.asarray(psi, dtype=complex)
        phases = np.exp(-1j * np.outer(times, self.energies))
        return (phases * amps) @ self.modes.T

    def energy(self, states):
        states = np.asarray(states)
        return np.real(np.einsum("...i,ij,...j->...", states.conj(), self.H, states))


def propagate(state, H, t):
    """Single-time exact evolution ``exp(-i H t) state``."""
    return SpectralPropagator(H).evolve(state, [t])[0]


@dataclass(frozen=True)
class MomentSet:
    """Low-order moments of one or many Fock states.

    Each field is a scalar for a single state or an array over a batch.
    """

    mean_c: complex
    var_X: float
    var_Y: float
    cov_XY: float
    mean_n: float
    norm: float
    norm_tail: float

    @property
    def cov(self):
        return np.array([[self.var_X, self.cov_XY], [self.cov_XY, self.var_Y]])

    @property
    def uncertainty_product(self):
        return self.var_X * self.var_Y - self.cov_XY**2


def moments(states, warn=True):
    """Quadrature moments of a state vector or a batch of them.

    ``<c> = sum sqrt(n+1) a_n^* a_{n+1}``, ``<c^2>`` and ``<c^dag c>`` are the
    analogous bilinear sums. ``norm_tail`` is the probability in the top 10%
    of the basis.

    Warns:
        TruncationWarning: if any ``norm_tail`` exceeds 1e-8
    """
    a = np.asarray(states, dtype=complex)
    N = a.shape[-1]
    n = np.arange(N, dtype=float)
    prob = np.abs(a) ** 2
    s1 = np.sqrt(n[1:])
    s2 = np.sqrt(n[1:-1] * n[2:])
    c1 = np.sum(s1 * a[..., :-1].conj() * a[..., 1:], axis=-1)
    c2 = np.sum(s2 * a[..., :-2].conj() * a[..., 2:], axis=-1)
    nbar = np.sum(n * prob, axis=-1)
    norm = np.sum(prob, axis=-1)
    k = max(1, int(math.ceil(TAIL_FRACTION * N)))
    tail = np.sum(prob[..., N - k:], axis=-1)

    mx, my = c1.real, c1.imag
    var_X = 0.25 * (2.0 * c2.real + 2.0 * nbar + norm) - mx**2
    var_Y = 0.25 * (-2.0 * c2.real + 2.0 * nbar + norm) - my**2
    cov_XY = 0.5 * c2.imag - mx * my
    if warn and np.any(tail > TAIL_TOL):
        warnings.warn(
            f"{float(np.max(tail)):.2e} of the probability sits in the top {k} of {N} levels",
            TruncationWarning,
            stacklevel=2,
        )
    out = [c1, var_X, var_Y, cov_XY, nbar, norm, tail]
    if a.ndim == 1:
        out = [x.item() for x in out]
    return MomentSet(*out)


def predicted_occupation(couplings, times):
    """Largest ``|nu|^2 + sinh^2|kappa|`` over ``times``, the vacuum's mean phonon number."""
    times = np.asarray(times, dtype=float)
    nu = gaussian.displacement_nu(couplings, times)
    kappa = gaussian.kappa_magnitude(couplings, times)
    return float(np.max(np.abs(nu) ** 2 + np.sinh(kappa) ** 2))


def check_toy_scale(couplings, times, N):
    """Refuse parameters whose predicted occupation exceeds ``N / 4``."""
    occ = predicted_occupation(couplings, times)
    if occ > N / 4:
        raise ToyScaleError(
            f"predicted <n> = {occ:.3e} exceeds N/4 = {N / 4:g}; the truncated number basis "
            f"cannot represent this state (use the closed-form evolution instead)"
        )
    return occ


@dataclass(frozen=True)
class OracleReport:
    """Per-time residuals between the Fock evolution and the closed forms."""

    N: int
    times: np.ndarray
    displacement_residual: np.ndarray
    kappa_residual: np.ndarray
    purity_residual: np.ndarray
    norm_residual: np.ndarray
    energy_drift: np.ndarray
    norm_tail: np.ndarray
    tol: float = ORACLE_TOL

    @property
    def max_residuals(self):
        return {
            "displacement": float(np.max(self.displacement_residual)),
            "kappa": float(np.max(self.kappa_residual)),
            "purity": float(np.max(self.purity_residual)),
            "norm": float(np.max(self.norm_residual)),
            "energy": float(np.max(self.energy_drift)),
            "tail": float(np.max(self.norm_tail)),
        }

    @property
    def passed(self):
        r = self.max_residuals
        return (
            r["displacement"] < self.tol
            and r["kappa"] < self.tol
            and r["purity"] < self.tol
            and r["tail"] < TAIL_TOL
        )


def compare_with_closed_form(couplings, times, N, tol=ORACLE_TOL):
    """Evolve the vacuum in an N-level basis and compare with the Gaussian
    results at every time.

    The squeeze magnitude is taken from the oracle covariance and compared
    through ``sinh|kappa|`` against ``|C_S/chi| |sin chi t|``.

    Raises:
        ToyScaleError: if the state would not fit comfortably in the basis
        RegimeError: outside the bound-oscillator regime
    """
    N = _check_dim(N)
    times = np.asarray(times, dtype=float)
    couplings.require_bound()
    check_toy_scale(couplings, times, N)

    prop = SpectralPropagator(build_hamiltonian(couplings, N))
    psi0 = fock_state(N)
    states = prop.evolve(psi0, times)
    m = moments(states, warn=False)

    nu = gaussian.displacement_nu(couplings, times)
    chi = couplings.chi
    sinh_kappa_closed = abs(couplings.C_S / chi) * np.abs(np.sin(chi * times))
    sinh_kappa_oracle = np.array(
        [math.sinh(gaussian.squeeze_from_covariance(cov, rtol=1e-6).magnitude) for cov in _covs(m)]
    )
    e0 = prop.energy(psi0)
    return OracleReport(
        N=N,
        times=times,
        displacement_residual=np.abs(m.mean_c - nu),
        kappa_residual=np.abs(sinh_kappa_oracle - sinh_kappa_closed),
        purity_residual=np.abs(m.uncertainty_product - gaussian.PURE_DET),
        norm_residual=np.abs(m.norm - 1.0),
        energy_drift=np.abs(prop.energy(states) - e0) / max(abs(e0), np.finfo(float).tiny),
        norm_tail=m.norm_tail,
        tol=tol,
    )


def _covs(m):
    return np.stack(
        [np.stack([m.var_X, m.cov_XY], axis=-1), np.stack([m.cov_XY, m.var_Y], axis=-1)], axis=-2
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of a truncation sweep.

    ``changes[i]`` is the max-over-time change of any observable between
    ``N_list[i]`` and ``N_list[i + 1]``; ``tails[i]`` the largest tail mass
    at ``N_list[i]``.
    """

    N_list: tuple
    changes: tuple
    tails: tuple
    converged_N: int
    tol: float


def truncation_convergence(couplings, times, N_list, tol=TAIL_TOL):
    """Sweep the basis size and find the smallest converged truncation.

    ``N_list[i]`` counts as converged when its tail mass is below ``tol`` and
    its observables differ by less than ``tol`` from the next entry (the
    previous entry for the last one). Observables are ``<c>``, the three
    covariance entries and ``<n>``.

    Raises:
        NotConverged: if the largest N fails the criteria
    """
    N_list = [_check_dim(N) for N in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly increasing")
    times = np.asarray(times, dtype=float)

    obs, tails = [], []
    for N in N_list:
        states = SpectralPropagator(build_hamiltonian(couplings, N)).evolve(fock_state(N), times)
        m = moments(states, warn=False)
        obs.append(np.stack([m.mean_c.real, m.mean_c.imag, m.var_X, m.var_Y, m.cov_XY, m.mean_n]))
        tails.append(float(np.max(m.norm_tail)))

    changes = [float(np.max(np.abs(b - a))) for a, b in zip(obs, obs[1:])]

    def ok(i):
        if len(N_list) == 1:
            return tails[i] < tol
        change = changes[i] if i < len(changes) else changes[-1]
        return change < tol and tails[i] < tol

    if not ok(len(N_list) - 1):
        raise NotConverged(
            f"N = {N_list[-1]} not converged: tail {tails[-1]:.2e}, "
            f"change {changes[-1] if changes else float('nan'):.2e} (tol {tol:g})"
        )
    converged = next(N for i, N in enumerate(N_list) if ok(i))
    return ConvergenceReport(tuple(N_list), tuple(changes), tuple(tails), converged, tol)
