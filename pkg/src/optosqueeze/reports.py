"""
Tabulated results for each CLI subcommand, plus CSV/JSON writers.

A table is a ``(columns, rows)`` pair; a report is an ordered list of
``(key, value)`` pairs. Numbers are written with 17 significant digits so
outputs round-trip exactly and are byte-identical between runs.
"""
import json
import math

import numpy as np

from . import fock, gaussian, thermal
from .errors import RegimeError
from .system import base_rates

TRACE_COLUMNS = ("t", "abs_nu", "re_nu", "im_nu", "abs_kappa", "tilt_angle", "var_X", "var_Y", "cov_XY")
FIG2_COLUMNS = ("t", "abs_nu", "re_nu", "im_nu")
FIG3_COLUMNS = ("t", "abs_kappa", "var_X", "var_Y")
ORACLE_COLUMNS = ("t", "displacement_residual", "kappa_residual", "purity_residual", "norm_tail")


def derive_report(cfg):
    """Base rates, couplings and the dimensionless ratios of a configuration."""
    couplings = cfg.couplings()
    out = [("units", cfg.units)]
    if not cfg.natural:
        geom = cfg.geometry()
        base = base_rates(geom)
        out += [
            ("mode_index", geom.mode_index),
            ("omega_n", base.omega_n),
            ("xi", base.xi),
            ("k_n", base.k_n),
            ("tau", base.tau),
            ("xi_D", couplings.xi_D),
            ("xi_S", couplings.xi_S),
            ("omega_D", couplings.omega_D),
            ("omega_S", couplings.omega_S),
            ("n_alpha", couplings.n_alpha),
            ("n_beta", couplings.n_beta),
        ]
    out += [
        ("omega_m", couplings.omega_m),
        ("C_D", couplings.C_D),
        ("C_S", couplings.C_S),
        ("C_R", couplings.C_R),
        ("chi_sq", couplings.chi_sq),
        ("regime", couplings.regime.value),
        ("two_C_D_over_omega_m", 2.0 * couplings.C_D / couplings.omega_m),
    ]
    if couplings.chi_sq > 0:
        chi = math.sqrt(couplings.chi_sq)
        out += [
            ("chi", chi),
            ("period", 2.0 * math.pi / chi),
            ("two_C_D_over_chi", 2.0 * couplings.C_D / chi),
            ("max_abs_kappa", abs(math.asinh(couplings.C_S / chi))),
        ]
    return out


def evolve_trace(cfg, couplings=None):
    """Vacuum trajectory on the configured grid as a TRACE_COLUMNS table."""
    couplings = couplings or cfg.couplings()
    couplings.require_bound()
    times = cfg.times(couplings)
    nu, cov = gaussian.vacuum_trajectory(couplings, times)
    kappa = gaussian.kappa_magnitude(couplings, times)
    tilt = [gaussian.ellipse_geometry(c).tilt_angle for c in cov]
    cols = [times, np.abs(nu), nu.real, nu.imag, kappa, tilt, cov[:, 0, 0], cov[:, 1, 1], cov[:, 0, 1]]
    return TRACE_COLUMNS, list(zip(*cols))


def figure_tables(cfg):
    """Data behind the displacement and squeezing figures."""
    couplings = cfg.couplings()
    couplings.require_bound()
    times = cfg.times(couplings)
    nu, cov = gaussian.vacuum_trajectory(couplings, times)
    kappa = gaussian.kappa_magnitude(couplings, times)
    fig2 = (FIG2_COLUMNS, list(zip(times, np.abs(nu), nu.real, nu.imag)))
    fig3 = (FIG3_COLUMNS, list(zip(times, kappa, cov[:, 0, 0], cov[:, 1, 1])))
    return {"fig2_displacement": fig2, "fig3_squeezing": fig3}


def oracle_report(cfg):
    """Run the truncation sweep and the Fock/closed-form comparison.

    Returns:
        tuple: summary pairs, residual table and the OracleReport

    Raises:
        ToyScaleError: for parameters beyond the largest basis in ``N_list``
        NotConverged: if the largest basis fails the sweep
    """
    couplings = cfg.couplings()
    couplings.require_bound()
    times = cfg.times(couplings)
    n_max = cfg.N_list[-1]
    fock.check_toy_scale(couplings, times, n_max)
    sweep = fock.truncation_convergence(couplings, times, cfg.N_list)
    rep = fock.compare_with_closed_form(couplings, times, n_max)
    summary = [("N_list", " ".join(str(n) for n in cfg.N_list)), ("converged_N", sweep.converged_N)]
    summary += [(f"sweep_change_{a}_{b}", c) for a, b, c in zip(cfg.N_list, cfg.N_list[1:], sweep.changes)]
    summary += [("N_compare", rep.N)]
    summary += [(f"max_{k}_residual", v) for k, v in rep.max_residuals.items()]
    summary += [("tolerance", rep.tol), ("status", "PASS" if rep.passed else "FAIL")]
    table = (
        ORACLE_COLUMNS,
        list(zip(times, rep.displacement_residual, rep.kappa_residual, rep.purity_residual, rep.norm_tail)),
    )
    return summary, table, rep


def default_dt(couplings, gamma):
    limit = min(2.0 * math.pi / couplings.chi, math.inf if gamma == 0 else 1.0 / gamma)
    return 0.005 * limit


def thermal_report(cfg, seed=None):
    """Stationary statistics, and a Monte-Carlo comparison when ``n_trajectories > 0``."""
    couplings = cfg.couplings()
    bath = cfg.bath()
    mass, hbar = cfg.mirror_mass, cfg.hbar
    stats = thermal.stationary_statistics(couplings, bath, mass, hbar)
    out = [
        ("n_T", stats.n_T),
        ("var_q", stats.var_q),
        ("zero_point_var_q", hbar / (2.0 * mass * couplings.omega_m)),
        ("R", stats.R),
        ("squeezing_db", stats.squeezing_db),
        ("squeezing_db_variance_convention", stats.squeezing_db_variance),
        ("R_strong_squeezing", stats.R_strong_squeezing),
        ("restoring_force", "-m chi^2 q"),
    ]
    if cfg.n_trajectories > 0:
        gamma = cfg.damping / mass
        if not gamma > 0:
            raise RegimeError("Monte-Carlo run needs damping > 0 to reach a stationary state")
        dt = cfg.dt or default_dt(couplings, gamma)
        t_final = cfg.t_final or 50.0 / gamma
        lc = thermal.LangevinConfig.fluctuation_dissipation(
            mass,
            couplings.omega_m,
            cfg.damping,
            bath.n_T,
            hbar=hbar,
            seed=cfg.seed if seed is None else seed,
            dt=dt,
            n_trajectories=cfg.n_trajectories,
        )
        ens = thermal.langevin_trajectories(lc, couplings, mass, t_final)
        var, err = ens.stationary_variance()
        rel = var / stats.var_q - 1.0
        out += [
            ("mc_n_trajectories", cfg.n_trajectories),
            ("mc_seed", lc.seed),
            ("mc_dt", ens.dt),
            ("mc_t_final", t_final),
            ("mc_var_q", var),
            ("mc_standard_error", err),
            ("mc_relative_deviation", rel),
            ("mc_within_5_percent", abs(rel) < 0.05),
        ]
    return out


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def table_to_csv(columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(_num(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def table_to_json(columns, rows):
    doc = {"columns": list(columns), "rows": [[_json_value(v) for v in row] for row in rows]}
    return json.dumps(doc, indent=1) + "\n"


def pairs_to_csv(pairs):
    return table_to_csv(("key", "value"), pairs)


def pairs_to_json(pairs):
    return json.dumps({k: _json_value(v) for k, v in pairs}, indent=1) + "\n"


def render_table(columns, rows, fmt):
    return table_to_csv(columns, rows) if fmt == "csv" else table_to_json(columns, rows)


def render_pairs(pairs, fmt):
    return pairs_to_csv(pairs) if fmt == "csv" else pairs_to_json(pairs)
