"""
Run configuration files.

A configuration is a flat TOML document (no tables). Physical quantities are
strings carrying a unit, e.g. ``mass = "1 ug"``; angular frequencies given in
Hz must be written with an explicit ``2pi*`` prefix (``"2pi*2.5 kHz"``) or in
``rad/s``. Dimensionless numbers, integers and flags are plain TOML values.

Two unit systems are supported:

``units = "SI"`` (default)
    the full cavity description; couplings are derived from it.
``units = "natural"``
    ``hbar = m = 1`` and the couplings ``omega_m``, ``C_D``, ``C_S`` are given
    directly as numbers, together with ``n_thermal`` and ``damping``.

Times may be given in seconds (``"10 us"``) or in oscillation periods
``2 pi / chi`` (``"4 periods"``). In natural units plain numbers are times.
"""
import math
import re
from dataclasses import asdict, dataclass, field, fields
from importlib import resources

import numpy as np

from .constants import HBAR
from .errors import ParseError, ValidationError
from .system import CavityGeometry, CouplingSigns, DerivedCouplings, MiddleMirror, derive_couplings
from .thermal import ThermalBath

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

_PREFIX = {"": 1.0, "k": 1e3, "M": 1e6, "G": 1e9, "m": 1e-3, "u": 1e-6, "µ": 1e-6, "n": 1e-9, "p": 1e-12}

_LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9}
_MASS = {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9, "µg": 1e-9, "ng": 1e-12}
_POWER = {p + "W": s for p, s in _PREFIX.items()}
_TEMPERATURE = {"K": 1.0, "mK": 1e-3, "uK": 1e-6, "µK": 1e-6, "nK": 1e-9}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9, "ps": 1e-12}
_HERTZ = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9}
_RAD_PER_S = {"rad/s": 1.0, "krad/s": 1e3, "Mrad/s": 1e6}
_DAMPING = {"kg/s": 1.0}
_DAMPING.update({f"{m}*{h}": ms * hs for m, ms in _MASS.items() for h, hs in _HERTZ.items()})

_QUANTITY = re.compile(
    r"^\s*(?P<twopi>2\s*pi\s*\*)?\s*(?P<num>[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)\s*(?P<unit>\S*)\s*$"
)

FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    """Validated contents of a configuration file, in SI (or natural) units.

    Optional fields are ``None`` when absent from the file.
    """

    units: str = "SI"
    # cavity (SI mode)
    length: float = None
    wavelength: float = None
    mode_index: int = None
    end_mirror_transmissivity: float = None
    power_D: float = 0.0
    power_S: float = 0.0
    # mirror
    mass: float = None
    omega_m: float = None
    transmissivity: float = None
    q0: float = 0.0
    damping: float = 0.0
    temperature: float = 0.0
    sign_D: int = -1
    sign_S: int = 1
    # natural-units couplings
    C_D: float = None
    C_S: float = None
    n_thermal: float = None
    # time grid
    t_start: float = 0.0
    t_end: float = None
    time_unit: str = "s"
    n_points: int = 201
    # oracle
    N_list: list = field(default_factory=lambda: [20, 40, 80])
    # thermal / Monte-Carlo
    seed: int = 0
    dt: float = None
    n_trajectories: int = 0
    t_final: float = None
    # output
    out_dir: str = "out"
    format: str = "csv"

    @property
    def natural(self):
        return self.units == "natural"

    @property
    def hbar(self):
        return 1.0 if self.natural else HBAR

    @property
    def mirror_mass(self):
        return 1.0 if self.natural else self.mass

    def geometry(self):
        if self.natural:
            return None
        return CavityGeometry(
            length=self.length,
            wavelength=self.wavelength,
            end_mirror_transmissivity=self.end_mirror_transmissivity,
            power_D=self.power_D,
            power_S=self.power_S,
            mode_index=self.mode_index,
        )

    def mirror(self):
        if self.natural:
            return None
        return MiddleMirror(
            mass=self.mass,
            omega_m=self.omega_m,
            transmissivity=self.transmissivity,
            q0=self.q0,
            damping=self.damping,
            temperature=self.temperature,
        )

    def signs(self):
        return CouplingSigns(self.sign_D, self.sign_S)

    def couplings(self):
        if self.natural:
            return DerivedCouplings(omega_m=self.omega_m, C_D=self.C_D, C_S=self.C_S)
        return derive_couplings(self.geometry(), self.mirror(), self.signs())

    def bath(self):
        if self.natural:
            return ThermalBath(self.n_thermal or 0.0)
        return ThermalBath.at_temperature(self.omega_m, self.temperature)

    def times(self, couplings=None):
        """The evaluation grid in seconds (or natural time units)."""
        scale = 1.0
        if self.time_unit == "periods":
            couplings = couplings or self.couplings()
            scale = 2.0 * math.pi / couplings.chi
        return np.linspace(self.t_start * scale, self.t_end * scale, self.n_points)


_NATURAL_ONLY = {"C_D", "C_S", "n_thermal"}
_SI_ONLY = {
    "length", "wavelength", "mode_index", "end_mirror_transmissivity", "power", "power_D",
    "power_S", "mass", "transmissivity", "q0", "temperature", "sign_D", "sign_S",
}
_KEYS = {f.name for f in fields(RunConfig)} - {"time_unit"} | {"power"}


def _locate(text, key):
    m = re.search(rf"^([ \t]*){re.escape(key)}[ \t]*=", text, re.MULTILINE)
    if m is None:
        return None, None
    return text.count("\n", 0, m.start()) + 1, len(m.group(1)) + 1


class _Reader:
    def __init__(self, text, doc):
        self.text = text
        self.doc = doc

    def fail(self, key, message):
        line, col = _locate(self.text, key)
        where = f" (line {line})" if line else ""
        raise ValidationError(f"{key}{where}: {message}")

    def quantity(self, key, table, *, twopi_table=None, extra=None):
        raw = self.doc[key]
        if not isinstance(raw, str):
            self.fail(key, f"expected a quantity with a unit, e.g. \"1 {next(iter(table))}\"")
        m = _QUANTITY.match(raw)
        if m is None:
            self.fail(key, f"cannot read quantity {raw!r}")
        value, unit = float(m.group("num")), m.group("unit")
        if extra and unit in extra:
            if m.group("twopi"):
                self.fail(key, f"'2pi*' is not allowed with unit {unit!r}")
            return value, unit
        if m.group("twopi"):
            if twopi_table is None or unit not in twopi_table:
                self.fail(key, f"'2pi*' prefix needs a unit in {sorted(twopi_table or [])}")
            return 2.0 * math.pi * value * twopi_table[unit], None
        if unit not in table:
            hint = " (write angular frequencies as '2pi*<f> Hz')" if twopi_table and unit in twopi_table else ""
            self.fail(key, f"unit {unit!r} not one of {sorted(table)}{hint}")
        return value * table[unit], None

    def number(self, key, integer=False):
        raw = self.doc[key]
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            self.fail(key, "expected a plain number")
        if integer:
            if not isinstance(raw, int):
                self.fail(key, "expected an integer")
            return raw
        return float(raw)


def parse_config(text):
    """Parse and validate configuration text.

    Raises:
        ParseError: malformed TOML, empty input, tables or unknown keys
        ValidationError: a value violates a physical or structural invariant
    """
    if not text.strip():
        raise ParseError("configuration is empty", 1, 1)
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
        msg = getattr(exc, "msg", str(exc))
        raise ParseError(msg, line, col) from None
    if not doc:
        raise ParseError("configuration has no keys", 1, 1)
    for key, value in doc.items():
        if isinstance(value, dict):
            line, col = _locate(text, key)
            if line is None:
                m = re.search(rf"^\s*\[\s*{re.escape(key)}\s*\]", text, re.MULTILINE)
                line = text.count("\n", 0, m.start()) + 1 if m else None
                col = 1
            raise ParseError(f"tables are not allowed, found [{key}]", line, col)
        if key not in _KEYS:
            line, col = _locate(text, key)
            raise ParseError(f"unknown key {key!r}", line, col)

    r = _Reader(text, doc)
    cfg = RunConfig()
    units = doc.get("units", "SI")
    if units not in ("SI", "natural"):
        r.fail("units", "must be 'SI' or 'natural'")
    cfg.units = units
    natural = units == "natural"
    for key in doc:
        if natural and key in _SI_ONLY:
            r.fail(key, "not used in natural units")
        if not natural and key in _NATURAL_ONLY:
            r.fail(key, "only allowed with units = \"natural\"")

    if natural:
        for key in ("omega_m", "C_D", "C_S"):
            if key not in doc:
                r.fail(key, "required in natural units")
            setattr(cfg, key, r.number(key))
        if "n_thermal" in doc:
            cfg.n_thermal = r.number("n_thermal")
        if "damping" in doc:
            cfg.damping = r.number("damping")
    else:
        _read_si(r, cfg)

    _read_common(r, cfg, natural)
    validate(cfg, r)
    return cfg


def _read_si(r, cfg):
    doc = r.doc
    for key in ("length", "wavelength", "end_mirror_transmissivity", "mass", "omega_m", "transmissivity"):
        if key not in doc:
            r.fail(key, "required")
    cfg.length = r.quantity("length", _LENGTH)[0]
    cfg.wavelength = r.quantity("wavelength", _LENGTH)[0]
    if "mode_index" in doc:
        cfg.mode_index = r.number("mode_index", integer=True)
    cfg.end_mirror_transmissivity = r.number("end_mirror_transmissivity")
    if "power" in doc:
        cfg.power_D = cfg.power_S = r.quantity("power", _POWER)[0]
    if "power_D" in doc:
        cfg.power_D = r.quantity("power_D", _POWER)[0]
    if "power_S" in doc:
        cfg.power_S = r.quantity("power_S", _POWER)[0]
    cfg.mass = r.quantity("mass", _MASS)[0]
    cfg.omega_m = r.quantity("omega_m", _RAD_PER_S, twopi_table=_HERTZ)[0]
    cfg.transmissivity = r.number("transmissivity")
    if "q0" in doc:
        value, unit = r.quantity("q0", _LENGTH, extra={"lambda"})
        cfg.q0 = value * cfg.wavelength if unit == "lambda" else value
    if "damping" in doc:
        cfg.damping = r.quantity("damping", _DAMPING)[0]
    if "temperature" in doc:
        cfg.temperature = r.quantity("temperature", _TEMPERATURE)[0]
    for key in ("sign_D", "sign_S"):
        if key in doc:
            setattr(cfg, key, r.number(key, integer=True))


def _time(r, key, natural):
    raw = r.doc[key]
    if natural and not isinstance(raw, str):
        return r.number(key), "s"
    value, unit = r.quantity(key, _TIME, extra={"periods"})
    return value, unit or "s"


def _read_common(r, cfg, natural):
    doc = r.doc
    if "t_end" not in doc:
        r.fail("t_end", "required")
    cfg.t_end, end_unit = _time(r, "t_end", natural)
    start_unit = end_unit
    if "t_start" in doc:
        cfg.t_start, start_unit = _time(r, "t_start", natural)
    if start_unit != end_unit and cfg.t_start != 0:
        r.fail("t_start", "must use the same time unit as t_end")
    cfg.time_unit = end_unit
    if "n_points" in doc:
        cfg.n_points = r.number("n_points", integer=True)
    if "N_list" in doc:
        raw = doc["N_list"]
        if not isinstance(raw, list) or not raw or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
            r.fail("N_list", "expected a non-empty list of integers")
        cfg.N_list = list(raw)
    if "seed" in doc:
        cfg.seed = r.number("seed", integer=True)
    if "n_trajectories" in doc:
        cfg.n_trajectories = r.number("n_trajectories", integer=True)
    for key in ("dt", "t_final"):
        if key in doc:
            value, unit = _time(r, key, natural)
            if unit != "s":
                r.fail(key, "must be given in seconds")
            setattr(cfg, key, value)
    if "out_dir" in doc:
        if not isinstance(doc["out_dir"], str):
            r.fail("out_dir", "expected a string")
        cfg.out_dir = doc["out_dir"]
    if "format" in doc:
        cfg.format = doc["format"]


def validate(cfg, reader=None):
    """Check every invariant of a RunConfig, raising ValidationError."""

    def fail(key, message):
        if reader is not None:
            reader.fail(key, message)
        raise ValidationError(f"{key}: {message}")

    if cfg.n_points < 2:
        fail("n_points", "must be >= 2")
    if not cfg.t_start >= 0:
        fail("t_start", "must be >= 0")
    if cfg.t_end is None or not cfg.t_end > cfg.t_start:
        fail("t_end", "must be > t_start")
    if any(b <= a for a, b in zip(cfg.N_list, cfg.N_list[1:])) or cfg.N_list[0] < 4:
        fail("N_list", "must be strictly increasing with every N >= 4")
    if not 0 <= cfg.seed < 2**64:
        fail("seed", "must be an unsigned 64-bit integer")
    if cfg.n_trajectories < 0:
        fail("n_trajectories", "must be >= 0")
    if cfg.dt is not None and not cfg.dt > 0:
        fail("dt", "must be > 0")
    if cfg.t_final is not None and not cfg.t_final > 0:
        fail("t_final", "must be > 0")
    if cfg.format not in FORMATS:
        fail("format", f"must be one of {FORMATS}")
    if cfg.natural:
        if not cfg.omega_m > 0:
            fail("omega_m", "must be > 0")
        if cfg.n_thermal is not None and not cfg.n_thermal >= 0:
            fail("n_thermal", "must be >= 0")
        if not cfg.damping >= 0:
            fail("damping", "must be >= 0")
        return cfg
    if cfg.transmissivity is not None and not 0 < cfg.transmissivity < 1:
        fail("transmissivity", "T must lie in (0, 1)")
    if not 0 < cfg.end_mirror_transmissivity < 1:
        fail("end_mirror_transmissivity", "must lie in (0, 1)")
    for key in ("sign_D", "sign_S"):
        if getattr(cfg, key) not in (-1, 1):
            fail(key, "must be -1 or +1")
    try:
        cfg.geometry()
        cfg.mirror()
    except ValidationError as exc:
        raise ValidationError(str(exc)) from None
    return cfg


def _fmt(x):
    return repr(float(x))


def dump_config(cfg):
    """Serialise a RunConfig to canonical TOML (SI units, full precision).

    ``parse_config(dump_config(cfg))`` reproduces ``cfg`` exactly.
    """
    lines = [f'units = "{cfg.units}"']
    tu = "s" if cfg.time_unit == "s" else "periods"

    def t(x):
        return _fmt(x) if cfg.natural and tu == "s" else f'"{_fmt(x)} {tu}"'

    if cfg.natural:
        lines += [
            f"omega_m = {_fmt(cfg.omega_m)}",
            f"C_D = {_fmt(cfg.C_D)}",
            f"C_S = {_fmt(cfg.C_S)}",
        ]
        if cfg.n_thermal is not None:
            lines.append(f"n_thermal = {_fmt(cfg.n_thermal)}")
        lines.append(f"damping = {_fmt(cfg.damping)}")
    else:
        lines += [
            f'length = "{_fmt(cfg.length)} m"',
            f'wavelength = "{_fmt(cfg.wavelength)} m"',
        ]
        if cfg.mode_index is not None:
            lines.append(f"mode_index = {cfg.mode_index}")
        lines += [
            f"end_mirror_transmissivity = {_fmt(cfg.end_mirror_transmissivity)}",
            f'power_D = "{_fmt(cfg.power_D)} W"',
            f'power_S = "{_fmt(cfg.power_S)} W"',
            f'mass = "{_fmt(cfg.mass)} kg"',
            f'omega_m = "{_fmt(cfg.omega_m)} rad/s"',
            f"transmissivity = {_fmt(cfg.transmissivity)}",
            f'q0 = "{_fmt(cfg.q0)} m"',
            f'damping = "{_fmt(cfg.damping)} kg/s"',
            f'temperature = "{_fmt(cfg.temperature)} K"',
            f"sign_D = {cfg.sign_D}",
            f"sign_S = {cfg.sign_S}",
        ]
    lines += [
        f"t_start = {t(cfg.t_start)}",
        f"t_end = {t(cfg.t_end)}",
        f"n_points = {cfg.n_points}",
        f"N_list = [{', '.join(str(n) for n in cfg.N_list)}]",
        f"seed = {cfg.seed}",
        f"n_trajectories = {cfg.n_trajectories}",
    ]
    for key in ("dt", "t_final"):
        value = getattr(cfg, key)
        if value is not None:
            lines.append(f"{key} = {_fmt(value)}" if cfg.natural else f'{key} = "{_fmt(value)} s"')
    lines += [f'out_dir = "{cfg.out_dir}"', f'format = "{cfg.format}"']
    return "\n".join(lines) + "\n"


def load_config(path):
    """Read a configuration file, falling back to the shipped ``fig2.cfg`` / ``toy.cfg``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        name = str(path)
        if name in shipped_configs():
            text = shipped_config_text(name)
        else:
            raise
    return parse_config(text)


def shipped_configs():
    return sorted(p.name for p in resources.files("optosqueeze.data").iterdir() if p.name.endswith(".cfg"))


def shipped_config_text(name):
    return resources.files("optosqueeze.data").joinpath(name).read_text(encoding="utf-8")


def config_dict(cfg):
    return asdict(cfg)
