"""Physical constants and experiment parameter sets.

All quantities are SI base units throughout the package: meters, watts,
kelvin, kilograms, rad/s.  Config files use the same convention, so no unit
conversion happens anywhere.

Constants are pinned to CODATA 2006 so that derived numbers reproduce
bit-for-bit across installations; they are deliberately not overridable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2006 values, fixed."""

    hbar: float = field(default=1.054571628e-34, init=False)  # J s
    k_B: float = field(default=1.3806504e-23, init=False)     # J/K
    c: float = field(default=2.99792458e8, init=False)        # m/s


CONST = PhysicalConstants()
HBAR = CONST.hbar
K_B = CONST.k_B
C_LIGHT = CONST.c


@dataclass(frozen=True)
class ExperimentParams:
    """One full scenario: cavity, laser, membrane oscillator, and bath.

    Attributes
    ----------
    L : cavity length [m]
    lam : laser wavelength [m]
    F : cavity finesse
    P_in : incident laser power [W]
    T : bath temperature [K]
    m : motional mass [kg]
    omega_m : mechanical angular frequency [rad/s]
    Q : mechanical quality factor
    r_c : membrane field reflectivity, 0 <= r_c < 1
    x0 : residual membrane offset from the detuning extremum [m]
    """

    L: float
    lam: float
    F: float
    P_in: float
    T: float
    m: float
    omega_m: float
    Q: float
    r_c: float
    x0: float


# Config keys, in file order.  "lambda" is a Python keyword, hence the
# lam attribute; everything else matches 1:1.
CONFIG_KEYS = ("L", "lambda", "F", "P_in", "T", "m", "omega_m", "Q", "r_c", "x0")
_KEY_TO_ATTR = {k: ("lam" if k == "lambda" else k) for k in CONFIG_KEYS}
_ATTR_TO_KEY = {v: k for k, v in _KEY_TO_ATTR.items()}

# Violations are reported in this fixed order (config keys, sorted).
_VALIDATION_ORDER = tuple(sorted(CONFIG_KEYS))


@dataclass(frozen=True)
class MembraneSpec:
    """Lossless dielectric slab: refractive index and thickness [m]."""

    n_index: float
    d: float

    def __post_init__(self):
        if not self.n_index >= 1.0:
            raise ValueError(f"n_index must be >= 1 (got {self.n_index})")
        if not self.d > 0.0:
            raise ValueError(f"d must be > 0 (got {self.d})")


def validate(p: ExperimentParams) -> list[str]:
    """Check every parameter invariant; return violations, empty if valid.

    Violations are data, not errors: each failed invariant produces one
    message, ordered deterministically by config-key name.
    """
    checks = {
        "F": [(p.F >= 1.0, f"F must be >= 1 (got {p.F})")],
        "L": [(p.L > 0.0, f"L must be > 0 (got {p.L})")],
        "P_in": [(p.P_in > 0.0, f"P_in must be > 0 (got {p.P_in})")],
        "Q": [(p.Q > 0.0, f"Q must be > 0 (got {p.Q})")],
        "T": [(p.T > 0.0, f"T must be > 0 (got {p.T})")],
        "lambda": [(p.lam > 0.0, f"lambda must be > 0 (got {p.lam})")],
        "m": [(p.m > 0.0, f"m must be > 0 (got {p.m})")],
        "omega_m": [(p.omega_m > 0.0, f"omega_m must be > 0 (got {p.omega_m})")],
        "r_c": [
            (p.r_c >= 0.0, f"r_c must be >= 0 (got {p.r_c})"),
            (p.r_c < 1.0, f"r_c must be < 1 (got {p.r_c})"),
        ],
        "x0": [(p.x0 >= 0.0, f"x0 must be >= 0 (got {p.x0})")],
    }
    # x0 must stay well inside one quarter-period of the detuning curve;
    # only meaningful once lambda itself is valid.
    if p.lam > 0.0:
        checks["x0"].append(
            (p.x0 < p.lam / 8.0, f"x0 must be < lambda/8 (got {p.x0})")
        )
    out = []
    for key in _VALIDATION_ORDER:
        for ok, msg in checks[key]:
            if not ok:
                out.append(msg)
    return out


def load_config(path) -> ExperimentParams:
    """Read a ``key = value`` config file and return validated parameters.

    The file is UTF-8 text, one assignment per line, ``#`` starts a comment.
    All ten keys are required, unknown keys are rejected, values are plain
    or scientific-notation floats in SI base units.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, float] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        if key not in _KEY_TO_ATTR:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key '{key}'")
        try:
            values[key] = float(text.strip())
        except ValueError:
            raise ConfigError(
                f"{path}:{lineno}: value for '{key}' is not a number: {text.strip()!r}"
            ) from None
    missing = [k for k in CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{path}: missing key(s): {', '.join(missing)}")
    p = ExperimentParams(**{_KEY_TO_ATTR[k]: v for k, v in values.items()})
    violations = validate(p)
    if violations:
        raise ConfigError(f"{path}: " + "; ".join(violations))
    return p


def save_config(p: ExperimentParams, path) -> None:
    """Write parameters in the config format; round-trips exactly."""
    lines = [f"{key} = {getattr(p, _KEY_TO_ATTR[key]):.17e}" for key in CONFIG_KEYS]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def as_dict(p: ExperimentParams) -> dict[str, float]:
    """Parameters keyed by config-key name, in file order."""
    return {key: getattr(p, _KEY_TO_ATTR[key]) for key in CONFIG_KEYS}


def with_value(p: ExperimentParams, name: str, value: float) -> ExperimentParams:
    """Copy of p with one field replaced; accepts attribute or config key."""
    attr = _KEY_TO_ATTR.get(name, name)
    if attr not in {f.name for f in fields(ExperimentParams)}:
        raise ValueError(f"unknown parameter '{name}'")
    return replace(p, **{attr: value})
