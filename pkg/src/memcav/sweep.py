"""Grid sweeps and constrained maximization of the jump SNR.

Feasibility is hard: a point counts only if every budget validity flag
passes.  Singular or invalid grid points are recorded as failures and the
sweep continues.  Ties break toward the lowest flattened grid index, and
refinement never returns a point worse than the best feasible grid point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import qnd
from .errors import MemcavError, ValidationError
from .params import ExperimentParams, as_dict, with_value

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name, range, sample count, and scale."""

    param_name: str
    minimum: float
    maximum: float
    count: int
    scale: str = "linear"   # "linear" | "log"

    def __post_init__(self):
        # reuse the params-module field check
        with_value(_PROBE, self.param_name, 1.0)
        if not self.minimum < self.maximum:
            raise ValidationError(f"axis {self.param_name}: min must be < max")
        if self.count < 2:
            raise ValidationError(f"axis {self.param_name}: count must be >= 2")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"axis {self.param_name}: scale must be linear or log")
        if self.scale == "log" and self.minimum <= 0:
            raise ValidationError(f"axis {self.param_name}: log scale needs min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.minimum, self.maximum, self.count)
        return np.linspace(self.minimum, self.maximum, self.count)


_PROBE = ExperimentParams(L=1, lam=1, F=1, P_in=1, T=1, m=1, omega_m=1, Q=1, r_c=0, x0=0)


@dataclass(frozen=True)
class SweepEntry:
    params: ExperimentParams
    budget: qnd.QndBudget | None
    error: str | None = None

    @property
    def feasible(self) -> bool:
        return self.budget is not None and self.budget.flags.all_ok()


@dataclass(frozen=True)
class SweepResult:
    axes: tuple
    entries: list            # flattened, row-major over the axis grids
    shape: tuple

    @property
    def best(self) -> SweepEntry | None:
        """Highest-SNR feasible entry; first one wins on ties."""
        best = None
        for entry in self.entries:
            if entry.feasible and (best is None or entry.budget.snr > best.budget.snr):
                best = entry
        return best


def _evaluate(p: ExperimentParams) -> SweepEntry:
    try:
        return SweepEntry(p, qnd.jump_budget(p))
    except MemcavError as exc:
        return SweepEntry(p, None, error=str(exc))


def grid_sweep(base: ExperimentParams, axes) -> SweepResult:
    """Evaluate the jump budget on the cartesian grid of 1-3 axes."""
    axes = tuple(axes)
    if not 1 <= len(axes) <= 3:
        raise ValidationError("grid_sweep supports 1 to 3 axes")
    names = [a.param_name for a in axes]
    if len(set(names)) != len(names):
        raise ValidationError("axes must reference distinct parameters")
    value_lists = [a.values() for a in axes]
    entries = []
    for combo in itertools.product(*value_lists):
        p = base
        for name, value in zip(names, combo):
            p = with_value(p, name, float(value))
        entries.append(_evaluate(p))
    return SweepResult(axes, entries, tuple(a.count for a in axes))


@dataclass(frozen=True)
class OptimizeResult:
    feasible: bool
    params: ExperimentParams | None
    budget: qnd.QndBudget | None
    evaluations: int = 0
    message: str = field(default="")


def maximize_snr(base: ExperimentParams, axes, refine_iters: int = 3,
                 golden_steps: int = 40) -> OptimizeResult:
    """Coarse grid then coordinate-wise golden-section refinement.

    The refinement searches each axis inside the grid interval bracketing
    the current best point (other coordinates held fixed), keeps a candidate
    only if it is feasible and strictly better, and is fully deterministic.
    """
    result = grid_sweep(base, axes)
    best = result.best
    evals = len(result.entries)
    if best is None:
        return OptimizeResult(False, None, None, evals, "no feasible grid point")

    axes = tuple(axes)
    current_p, current_b = best.params, best.budget
    for _ in range(refine_iters):
        for axis in axes:
            values = axis.values()
            x_now = as_dict(current_p)[_config_key(axis.param_name)]
            idx = int(np.argmin(np.abs(values - x_now)))
            lo = values[max(idx - 1, 0)]
            hi = values[min(idx + 1, len(values) - 1)]
            if lo == hi:
                continue
            transform = (math.log, math.exp) if axis.scale == "log" else (lambda v: v, lambda v: v)
            fwd, inv = transform
            a, b = fwd(lo), fwd(hi)

            def objective(u: float):
                entry = _evaluate(with_value(current_p, axis.param_name, inv(u)))
                return (entry.budget.snr if entry.feasible else -math.inf), entry

            cand: list[tuple[float, SweepEntry]] = []
            for u in (a, b):
                cand.append(objective(u))
                evals += 1
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            fc, ec = objective(c)
            fd, ed = objective(d)
            cand += [(fc, ec), (fd, ed)]
            evals += 2
            for _ in range(golden_steps):
                if fc >= fd:
                    b, d, fd, ed = d, c, fc, ec
                    c = b - _GOLDEN * (b - a)
                    fc, ec = objective(c)
                    cand.append((fc, ec))
                else:
                    a, c, fc, ec = c, d, fd, ed
                    d = a + _GOLDEN * (b - a)
                    fd, ed = objective(d)
                    cand.append((fd, ed))
                evals += 1
            for snr, entry in cand:
                if entry.feasible and snr > current_b.snr:
                    current_p, current_b = entry.params, entry.budget
    return OptimizeResult(True, current_p, current_b, evals)


def _config_key(name: str) -> str:
    return "lambda" if name in ("lambda", "lam") else name


def sweep_rows(result: SweepResult):
    """CSV columns and rows: parameters, budget fields, flags, error."""
    from .params import CONFIG_KEYS

    header = list(CONFIG_KEYS) + [
        "delta_omega_rad_s", "kappa_rad_s", "n_bar_photons", "s_omega_rad2_s",
        "tau_thermal_s", "tau_rwa_s", "tau_lin_s", "tau_total_s", "snr",
        "gap_rad_s", "qnd_time_ok", "gap_ok", "classical_bath_ok",
        "good_cavity", "error",
    ]
    rows = []
    for entry in result.entries:
        row = [as_dict(entry.params)[k] for k in CONFIG_KEYS]
        b = entry.budget
        if b is None:
            row += [""] * 10 + ["", "", "", ""] + [entry.error or "failed"]
        else:
            row += [b.delta_omega, b.kappa, b.n_bar_photons, b.s_omega,
                    b.tau_thermal, b.tau_rwa,
                    "" if math.isinf(b.tau_lin) else b.tau_lin,
                    b.tau_total, b.snr, b.gap,
                    int(b.flags.qnd_time_ok), int(b.flags.gap_ok),
                    int(b.flags.classical_bath_ok), int(b.flags.good_cavity), ""]
        rows.append(row)
    return header, rows
