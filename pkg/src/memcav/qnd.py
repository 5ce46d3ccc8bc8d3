"""Analytic budget for resolving a single phonon jump.

Everything needed to decide whether a jump out of the mechanical ground
state is observable: the cavity shift per phonon, the shot-noise-limited
frequency readout floor, the three processes that end the ground state's
life (thermal excitation, counter-rotating two-phonon excitation, and
residual linear coupling from imperfect positioning), and the resulting
signal-to-noise ratio.

The probe is locked to the cavity (detuning 0) throughout.  The per-phonon
shift uses the near-unity-reflectivity form with sqrt(2 (1 - r_c)); it is
meaningful only for r_c close to 1, which is the operating regime here.
A membrane parked exactly at the extremum (x0 = 0) has no linear coupling:
that channel is then reported as an infinite lifetime and simply omitted
from the total decay rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import cavity, mechanics
from .errors import SingularityError, ValidationError
from .params import C_LIGHT, ExperimentParams, HBAR, K_B, as_dict, validate


def _require_valid(p: ExperimentParams) -> None:
    violations = validate(p)
    if violations:
        raise ValidationError("; ".join(violations))


def detuning_per_phonon(p: ExperimentParams) -> float:
    """Cavity shift per phonon, 16 pi^2 c x_m^2 / (L lam^2 sqrt(2(1-r_c))).

    Evaluated both through the zero-point amplitude and through the
    equivalent hbar/(m omega_m) form; the two must agree to rounding.
    """
    one_minus = 1.0 - p.r_c
    if one_minus <= 0.0:
        raise SingularityError("1 - r_c underflowed in the per-phonon shift")
    x_m = mechanics.zero_point_amplitude(p.m, p.omega_m)
    root = math.sqrt(2.0 * one_minus)
    via_xm = 16.0 * math.pi**2 * C_LIGHT * x_m**2 / (p.L * p.lam**2 * root)
    direct = 8.0 * math.pi**2 * C_LIGHT * HBAR / (p.L * p.lam**2 * root * p.m * p.omega_m)
    if abs(via_xm - direct) > 1e-12 * direct:
        raise SingularityError("per-phonon shift forms disagree beyond rounding")
    return via_xm


class PdhNoise(NamedTuple):
    s_omega: float          # rad^2/s, white frequency-noise PSD
    kappa: float            # rad/s, cavity damping pi c / (L F)
    n_bar_photons: float    # mean circulating photon number


def pdh_noise_psd(p: ExperimentParams) -> PdhNoise:
    """Shot-noise-limited frequency readout floor of the locked probe.

    S_omega = pi^3 hbar c^3 / (16 F^2 L^2 lambda P_in), which must equal
    kappa / (16 N_bar) with N_bar kappa = P_in lambda / (pi hbar c).
    """
    kappa = math.pi * C_LIGHT / (p.L * p.F)
    n_bar = p.P_in * p.lam / (math.pi * HBAR * C_LIGHT * kappa)
    s_omega = math.pi**3 * HBAR * C_LIGHT**3 / (16.0 * p.F**2 * p.L**2 * p.lam * p.P_in)
    if abs(s_omega - kappa / (16.0 * n_bar)) > 1e-12 * s_omega:
        raise SingularityError("frequency-noise forms disagree beyond rounding")
    return PdhNoise(s_omega, kappa, n_bar)


def photon_psd(omega, detuning: float, kappa: float, n_bar_photons: float):
    """Intracavity photon-number noise spectrum [photons^2 s],

    S_NN(omega) = N_bar kappa / ((omega + Delta)^2 + (kappa/2)^2).
    """
    if kappa <= 0:
        raise ValidationError(f"kappa must be positive (got {kappa})")
    omega = np.asarray(omega, dtype=float)
    out = n_bar_photons * kappa / ((omega + detuning) ** 2 + (kappa / 2.0) ** 2)
    return float(out) if out.ndim == 0 else out


def thermal_lifetime(n: int, p: ExperimentParams) -> float:
    """Lifetime of phonon state n against the thermal bath [s],

    tau_T = Q / (omega_m (n (n_bar+1) + n_bar (n+1))).

    For n = 0 this reduces exactly to Q hbar / (k_B T).
    """
    if n < 0:
        raise ValidationError(f"n must be >= 0 (got {n})")
    n_bar = mechanics.thermal_occupation(p.T, p.omega_m)
    if n == 0:
        return p.Q * HBAR / (K_B * p.T)
    return p.Q / (p.omega_m * (n * (n_bar + 1.0) + n_bar * (n + 1.0)))


def rwa_lifetime(p: ExperimentParams) -> float:
    """Ground-state lifetime against the counter-rotating two-phonon channel [s].

    Closed form
        tau = lam^3 L^2 (1-r_c) m omega_m (omega_m^2 + kappa^2/16)
              / (8 pi^3 x_m^2 c P_in),
    equal to the golden-rule route 1 / ((shift/phonon)^2 S_NN(-2 omega_m) / 2).
    """
    kappa = math.pi * C_LIGHT / (p.L * p.F)
    x_m = mechanics.zero_point_amplitude(p.m, p.omega_m)
    one_minus = 1.0 - p.r_c
    if one_minus <= 0.0:
        raise SingularityError("1 - r_c underflowed in the two-phonon rate")
    return (
        p.lam**3 * p.L**2 * one_minus * p.m * p.omega_m
        * (p.omega_m**2 + kappa**2 / 16.0)
        / (8.0 * math.pi**3 * x_m**2 * C_LIGHT * p.P_in)
    )


def rwa_rate_golden_rule(p: ExperimentParams) -> float:
    """0 -> 2 excitation rate via the photon noise spectrum [1/s]."""
    dw = detuning_per_phonon(p)
    _, kappa, n_bar = pdh_noise_psd(p)
    return 0.5 * dw**2 * photon_psd(-2.0 * p.omega_m, 0.0, kappa, n_bar)


def linear_lifetime(p: ExperimentParams) -> float:
    """Ground-state lifetime against residual linear coupling at offset x0 [s].

    tau = m omega_m L^2 lam^3 (1-r_c) (4 omega_m^2 + kappa^2)
          / (256 pi^3 P_in c x0^2).

    Returns math.inf for x0 = 0 (no linear coupling channel).
    """
    if p.x0 == 0.0:
        return math.inf
    kappa = math.pi * C_LIGHT / (p.L * p.F)
    one_minus = 1.0 - p.r_c
    if one_minus <= 0.0:
        raise SingularityError("1 - r_c underflowed in the linear-coupling rate")
    return (
        p.m * p.omega_m * p.L**2 * p.lam**3 * one_minus
        * (4.0 * p.omega_m**2 + kappa**2)
        / (256.0 * math.pi**3 * p.P_in * C_LIGHT * p.x0**2)
    )


def linear_rate_golden_rule(p: ExperimentParams) -> float:
    """0 -> 1 excitation rate via the photon noise spectrum [1/s]."""
    if p.x0 == 0.0:
        return 0.0
    dw = detuning_per_phonon(p)
    x_m = mechanics.zero_point_amplitude(p.m, p.omega_m)
    _, kappa, n_bar = pdh_noise_psd(p)
    # slope-times-zero-point coupling, written through the per-phonon shift so
    # both routes share the same near-unity-r_c curvature
    coupling = dw * p.x0 / x_m
    return coupling**2 * photon_psd(-p.omega_m, 0.0, kappa, n_bar)


@dataclass(frozen=True)
class QndFlags:
    qnd_time_ok: bool        # tau_total * omega_m > 1
    gap_ok: bool             # mode gap > omega_m
    classical_bath_ok: bool  # n_bar >> 1
    good_cavity: bool        # omega_m > kappa

    def all_ok(self) -> bool:
        return self.qnd_time_ok and self.gap_ok and self.classical_bath_ok and self.good_cavity


@dataclass(frozen=True)
class QndBudget:
    delta_omega: float     # rad/s, shift per phonon
    kappa: float           # rad/s
    n_bar_photons: float
    s_omega: float         # rad^2/s
    tau_thermal: float     # s
    tau_rwa: float         # s
    tau_lin: float         # s (inf when x0 = 0)
    tau_total: float       # s
    snr: float
    gap: float             # rad/s
    n_bar_thermal: float
    flags: QndFlags


def jump_budget(p: ExperimentParams) -> QndBudget:
    """Assemble the full ground-state jump budget.

    tau_total is the harmonic sum of the finite channel lifetimes, and
    SNR = (shift per phonon)^2 tau_total / S_omega.
    """
    _require_valid(p)
    dw = detuning_per_phonon(p)
    s_omega, kappa, n_bar_photons = pdh_noise_psd(p)
    tau_t = thermal_lifetime(0, p)
    tau_r = rwa_lifetime(p)
    tau_l = linear_lifetime(p)
    rate = sum(1.0 / tau for tau in (tau_t, tau_r, tau_l) if math.isfinite(tau))
    tau_total = 1.0 / rate
    snr = dw**2 * tau_total / s_omega
    gap = cavity.mode_gap(p.r_c, p.L).approx
    n_bar = mechanics.thermal_occupation(p.T, p.omega_m)
    flags = QndFlags(
        qnd_time_ok=tau_total * p.omega_m > 1.0,
        gap_ok=gap > p.omega_m,
        classical_bath_ok=mechanics.is_classical_bath(n_bar),
        good_cavity=p.omega_m > kappa,
    )
    return QndBudget(dw, kappa, n_bar_photons, s_omega, tau_t, tau_r, tau_l,
                     tau_total, snr, gap, n_bar, flags)


def snr_general_n(n: int, p: ExperimentParams) -> float:
    """SNR for resolving a jump out of phonon state n.

    Uses the thermal lifetime only; the two-phonon and linear channels are
    derived for the ground state and are not extended to n > 0.
    """
    dw = detuning_per_phonon(p)
    s_omega = pdh_noise_psd(p).s_omega
    return dw**2 * thermal_lifetime(n, p) / s_omega


@dataclass(frozen=True)
class ConsistencyReport:
    """Good-cavity cross-checks between lifetime ratios and closed forms.

    ratio_lin compares tau_total/tau_lin with (SNR/16)(x0/x_m)^2(kappa/omega_m)^2;
    ratio_rwa compares tau_lin/tau_rwa with (1/8)(x_m/x0)^2.  Residuals are
    relative and shrink as (kappa/omega_m)^2.  All None when x0 = 0.
    """

    lhs_lin: float | None
    rhs_lin: float | None
    residual_lin: float | None
    lhs_rwa: float | None
    rhs_rwa: float | None
    residual_rwa: float | None


def consistency_ratios(p: ExperimentParams) -> ConsistencyReport:
    if p.x0 == 0.0:
        return ConsistencyReport(None, None, None, None, None, None)
    budget = jump_budget(p)
    x_m = mechanics.zero_point_amplitude(p.m, p.omega_m)
    lhs_lin = budget.tau_total / budget.tau_lin
    rhs_lin = (budget.snr / 16.0) * (p.x0 / x_m) ** 2 * (budget.kappa / p.omega_m) ** 2
    lhs_rwa = budget.tau_lin / budget.tau_rwa
    rhs_rwa = 0.125 * (x_m / p.x0) ** 2
    return ConsistencyReport(
        lhs_lin, rhs_lin, abs(lhs_lin - rhs_lin) / rhs_lin,
        lhs_rwa, rhs_rwa, abs(lhs_rwa - rhs_rwa) / rhs_rwa,
    )


def budget_report(p: ExperimentParams) -> dict:
    """JSON-ready budget with input echo; field order is fixed."""
    b = jump_budget(p)
    return {
        "params": as_dict(p),
        "delta_omega_rad_s": b.delta_omega,
        "kappa_rad_s": b.kappa,
        "n_bar_photons": b.n_bar_photons,
        "s_omega_rad2_s": b.s_omega,
        "tau_thermal_s": b.tau_thermal,
        "tau_rwa_s": b.tau_rwa,
        "tau_lin_s": None if math.isinf(b.tau_lin) else b.tau_lin,
        "tau_total_s": b.tau_total,
        "snr": b.snr,
        "gap_rad_s": b.gap,
        "n_bar_thermal": b.n_bar_thermal,
        "flags": {
            "qnd_time_ok": b.flags.qnd_time_ok,
            "gap_ok": b.flags.gap_ok,
            "classical_bath_ok": b.flags.classical_bath_ok,
            "good_cavity": b.flags.good_cavity,
        },
    }
