"""Seeded Monte Carlo of phonon-number telegraph dynamics with noisy readout.

The phonon number performs a birth-death jump process.  Thermal coupling to
the bath moves n -> n+1 at rate (omega_m/Q) n_bar (n+1) and n -> n-1 at rate
(omega_m/Q) n (n_bar+1); summed they reproduce the total thermal decay rate
of state n, and their stationary law is Bose-Einstein with mean n_bar.  When
measurement channels are enabled, two extra clocks run from the ground state
only: a 0 -> 2 transition at the counter-rotating-channel rate and a 0 -> 1
transition at the residual-linear-coupling rate.  (The 0 -> 2 event is the
one exception to the birth-death step size; it is a genuine two-phonon
process.)

Sampling is exact event-driven simulation with competing exponential
clocks: no time discretization anywhere.  All randomness flows through
numpy's PCG64 generator, so runs are bit-for-bit reproducible per seed and
platform-independent; the generator name is recorded on every result.

The continuous readout is modeled per time bin: the estimate is the
per-phonon shift times (time-weighted mean occupation + 1/2), plus white
Gaussian frequency noise of variance S_omega / bin_width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qnd
from .errors import ValidationError
from .mechanics import thermal_occupation
from .params import ExperimentParams

RNG_ALGORITHM = "PCG64"


@dataclass(frozen=True)
class JumpTrajectory:
    """Event record of one phonon-number path starting from n = 0."""

    times: np.ndarray    # event times [s], strictly increasing
    levels: np.ndarray   # occupation after each event
    duration: float      # s
    seed: int
    measurement_channels: bool
    n_initial: int = 0
    rng_algorithm: str = field(default=RNG_ALGORITHM)

    def state_at(self, t):
        """Occupation number at time(s) t (piecewise-constant lookup)."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side="right")
        states = np.concatenate([[self.n_initial], self.levels])
        out = states[idx]
        return int(out) if out.ndim == 0 else out

    def dwell_times(self, level: int) -> np.ndarray:
        """Durations of completed visits to a level (final censored visit excluded)."""
        breaks = np.concatenate([[0.0], self.times])
        states = np.concatenate([[self.n_initial], self.levels])
        # spans run event-to-event; the trailing stretch up to `duration`
        # never ends with an event, so it is dropped by construction
        spans = np.diff(breaks)
        return spans[states[:-1] == level]

    def mean_level_per_bin(self, bin_width: float) -> np.ndarray:
        """Time-weighted mean occupation over consecutive bins of bin_width."""
        if bin_width <= 0:
            raise ValidationError("bin_width must be positive")
        n_bins = int(math.floor(self.duration / bin_width + 1e-9))
        if n_bins < 1:
            raise ValidationError("duration shorter than one bin")
        edges = np.arange(n_bins + 1) * bin_width
        breaks = np.concatenate([[0.0], self.times, [self.duration]])
        states = np.concatenate([[self.n_initial], self.levels]).astype(float)
        cum = np.concatenate([[0.0], np.cumsum(states * np.diff(breaks))])

        def integral(t):
            k = np.clip(np.searchsorted(breaks, t, side="right") - 1, 0, len(states) - 1)
            return cum[k] + states[k] * (t - breaks[k])

        return (integral(edges[1:]) - integral(edges[:-1])) / bin_width


def simulate_trajectory(p: ExperimentParams, duration: float, seed: int,
                        include_measurement_channels: bool = False) -> JumpTrajectory:
    """Exact event-driven sampling of the phonon number over [0, duration].

    The membrane starts in its ground state (cooled, cooling laser off).
    T = 0 is accepted as the zero-temperature limit (no thermal events).
    """
    if duration <= 0:
        raise ValidationError("duration must be positive")
    n_bar = thermal_occupation(p.T, p.omega_m)
    unit = p.omega_m / p.Q
    rate01 = rate02 = 0.0
    if include_measurement_channels:
        rate02 = 1.0 / qnd.rwa_lifetime(p)
        tau_lin = qnd.linear_lifetime(p)
        rate01 = 0.0 if math.isinf(tau_lin) else 1.0 / tau_lin

    rng = np.random.default_rng(seed)
    t = 0.0
    n = 0
    times: list[float] = []
    levels: list[int] = []
    while True:
        up = unit * n_bar * (n + 1)
        down = unit * n * (n_bar + 1.0)
        extra1 = rate01 if n == 0 else 0.0
        extra2 = rate02 if n == 0 else 0.0
        total = up + down + extra1 + extra2
        if total <= 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t >= duration:
            break
        u = rng.random() * total
        if u < up:
            n += 1
        elif u < up + down:
            n -= 1
        elif u < up + down + extra1:
            n += 1
        else:
            n += 2
        times.append(t)
        levels.append(n)
    return JumpTrajectory(
        np.asarray(times, dtype=float), np.asarray(levels, dtype=np.int64),
        float(duration), int(seed), include_measurement_channels,
    )


@dataclass(frozen=True)
class ReadoutTrace:
    """Binned noisy frequency readout of a trajectory."""

    bin_width: float            # s
    bin_centers: np.ndarray     # s
    freq_estimates: np.ndarray  # rad/s
    true_n_per_bin: np.ndarray  # time-weighted mean occupation
    delta_omega: float          # rad/s, per-phonon signal level spacing
    noise_sigma: float          # rad/s, per-bin readout noise
    bandwidth_ok: bool          # bin_width * omega_m >> 1 held
    seed: int
    rng_algorithm: str = field(default=RNG_ALGORITHM)

    def signal_level(self, n: int) -> float:
        """Noiseless readout level for occupation n."""
        return self.delta_omega * (n + 0.5)


def binned_readout(traj: JumpTrajectory, p: ExperimentParams, bin_width: float,
                   seed: int) -> ReadoutTrace:
    """Per-bin frequency estimates with shot-noise-limited Gaussian noise.

    estimate = delta_omega * (mean n in bin + 1/2) + N(0, S_omega/bin_width).
    Deterministic per seed, independent of the trajectory's own seed.
    """
    mean_n = traj.mean_level_per_bin(bin_width)
    dw = qnd.detuning_per_phonon(p)
    s_omega = qnd.pdh_noise_psd(p).s_omega
    sigma = math.sqrt(s_omega / bin_width)
    rng = np.random.default_rng(seed)
    estimates = dw * (mean_n + 0.5) + rng.normal(0.0, sigma, len(mean_n))
    centers = (np.arange(len(mean_n)) + 0.5) * bin_width
    return ReadoutTrace(
        float(bin_width), centers, estimates, mean_n, dw, sigma,
        bandwidth_ok=bin_width * p.omega_m > 1.0, seed=int(seed),
    )


@dataclass(frozen=True)
class DetectionStats:
    detection_probability: float  # fraction of jumped bins flagged (nan if none)
    false_alarm_rate: float       # fraction of ground-state bins flagged (nan if none)
    n_jump_bins: int
    n_ground_bins: int
    threshold: float


def jump_detection_stats(trace: ReadoutTrace, threshold: float) -> DetectionStats:
    """Per-bin threshold classification against the trajectory ground truth.

    A bin counts as "jumped" when its rounded true occupation is >= 1.  The
    threshold must sit between the n = 0 and n = 1 signal levels.
    """
    lo, hi = trace.signal_level(0), trace.signal_level(1)
    if not lo < threshold < hi:
        raise ValidationError(
            f"threshold {threshold} outside the n=0..1 signal range ({lo}, {hi})"
        )
    truth = np.rint(trace.true_n_per_bin) >= 1
    flagged = trace.freq_estimates > threshold
    n_jump = int(truth.sum())
    n_ground = int((~truth).sum())
    detection = float(np.mean(flagged[truth])) if n_jump else math.nan
    false_alarm = float(np.mean(flagged[~truth])) if n_ground else math.nan
    return DetectionStats(detection, false_alarm, n_jump, n_ground, float(threshold))
