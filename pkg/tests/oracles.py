"""Independent reference computations used as test oracles.

Everything here deliberately avoids the code paths under test: derivatives
come from finite differences, occupation statistics from the generator
matrix (linear algebra, no sampling), and spectra from adaptive quadrature.
"""

import numpy as np
from scipy.linalg import expm

from memcav.mechanics import thermal_occupation


def central_second_derivative(f, x0, h):
    return (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / h**2


def central_first_derivative(f, x0, h):
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h)


def birth_death_generator(p, n_max, include_measurement_channels=False,
                          rate01=0.0, rate02=0.0):
    """Generator matrix Q (columns = from-state) of the phonon jump process."""
    n_bar = thermal_occupation(p.T, p.omega_m)
    unit = p.omega_m / p.Q
    G = np.zeros((n_max + 1, n_max + 1))
    for n in range(n_max + 1):
        up = unit * n_bar * (n + 1)
        down = unit * n * (n_bar + 1.0)
        if n + 1 <= n_max:
            G[n + 1, n] += up + (rate01 if (include_measurement_channels and n == 0) else 0.0)
        if include_measurement_channels and n == 0 and n + 2 <= n_max:
            G[n + 2, n] += rate02
        if n > 0:
            G[n - 1, n] += down
    for n in range(n_max + 1):
        G[n, n] -= G[:, n].sum()
    return G


def bin_average_char_fn(G, bin_starts, bin_width, alphas):
    """E[exp(i alpha * mean level over a bin)] for a mixture of bin starts.

    Tilted-propagator identity: the expectation over paths of
    exp(i (alpha/bw) * integral of n dt) equals
    1^T expm((G + i (alpha/bw) diag(levels)) bw) p_start.
    """
    n_states = G.shape[0]
    levels = np.diag(np.arange(n_states, dtype=float))
    ones = np.ones(n_states)
    out = np.empty(len(alphas), dtype=complex)
    for j, alpha in enumerate(alphas):
        tilted = expm((G + 1j * (alpha / bin_width) * levels) * bin_width)
        v = ones @ tilted
        out[j] = np.mean([v @ s for s in bin_starts])
    return out


def bose_einstein_pmf(n_bar, n_levels):
    """P(n) for n = 0..n_levels-1 plus the tail mass as the last entry."""
    q = n_bar / (1.0 + n_bar)
    probs = [(1.0 - q) * q**n for n in range(n_levels)]
    return np.array(probs + [q**n_levels])
