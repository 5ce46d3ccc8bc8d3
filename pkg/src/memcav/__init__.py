"""memcav: membrane-in-the-middle cavity optomechanics toolkit.

Dispersive band structure and thin-film cavity optics, membrane oscillator
characterization, laser-cooling temperature estimators, the analytic
quantum-jump signal-to-noise budget, and a seeded Monte Carlo jump-readout
simulator that cross-validates the budget.
"""

__version__ = "0.1.0"

from .params import (  # noqa: F401
    CONST,
    ExperimentParams,
    MembraneSpec,
    PhysicalConstants,
    load_config,
    save_config,
    validate,
)
from .qnd import QndBudget, jump_budget  # noqa: F401
from .jumpsim import JumpTrajectory, ReadoutTrace, binned_readout, simulate_trajectory  # noqa: F401
