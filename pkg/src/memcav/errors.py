"""Exception hierarchy.

ValidationError covers bad inputs (config files, parameter invariants,
malformed CLI requests); NumericsError covers failures of the numerics
themselves (non-converging fits, singular parameter combinations).  The CLI
maps the two branches to exit codes 1 and 2.
"""


class MemcavError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(MemcavError):
    """Invalid input data or parameters."""


class ConfigError(ValidationError):
    """Config file missing, unparseable, or violating a parameter invariant."""


class NumericsError(MemcavError):
    """Numerical procedure failed."""


class FitError(NumericsError):
    """Least-squares fit did not converge or produced an unphysical result."""


class SingularityError(NumericsError):
    """Parameter combination sits on a singular point of a formula."""


class EstimationError(NumericsError):
    """Estimator received data it cannot produce a value from."""
