"""Exception types shared across the package.

The CLI maps these onto its exit-code contract, so user-facing failure
modes each get a distinct class.
"""


class SimulationError(Exception):
    """Base class for numeric and convergence failures."""


class DomainError(SimulationError, ValueError):
    """Invalid parameter value (non-finite input, negative gain, ...)."""


class DerivativeVanishes(SimulationError):
    """Signal slope is below the noise floor; sensitivity is undefined there."""


class TruncationLeakage(SimulationError):
    """A state cannot be represented at the requested cutoff; raise the cutoff."""


class CutoffCapExceeded(SimulationError):
    """Requested two-mode dimension exceeds the configured cap."""


class NotConverged(SimulationError):
    """Successive-cutoff values still disagree at the largest cutoff tried."""

    def __init__(self, message: str, cutoffs: tuple[int, int], values: tuple[float, float]):
        super().__init__(message)
        self.cutoffs = cutoffs
        self.values = values


class EmptyResult(SimulationError):
    """Every requested grid point was inadmissible."""
