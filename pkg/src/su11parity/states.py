"""Input-state families for the interferometer.

A tagged union of small frozen dataclasses; mode a is the phase-sensing
mode, mode b is the one whose photon-number parity is read out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError


def _as_amplitude(name: str, value) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return z


def _nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class TwoModeVacuum:
    """Vacuum in both modes."""


@dataclass(frozen=True)
class TwoModeCoherent:
    """Coherent amplitudes alpha on mode a and beta on mode b."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_amplitude("alpha", self.alpha))
        object.__setattr__(self, "beta", _as_amplitude("beta", self.beta))


@dataclass(frozen=True)
class CoherentSqueezed:
    """Coherent state on mode a, squeezed vacuum (magnitude r, phase theta_s) on mode b."""

    alpha: complex
    r: float
    theta_s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_amplitude("alpha", self.alpha))
        object.__setattr__(self, "r", _nonneg("r", self.r))
        if not math.isfinite(self.theta_s):
            raise DomainError(f"theta_s must be finite, got {self.theta_s!r}")


@dataclass(frozen=True)
class ThermalSqueezed:
    """Thermal state (mean photon number nbar) on mode a, squeezed vacuum on mode b.

    theta_s is carried for state construction; the parity signal is
    independent of it (the thermal phase distribution is isotropic).
    """

    nbar: float
    r: float
    theta_s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "nbar", _nonneg("nbar", self.nbar))
        object.__setattr__(self, "r", _nonneg("r", self.r))
        if not math.isfinite(self.theta_s):
            raise DomainError(f"theta_s must be finite, got {self.theta_s!r}")


@dataclass(frozen=True)
class VacuumFock:
    """Vacuum on mode a, Fock state |n> on mode b."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")


InputState = Union[TwoModeVacuum, TwoModeCoherent, CoherentSqueezed, ThermalSqueezed, VacuumFock]
