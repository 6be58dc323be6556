"""Scalar coefficient algebra for the SU(1,1) interferometer.

Two coefficient sets are computed from the OPA gain and the internal phase:
the normal-ordered-unitary coefficients (A, B) and the equivalent
measurement-operator coefficients (M, C, D).  Both are exact closed forms;
everything here is plain double-precision complex arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class GainConfig:
    """OPA squeezing parameter xi = g * exp(i theta).

    g is the dimensionless parametric gain (g >= 0); theta is the pump
    phase in radians, stored reduced to [0, 2pi).  Flip theta by pi instead
    of passing a negative gain.
    """

    g: float
    theta: float = 0.0

    def __post_init__(self):
        _require_finite(g=self.g, theta=self.theta)
        if self.g < 0:
            raise DomainError(f"gain must be non-negative, got g={self.g}")
        object.__setattr__(self, "theta", self.theta % TWO_PI)

    @property
    def xi(self) -> complex:
        return self.g * cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class InterferometerCoefficients:
    """Coefficients of the normal-ordered interferometer unitary.

    A scales the mode-a number operator, B the mode-b one, and prefactor_U
    is the overall scalar 1 / (cosh^2 g - e^{i phi} sinh^2 g).
    """

    A: complex
    B: complex
    prefactor_U: complex


@dataclass(frozen=True)
class MeasurementCoefficients:
    """Coefficients (M, C, D) of the equivalent parity-measurement operator.

    They satisfy C*D = |M|^2, D - 1 = prefactor and D = C + 2*prefactor
    identically, with 0 <= C < 1, 1 < D <= 2 and 0 < prefactor <= 1 for all
    real gain and phase.
    """

    M: complex
    C: float
    D: float
    prefactor: float


def interferometer_coeffs(gain: GainConfig, phi: float) -> InterferometerCoefficients:
    """Coefficients of the normal-ordered form of the full interferometer.

    Parameters
    ----------
    gain : GainConfig
        OPA gain and pump phase.
    phi : float
        Internal phase shift on mode a, radians.

    Returns
    -------
    InterferometerCoefficients
        A, B and the scalar prefactor.  At phi = 0 all of A, B vanish and
        the prefactor is exactly 1.
    """
    _require_finite(phi=phi)
    e = cmath.exp(1j * phi)
    ch2 = math.cosh(gain.g) ** 2
    sh2 = math.sinh(gain.g) ** 2
    # cosh^2 - e^{i phi} sinh^2 rewritten via cosh^2 - sinh^2 = 1 so that
    # phi = 0 gives exactly 1 (the difference of large squares is avoided).
    den = 1.0 + (1.0 - e) * sh2
    if abs(den) == 0.0:  # impossible for real g, phi; guard anyway
        raise DomainError("interferometer denominator vanished")
    return InterferometerCoefficients(
        A=(e - 1.0) * ch2 / den,
        B=(e - 1.0) * sh2 / den,
        prefactor_U=1.0 / den,
    )


def measurement_coeffs(gain: GainConfig, phi: float) -> MeasurementCoefficients:
    """Coefficients of the Hermitian operator equivalent to interferometer
    plus mode-b parity readout.

    Parameters
    ----------
    gain : GainConfig
        OPA gain and pump phase.
    phi : float
        Internal phase shift on mode a, radians.

    Returns
    -------
    MeasurementCoefficients
    """
    _require_finite(phi=phi)
    s2 = math.sin(phi / 2.0) ** 2
    sh = math.sinh(2.0 * gain.g)
    q = 1.0 + 2.0 * s2 * sh * sh
    m = cmath.exp(-1j * gain.theta) * (1j * math.sin(phi) - 2.0 * s2 * math.cosh(2.0 * gain.g)) * sh / q
    return MeasurementCoefficients(
        M=m,
        C=2.0 * s2 * sh * sh / q,
        D=(2.0 + 2.0 * s2 * sh * sh) / q,
        prefactor=1.0 / q,
    )
