"""Analytic parity signals and error-propagation phase sensitivity.

Every input-state family has a closed-form expectation value of the
parity readout after a lossless SU(1,1) interferometer; this module
evaluates them and differentiates the signal numerically to get the
phase sensitivity.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import cmath
import math

from .errors import DerivativeVanishes, DomainError
from .params import GainConfig, measurement_coeffs, _require_finite
from .states import (CoherentSqueezed, InputState, ThermalSqueezed,
                     TwoModeCoherent, TwoModeVacuum, VacuumFock)

# A parity value is the expectation of a +/-1-valued observable.
ParityValue = float

PARITY_BOUND_SLACK = 1e-12
DERIVATIVE_FLOOR = 1e-12
DEFAULT_FD_STEP = 1e-5


def _as_parity(value: float) -> ParityValue:
    # |<parity>| <= 1; anything beyond slack signals a transcription bug.
    if abs(value) > 1.0 + PARITY_BOUND_SLACK:
        raise DomainError(f"parity value {value!r} outside [-1, 1]")
    return float(value)


def parity_vacuum(gain: GainConfig, phi: float) -> ParityValue:
    """Parity signal for two-mode vacuum input: 1 / (1 + 2 sin^2(phi/2) sinh^2 2g)."""
    return _as_parity(measurement_coeffs(gain, phi).prefactor)


def parity_two_mode_coherent(alpha: complex, beta: complex, gain: GainConfig, phi: float) -> ParityValue:
    """Parity signal for coherent amplitudes alpha (mode a) and beta (mode b)."""
    mc = measurement_coeffs(gain, phi)
    exponent = 2.0 * (alpha * beta * mc.M).real - abs(alpha) ** 2 * mc.C - abs(beta) ** 2 * mc.D
    return _as_parity(mc.prefactor * math.exp(exponent))


def parity_coherent_svs(alpha: complex, r: float, theta_s: float, gain: GainConfig, phi: float) -> ParityValue:
    """Parity signal for coherent (mode a) plus squeezed-vacuum (mode b) input.

    Parameters
    ----------
    alpha : complex
        Coherent amplitude on mode a.
    r, theta_s : float
        Squeezing magnitude (r >= 0) and phase of the mode-b squeezed vacuum.
    gain : GainConfig
    phi : float
        Internal phase, radians.
    """
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    mc = measurement_coeffs(gain, phi)
    # cosh^2 r - (D-1)^2 sinh^2 r, written via cosh^2 = 1 + sinh^2 so that
    # D = 2 (phi = 0) gives exactly 1; 0 < D-1 <= 1 keeps it >= 1 always.
    den = 1.0 + (1.0 - (mc.D - 1.0) ** 2) * math.sinh(r) ** 2
    if den <= 0:
        raise DomainError(f"non-positive denominator {den!r} in squeezed-vacuum signal")
    m_abs2 = abs(mc.M) ** 2
    exponent = (
        -abs(alpha) ** 2 * (mc.C + m_abs2 * math.sinh(r) ** 2) / den
        - (alpha ** 2 * mc.M ** 2 * cmath.exp(1j * theta_s)).real * math.sinh(2.0 * r) / (2.0 * den)
    )
    return _as_parity(mc.prefactor / math.sqrt(den) * math.exp(exponent))


def parity_thermal_svs(nbar: float, r: float, gain: GainConfig, phi: float) -> ParityValue:
    """Parity signal for thermal (mode a) plus squeezed-vacuum (mode b) input.

    Independent of the squeezing phase: the thermal amplitude distribution
    is isotropic, so theta_s integrates out and is not a parameter.
    """
    if nbar < 0 or r < 0:
        raise DomainError(f"nbar and r must be >= 0, got nbar={nbar}, r={r}")
    mc = measurement_coeffs(gain, phi)
    dm1 = mc.D - 1.0
    den = 1.0 + (1.0 - dm1 ** 2) * math.sinh(r) ** 2
    k = 1.0 - dm1 ** 2 * math.tanh(r) ** 2
    m_abs2 = abs(mc.M) ** 2
    coef = (mc.C / math.cosh(r) ** 2 + m_abs2 * math.tanh(r) ** 2) / k
    under = (1.0 + nbar * coef) ** 2 - nbar ** 2 * m_abs2 ** 2 * math.tanh(r) ** 2 / k ** 2
    if den <= 0 or under <= 0:
        raise DomainError(f"non-positive square-root argument (den={den!r}, under={under!r})")
    return _as_parity(mc.prefactor / math.sqrt(den) / math.sqrt(under))


def parity_vacuum_fock(n: int, gain: GainConfig, phi: float) -> ParityValue:
    """Parity signal for vacuum (mode a) plus Fock |n> (mode b) input.

    Returns (-1)^n * (1 + 2 sin^2(phi/2) sinh^2 2g)^-(n+1).  The sign
    alternates with n: at phi = 0 the interferometer is the identity and
    the mode-b parity of |n> is (-1)^n.  See parity_vacuum_fock_printed
    for the variant without the sign.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    pref = measurement_coeffs(gain, phi).prefactor
    return _as_parity((-1.0) ** n * pref ** (n + 1))


def parity_vacuum_fock_printed(n: int, gain: GainConfig, phi: float) -> float:
    """Sign-free variant (1 + 2 sin^2(phi/2) sinh^2 2g)^-(n+1).

    Kept only so verification reports can show both variants side by side;
    for odd n it disagrees with the Fock-space expectation value, which is
    why parity_vacuum_fock carries the (-1)^n factor.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return measurement_coeffs(gain, phi).prefactor ** (n + 1)


def parity_signal(state: InputState, gain: GainConfig, phi: float) -> ParityValue:
    """Dispatch to the family-specific closed form."""
    if isinstance(state, TwoModeVacuum):
        return parity_vacuum(gain, phi)
    if isinstance(state, TwoModeCoherent):
        return parity_two_mode_coherent(state.alpha, state.beta, gain, phi)
    if isinstance(state, CoherentSqueezed):
        return parity_coherent_svs(state.alpha, state.r, state.theta_s, gain, phi)
    if isinstance(state, ThermalSqueezed):
        return parity_thermal_svs(state.nbar, state.r, gain, phi)
    if isinstance(state, VacuumFock):
        return parity_vacuum_fock(state.n, gain, phi)
    raise DomainError(f"unknown input state {state!r}")


def phase_sensitivity(state: InputState, gain: GainConfig, phi: float,
                      fd_step: float = DEFAULT_FD_STEP) -> float:
    """Error-propagation phase sensitivity sqrt(1 - P^2) / |dP/dphi|.

    The parity operator squares to the identity, so the signal variance is
    1 - P^2 exactly.  The slope is a central finite difference with one
    Richardson extrapolation step.

    Raises
    ------
    DerivativeVanishes
        If the extrapolated slope magnitude is below 1e-12 (stationary
        point; the sensitivity diverges there).
    """
    _require_finite(phi=phi, fd_step=fd_step)
    if fd_step <= 0:
        raise DomainError(f"fd_step must be > 0, got {fd_step}")
    p = parity_signal(state, gain, phi)

    def slope(h: float) -> float:
        return (parity_signal(state, gain, phi + h) - parity_signal(state, gain, phi - h)) / (2.0 * h)

    deriv = (4.0 * slope(fd_step / 2.0) - slope(fd_step)) / 3.0
    if abs(deriv) < DERIVATIVE_FLOOR:
        raise DerivativeVanishes(f"|dP/dphi| = {abs(deriv):.3e} < {DERIVATIVE_FLOOR} at phi={phi}")
    return math.sqrt(max(0.0, 1.0 - p * p)) / abs(deriv)


def vacuum_optimal_sensitivity(g: float) -> float:
    """Small-phase sensitivity limit for vacuum inputs, 1/sinh(2g).

    Evaluates both algebraic forms, 1/sqrt(2 sinh^2 g (2 sinh^2 g + 2))
    and 1/sinh(2g), and checks they agree before returning the latter.
    """
    _require_finite(g=g)
    if g <= 0:
        raise DomainError(f"g must be > 0, got {g}")
    sh2 = math.sinh(g) ** 2
    explicit = 1.0 / math.sqrt(2.0 * sh2 * (2.0 * sh2 + 2.0))
    compact = 1.0 / math.sinh(2.0 * g)
    if abs(explicit - compact) > 1e-12 * max(1.0, compact):
        raise DomainError(
            f"algebraic forms disagree: {explicit!r} vs {compact!r}")
    return compact
