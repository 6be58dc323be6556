"""Phase grids, sensitivity curves, and closed-form-vs-oracle verification.

Grid evaluation is sequential and order-preserving, so identical inputs
produce identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_form, fock_oracle
from .errors import DerivativeVanishes, DomainError, EmptyResult
from .params import GainConfig
from .states import InputState, VacuumFock

DEFAULT_ORACLE_TOL = 1e-6


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform phase grid over [start, stop], endpoints included."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise DomainError("grid endpoints must be finite")
        if self.start >= self.stop:
            raise DomainError(f"grid start {self.start} must be < stop {self.stop}")
        if not isinstance(self.points, int) or isinstance(self.points, bool) or self.points < 2:
            raise DomainError(f"grid points must be an integer >= 2, got {self.points!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class ParityCurve:
    state: InputState
    gain: GainConfig
    grid: PhaseGrid
    phis: np.ndarray
    values: np.ndarray


@dataclass
class SensitivityResult:
    """Sensitivity over a grid with stationary points skipped.

    curve holds (phi, delta_phi) for admissible points; skipped records
    (phi, reason) for the rest.  snl and hl are the 1/sqrt(n) and 1/n
    references at the mean photon number inside the interferometer.
    """

    state: InputState
    gain: GainConfig
    grid: PhaseGrid
    curve: list[tuple[float, float]]
    skipped: list[tuple[float, str]]
    phi_opt: float
    delta_phi_min: float
    n_bar: float
    snl: float
    hl: float
    n_bar_cutoff: int


@dataclass
class VerificationRow:
    phi: float
    closed_value: float
    oracle_value: float
    abs_diff: float
    flagged: bool
    cutoff_used: int
    printed_value: float | None = None
    printed_abs_diff: float | None = None


@dataclass
class VerificationReport:
    state: InputState
    gain: GainConfig
    tolerance: float
    rows: list[VerificationRow] = field(default_factory=list)

    @property
    def max_abs_diff(self) -> float:
        return max((row.abs_diff for row in self.rows), default=0.0)

    @property
    def num_flagged(self) -> int:
        return sum(row.flagged for row in self.rows)

    @property
    def passed(self) -> bool:
        return self.num_flagged == 0


def parity_curve(state: InputState, gain: GainConfig, grid: PhaseGrid) -> ParityCurve:
    """Closed-form parity signal at every grid point."""
    phis = grid.values()
    values = np.array([closed_form.parity_signal(state, gain, phi) for phi in phis])
    return ParityCurve(state=state, gain=gain, grid=grid, phis=phis, values=values)


def sensitivity_curve(state: InputState, gain: GainConfig, grid: PhaseGrid, *,
                      fd_step: float = closed_form.DEFAULT_FD_STEP,
                      convergence_tol: float = fock_oracle.DEFAULT_CONVERGENCE_TOL,
                      dim_cap: int = fock_oracle.DEFAULT_DIM_CAP) -> SensitivityResult:
    """Error-propagation sensitivity over the grid.

    Stationary points are skipped with a recorded reason rather than
    reported as infinities.  Raises EmptyResult if no point is admissible.
    """
    curve: list[tuple[float, float]] = []
    skipped: list[tuple[float, str]] = []
    for phi in grid.values():
        phi = float(phi)
        try:
            curve.append((phi, closed_form.phase_sensitivity(state, gain, phi, fd_step)))
        except DerivativeVanishes as exc:
            skipped.append((phi, str(exc)))
    if not curve:
        raise EmptyResult("every grid point is a stationary point of the signal")
    phi_opt, delta_phi_min = min(curve, key=lambda item: item[1])
    n_bar, used = fock_oracle.converged_mean_photons(
        state, gain, convergence_tol=convergence_tol, dim_cap=dim_cap)
    snl = 1.0 / math.sqrt(n_bar) if n_bar > 0 else math.inf
    hl = 1.0 / n_bar if n_bar > 0 else math.inf
    return SensitivityResult(state=state, gain=gain, grid=grid, curve=curve,
                             skipped=skipped, phi_opt=phi_opt,
                             delta_phi_min=delta_phi_min, n_bar=n_bar,
                             snl=snl, hl=hl, n_bar_cutoff=used)


def verify_closed_form(state: InputState, gain: GainConfig, grid: PhaseGrid,
                       cutoff: fock_oracle.FockCutoff | None = None, *,
                       oracle_tol: float = DEFAULT_ORACLE_TOL,
                       convergence_tol: float = fock_oracle.DEFAULT_CONVERGENCE_TOL,
                       dim_cap: int = fock_oracle.DEFAULT_DIM_CAP) -> VerificationReport:
    """Tabulate closed form against the Fock-space oracle over the grid.

    With cutoff=None each point runs the oracle's convergence ladder and
    records the cutoff it settled at.  Points whose difference exceeds
    oracle_tol are flagged.  For the vacuum-plus-Fock family each row also
    carries the sign-free variant of the closed form, so reports can show
    both variants against the oracle.
    """
    report = VerificationReport(state=state, gain=gain, tolerance=oracle_tol)
    for phi in grid.values():
        phi = float(phi)
        if cutoff is None:
            oracle_value, used = fock_oracle.converged_parity_expectation(
                state, gain, phi, convergence_tol=convergence_tol, dim_cap=dim_cap)
        else:
            oracle_value = fock_oracle.parity_expectation(
                state, gain, phi, cutoff, convergence_tol=convergence_tol)
            used = cutoff.n_max
        closed_value = closed_form.parity_signal(state, gain, phi)
        diff = abs(closed_value - oracle_value)
        row = VerificationRow(phi=phi, closed_value=closed_value,
                              oracle_value=oracle_value, abs_diff=diff,
                              flagged=diff > oracle_tol, cutoff_used=used)
        if isinstance(state, VacuumFock):
            printed = closed_form.parity_vacuum_fock_printed(state.n, gain, phi)
            row.printed_value = printed
            row.printed_abs_diff = abs(printed - oracle_value)
        report.rows.append(row)
    return report
