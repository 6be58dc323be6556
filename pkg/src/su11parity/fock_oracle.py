"""Brute-force verifier on a truncated two-mode Fock space.

Every operator of the interferometer-plus-parity problem is realized as a
dense complex matrix on the space spanned by |i>_a |j>_b, i, j <= n_max,
with composite index k = i*(n_max+1) + j.  Expectation values computed
here are independent of the closed forms and serve as their oracle.

All operators in play (two-mode squeezer, mode-a phase shift, mode-b
parity) conserve the photon-number difference n_a - n_b, so each matrix
is block diagonal over that difference.  Constructors and expectation
values exploit this exactly: exponentials and products are evaluated per
dense block and scattered into the full matrix, which keeps the cost at
O(n_max^4) instead of O(n_max^6) without changing any value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import (CutoffCapExceeded, DomainError, NotConverged,
                     SimulationError, TruncationLeakage)
from .params import GainConfig, interferometer_coeffs, measurement_coeffs
from .states import (CoherentSqueezed, InputState, ThermalSqueezed,
                     TwoModeCoherent, TwoModeVacuum, VacuumFock)

DEFAULT_DIM_CAP = 4096
DEFAULT_EPS_TRUNC = 1e-10
DEFAULT_CONVERGENCE_TOL = 1e-8
CUTOFF_STEP = 8
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class FockCutoff:
    """Per-mode truncation; each mode has dimension n_max + 1.

    The two-mode dimension (n_max + 1)^2 is bounded by dim_cap to prevent
    accidental memory blowups (dense matrices at the default cap already
    reach ~270 MB).
    """

    n_max: int
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if not isinstance(self.n_max, int) or isinstance(self.n_max, bool) or self.n_max < 1:
            raise DomainError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        if self.dim > self.dim_cap:
            raise CutoffCapExceeded(
                f"two-mode dimension {self.dim} exceeds cap {self.dim_cap} "
                f"(n_max={self.n_max}; largest admissible n_max is "
                f"{int(math.isqrt(self.dim_cap)) - 1})")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** 2

    def step_up(self, step: int = CUTOFF_STEP) -> "FockCutoff":
        return FockCutoff(self.n_max + step, self.dim_cap)


# ---------------------------------------------------------------------------
# block machinery (difference d = n_a - n_b is conserved)

@lru_cache(maxsize=32)
def _mode_occupations(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(n_a, n_b) per composite index."""
    N = n_max + 1
    k = np.arange(N * N)
    return k // N, k % N


@lru_cache(maxsize=32)
def _difference_blocks(n_max: int) -> tuple[np.ndarray, ...]:
    """Composite-index arrays per difference d, ordered d = -n_max .. n_max.

    Within a block, entries are ordered by increasing occupation, so local
    index l maps to (i, j) = (max(d, 0) + l, max(d, 0) + l - d).
    """
    N = n_max + 1
    out = []
    for d in range(-n_max, n_max + 1):
        i = np.arange(max(d, 0), max(d, 0) + N - abs(d))
        out.append(i * N + (i - d))
    return tuple(out)


def _block_occupations(d: int, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(max(d, 0), max(d, 0) + n_max + 1 - abs(d))
    return i, i - d


def _assemble(blocks: list[np.ndarray], n_max: int) -> np.ndarray:
    dim = (n_max + 1) ** 2
    out = np.zeros((dim, dim), dtype=complex)
    for idx, block in zip(_difference_blocks(n_max), blocks):
        out[np.ix_(idx, idx)] = block
    return out


def _apply_blocks(blocks, n_max: int, columns: np.ndarray, adjoint: bool = False) -> np.ndarray:
    """Matrix-vector products of a block-diagonal operator with stacked columns."""
    out = np.empty_like(columns)
    for idx, block in zip(_difference_blocks(n_max), blocks):
        sub = columns[idx, :]
        out[idx, :] = (block.conj().T @ sub) if adjoint else (block @ sub)
    return out


def _raise_series_block(d: int, n_max: int, coef: complex) -> np.ndarray:
    """exp(coef * adag bdag) on the d-block via its finite power series.

    The truncated raising pair is nilpotent, so the series terminates and
    the entries below the cutoff equal the untruncated matrix elements
    coef^k / k! * sqrt((i+k)! (j+k)! / (i! j!)).
    """
    i, j = _block_occupations(d, n_max)
    m = len(i)
    out = np.eye(m, dtype=complex)
    for k in range(1, m):
        c = np.arange(m - k)
        out[c + k, c] = out[c + k - 1, c] * coef * np.sqrt(i[c + k] * j[c + k]) / k
    return out


@lru_cache(maxsize=32)
def _squeezer_blocks(gain: GainConfig, cutoff: FockCutoff) -> tuple[np.ndarray, ...]:
    """expm of the truncated generator xi adag bdag - xi* ab, per block (Pade)."""
    xi = gain.xi
    out = []
    for d in range(-cutoff.n_max, cutoff.n_max + 1):
        i, j = _block_occupations(d, cutoff.n_max)
        m = len(i)
        gen = np.zeros((m, m), dtype=complex)
        if m > 1:
            up = xi * np.sqrt(i[1:] * j[1:])
            rows = np.arange(1, m)
            gen[rows, rows - 1] = up
            gen[rows - 1, rows] = -np.conj(up)
        out.append(expm(gen))
    return tuple(out)


def _u_blocks(gain: GainConfig, phi: float, cutoff: FockCutoff, normal_ordered: bool):
    n_max = cutoff.n_max
    out = []
    if normal_ordered:
        co = interferometer_coeffs(gain, phi)
        t = math.tanh(gain.g)
        up = np.exp(1j * gain.theta) * t * co.A
        down = np.exp(-1j * gain.theta) * t * co.A
        for d in range(-n_max, n_max + 1):
            i, j = _block_occupations(d, n_max)
            e_plus = _raise_series_block(d, n_max, up)
            e_minus = _raise_series_block(d, n_max, down).T
            diag = (1.0 + co.A) ** i * (1.0 + co.B) ** j
            out.append(co.prefactor_U * (e_plus * diag[None, :]) @ e_minus)
    else:
        s_blocks = _squeezer_blocks(gain, cutoff)
        for d, s in zip(range(-n_max, n_max + 1), s_blocks):
            i, _ = _block_occupations(d, n_max)
            phase = np.exp(1j * phi * i)
            out.append(s.conj().T @ (phase[:, None] * s))
    return out


def _mu_blocks(gain: GainConfig, phi: float, cutoff: FockCutoff, normal_ordered: bool):
    n_max = cutoff.n_max
    out = []
    if normal_ordered:
        mc = measurement_coeffs(gain, phi)
        for d in range(-n_max, n_max + 1):
            i, j = _block_occupations(d, n_max)
            e_plus = _raise_series_block(d, n_max, np.conj(mc.M))
            e_minus = _raise_series_block(d, n_max, mc.M).T
            # 1 - D is in [-1, 0); integer powers keep the sign alternation exact
            diag = (1.0 - mc.C) ** i * (1.0 - mc.D) ** j
            out.append(mc.prefactor * (e_plus * diag[None, :]) @ e_minus)
    else:
        for d, u in zip(range(-n_max, n_max + 1),
                        _u_blocks(gain, phi, cutoff, normal_ordered=False)):
            _, j = _block_occupations(d, n_max)
            signs = (-1.0) ** j
            out.append(u.conj().T @ (signs[:, None] * u))
    return out


# ---------------------------------------------------------------------------
# dense operator constructors

def ladder_ops(cutoff: FockCutoff):
    """Two-mode embedded ladder matrices (a, a_dag, b, b_dag).

    Single-mode action a|n> = sqrt(n)|n-1>, tensored with the identity of
    the other mode.
    """
    N = cutoff.n_max + 1
    single = np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)
    eye = np.eye(N, dtype=complex)
    a = np.kron(single, eye)
    b = np.kron(eye, single)
    return a, a.conj().T, b, b.conj().T


def squeezer_direct(gain: GainConfig, cutoff: FockCutoff) -> np.ndarray:
    """Matrix exponential of the truncated two-mode squeezing generator.

    Computed by Pade scaling-and-squaring on each difference block (the
    generator conserves n_a - n_b, so this equals the exponential of the
    full truncated matrix).
    """
    return _assemble(list(_squeezer_blocks(gain, cutoff)), cutoff.n_max)


def squeezer_factored(gain: GainConfig, cutoff: FockCutoff) -> np.ndarray:
    """Factored form of the two-mode squeezer.

    sech g * exp(e^{i theta} tanh g adag bdag) * (sech g)^{Na+Nb}
           * exp(-e^{-i theta} tanh g ab),
    with the raising/lowering exponentials evaluated by their finite
    (cutoff-nilpotent) power series and the normally ordered middle factor
    acting diagonally.
    """
    n_max = cutoff.n_max
    t = math.tanh(gain.g)
    sech = 1.0 / math.cosh(gain.g)
    blocks = []
    for d in range(-n_max, n_max + 1):
        i, j = _block_occupations(d, n_max)
        e_plus = _raise_series_block(d, n_max, np.exp(1j * gain.theta) * t)
        e_minus = _raise_series_block(d, n_max, -np.exp(-1j * gain.theta) * t).T
        diag = sech ** (i + j)
        blocks.append(sech * (e_plus * diag[None, :]) @ e_minus)
    return _assemble(blocks, n_max)


def interferometer_unitary_direct(gain: GainConfig, phi: float, cutoff: FockCutoff) -> np.ndarray:
    """S2(-xi) . exp(i phi Na) . S2(xi) as a truncated matrix product."""
    return _assemble(_u_blocks(gain, phi, cutoff, normal_ordered=False), cutoff.n_max)


def interferometer_unitary_normal_ordered(gain: GainConfig, phi: float, cutoff: FockCutoff) -> np.ndarray:
    """Normal-ordered closed form of the interferometer unitary.

    prefactor * exp(e^{i theta} tanh g A adag bdag) * (1+A)^{Na} (1+B)^{Nb}
              * exp(e^{-i theta} tanh g A ab),
    with integer powers of the complex diagonal bases (no branch ambiguity).
    """
    return _assemble(_u_blocks(gain, phi, cutoff, normal_ordered=True), cutoff.n_max)


def mu_operator_conjugated(gain: GainConfig, phi: float, cutoff: FockCutoff) -> np.ndarray:
    """U^dag . (I_a x (-1)^{Nb}) . U with U from interferometer_unitary_direct."""
    return _assemble(_mu_blocks(gain, phi, cutoff, normal_ordered=False), cutoff.n_max)


def mu_operator_normal_ordered(gain: GainConfig, phi: float, cutoff: FockCutoff) -> np.ndarray:
    """Normal-ordered closed form of the equivalent measurement operator.

    prefactor * exp(M* adag bdag) * (1-C)^{Na} (1-D)^{Nb} * exp(M ab);
    1 - D lies in [-1, 0), so the diagonal factor alternates sign with n_b.
    """
    return _assemble(_mu_blocks(gain, phi, cutoff, normal_ordered=True), cutoff.n_max)


# ---------------------------------------------------------------------------
# states

def _coherent_coeffs(alpha: complex, n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1, dtype=complex)
    out[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def _svs_coeffs(r: float, theta_s: float, n_max: int) -> np.ndarray:
    """Squeezed vacuum in the Fock basis: even components only,
    c_{2m} = sech^{1/2} r (-e^{i theta_s} tanh r / 2)^m sqrt((2m)!) / m!."""
    out = np.zeros(n_max + 1, dtype=complex)
    term = 1.0 / math.sqrt(math.cosh(r))
    out[0] = term
    ratio = -np.exp(1j * theta_s) * math.tanh(r)
    for m in range(1, n_max // 2 + 1):
        term = term * ratio * math.sqrt((2 * m - 1) / (2 * m))
        out[2 * m] = term
    return out


def _fock_coeffs(n: int, n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1, dtype=complex)
    if n <= n_max:
        out[n] = 1.0
    return out


def _thermal_weights(nbar: float, n_max: int) -> np.ndarray:
    if nbar == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    n = np.arange(n_max + 1)
    return np.exp(n * math.log(nbar) - (n + 1) * math.log(1.0 + nbar))


def _pure_columns(state: InputState, cutoff: FockCutoff,
                  eps_trunc: float = DEFAULT_EPS_TRUNC):
    """Decompose the input as sum_k w_k |psi_k><psi_k| with pure columns.

    Returns (weights, columns) where columns[:, k] holds |psi_k> and the
    weights sum to (at most) one.  Raises TruncationLeakage when the
    represented norm/trace falls short of 1 by more than eps_trunc.
    """
    n_max = cutoff.n_max
    if isinstance(state, TwoModeVacuum):
        weights = np.ones(1)
        cols = np.kron(_fock_coeffs(0, n_max), _fock_coeffs(0, n_max))[:, None]
    elif isinstance(state, TwoModeCoherent):
        weights = np.ones(1)
        cols = np.kron(_coherent_coeffs(state.alpha, n_max),
                       _coherent_coeffs(state.beta, n_max))[:, None]
    elif isinstance(state, CoherentSqueezed):
        weights = np.ones(1)
        cols = np.kron(_coherent_coeffs(state.alpha, n_max),
                       _svs_coeffs(state.r, state.theta_s, n_max))[:, None]
    elif isinstance(state, VacuumFock):
        weights = np.ones(1)
        cols = np.kron(_fock_coeffs(0, n_max), _fock_coeffs(state.n, n_max))[:, None]
    elif isinstance(state, ThermalSqueezed):
        weights = _thermal_weights(state.nbar, n_max)
        svs = _svs_coeffs(state.r, state.theta_s, n_max)
        N = n_max + 1
        cols = np.zeros((N * N, N), dtype=complex)
        for k in range(N):
            cols[k * N:(k + 1) * N, k] = svs
    else:
        raise DomainError(f"unknown input state {state!r}")

    if len(weights) == 1:
        deficit = 1.0 - float(np.linalg.norm(cols[:, 0]))
    else:
        deficit = 1.0 - float(np.dot(weights, (np.abs(cols) ** 2).sum(axis=0)))
    if deficit > eps_trunc:
        raise TruncationLeakage(
            f"state {state!r} leaks {deficit:.3e} (> {eps_trunc:.1e}) at "
            f"n_max={n_max}; raise the cutoff")
    return weights, cols


def build_state(state: InputState, cutoff: FockCutoff,
                eps_trunc: float = DEFAULT_EPS_TRUNC) -> np.ndarray:
    """Truncated representation of an input state.

    Returns a state vector of length (n_max+1)^2 for the pure families and
    a dense density matrix for the thermal family.  No renormalization is
    applied; the truncation deficit must stay within eps_trunc.
    """
    weights, cols = _pure_columns(state, cutoff, eps_trunc)
    if isinstance(state, ThermalSqueezed):
        svs = _svs_coeffs(state.r, state.theta_s, cutoff.n_max)
        return np.kron(np.diag(weights), np.outer(svs, svs.conj()))
    return cols[:, 0]


def _min_cutoff_for_state(state: InputState, eps_trunc: float, dim_cap: int) -> int:
    """Smallest n_max at which the state builds within the leakage budget."""
    n_cap = int(math.isqrt(dim_cap)) - 1
    for n_max in range(8, n_cap + 1, 4):
        try:
            _pure_columns(state, FockCutoff(n_max, dim_cap), eps_trunc)
            return n_max
        except TruncationLeakage:
            continue
    raise TruncationLeakage(
        f"state {state!r} cannot be represented within leakage {eps_trunc:.1e} "
        f"under the dimension cap {dim_cap}")


# ---------------------------------------------------------------------------
# expectation values

def _parity_once(state: InputState, gain: GainConfig, phi: float,
                 cutoff: FockCutoff, eps_trunc: float) -> float:
    """Tr(rho mu) with mu = U^dag Pi_b U applied factor by factor.

    Identical to forming mu_operator_conjugated and contracting, but the
    unitary factors are applied to the state columns directly, which keeps
    large cutoffs affordable.
    """
    weights, cols = _pure_columns(state, cutoff, eps_trunc)
    n_max = cutoff.n_max
    s_blocks = _squeezer_blocks(gain, cutoff)
    n_a, n_b = _mode_occupations(n_max)
    phase = np.exp(1j * phi * n_a)
    signs = (-1.0) ** n_b

    chi = _apply_blocks(s_blocks, n_max, cols)              # S2(xi) psi
    chi = phase[:, None] * chi
    chi = _apply_blocks(s_blocks, n_max, chi, adjoint=True)  # U psi
    chi = signs[:, None] * chi                               # Pi_b U psi
    chi = _apply_blocks(s_blocks, n_max, chi)
    chi = np.conj(phase)[:, None] * chi
    chi = _apply_blocks(s_blocks, n_max, chi, adjoint=True)  # U^dag Pi_b U psi

    per_column = np.einsum("ij,ij->j", cols.conj(), chi)
    value = complex(np.dot(weights, per_column))
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise SimulationError(f"parity expectation has imaginary residue {value.imag:.3e}")
    return value.real


def parity_expectation(state: InputState, gain: GainConfig, phi: float,
                       cutoff: FockCutoff, *,
                       convergence_tol: float = DEFAULT_CONVERGENCE_TOL,
                       check_convergence: bool = True,
                       eps_trunc: float = DEFAULT_EPS_TRUNC) -> float:
    """Parity expectation of the input state through the interferometer.

    Evaluates Tr(rho mu) via the conjugated measurement operator.  With
    check_convergence (the default) the value is recomputed at
    n_max + CUTOFF_STEP and NotConverged is raised if the two disagree by
    more than convergence_tol; the higher-cutoff value is returned.
    """
    value = _parity_once(state, gain, phi, cutoff, eps_trunc)
    if not check_convergence:
        return value
    bigger = cutoff.step_up()
    refined = _parity_once(state, gain, phi, bigger, eps_trunc)
    if abs(refined - value) > convergence_tol:
        raise NotConverged(
            f"parity changed by {abs(refined - value):.3e} between "
            f"n_max={cutoff.n_max} and {bigger.n_max} (tol {convergence_tol:.1e})",
            cutoffs=(cutoff.n_max, bigger.n_max), values=(value, refined))
    return refined


def converged_parity_expectation(state: InputState, gain: GainConfig, phi: float, *,
                                 convergence_tol: float = DEFAULT_CONVERGENCE_TOL,
                                 eps_trunc: float = DEFAULT_EPS_TRUNC,
                                 dim_cap: int = DEFAULT_DIM_CAP,
                                 start_n_max: int | None = None) -> tuple[float, int]:
    """Raise the cutoff in CUTOFF_STEP increments until the value settles.

    Returns (value, n_max_used).  Raises NotConverged, reporting the last
    two cutoffs, when the ladder hits the dimension cap first.
    """
    n = start_n_max or max(16, _min_cutoff_for_state(state, eps_trunc, dim_cap))
    previous = _parity_once(state, gain, phi, FockCutoff(n, dim_cap), eps_trunc)
    while True:
        n_next = n + CUTOFF_STEP
        if (n_next + 1) ** 2 > dim_cap:
            raise NotConverged(
                f"parity not converged under dimension cap {dim_cap}: "
                f"last cutoffs n_max={n - CUTOFF_STEP}, {n}",
                cutoffs=(n - CUTOFF_STEP, n), values=(previous, previous))
        current = _parity_once(state, gain, phi, FockCutoff(n_next, dim_cap), eps_trunc)
        if abs(current - previous) <= convergence_tol:
            return current, n_next
        n, previous = n_next, current


def mean_photons_after_first_opa(state: InputState, gain: GainConfig,
                                 cutoff: FockCutoff,
                                 eps_trunc: float = DEFAULT_EPS_TRUNC) -> float:
    """<Na + Nb> on S2(xi) . state: photons inside the interferometer."""
    weights, cols = _pure_columns(state, cutoff, eps_trunc)
    n_max = cutoff.n_max
    chi = _apply_blocks(_squeezer_blocks(gain, cutoff), n_max, cols)
    n_a, n_b = _mode_occupations(n_max)
    totals = ((n_a + n_b)[:, None] * np.abs(chi) ** 2).sum(axis=0)
    return float(np.dot(weights, totals))


def converged_mean_photons(state: InputState, gain: GainConfig, *,
                           convergence_tol: float = DEFAULT_CONVERGENCE_TOL,
                           eps_trunc: float = DEFAULT_EPS_TRUNC,
                           dim_cap: int = DEFAULT_DIM_CAP) -> tuple[float, int]:
    """Cutoff ladder for mean_photons_after_first_opa; returns (value, n_max)."""
    n = max(16, _min_cutoff_for_state(state, eps_trunc, dim_cap))
    previous = mean_photons_after_first_opa(state, gain, FockCutoff(n, dim_cap), eps_trunc)
    while True:
        n_next = n + CUTOFF_STEP
        if (n_next + 1) ** 2 > dim_cap:
            raise NotConverged(
                f"mean photon number not converged under dimension cap {dim_cap}: "
                f"last cutoffs n_max={n - CUTOFF_STEP}, {n}",
                cutoffs=(n - CUTOFF_STEP, n), values=(previous, previous))
        current = mean_photons_after_first_opa(state, gain, FockCutoff(n_next, dim_cap), eps_trunc)
        if abs(current - previous) <= convergence_tol:
            return current, n_next
        n, previous = n_next, current


# ---------------------------------------------------------------------------
# operator-equivalence residuals

def safe_indices(cutoff: FockCutoff, fraction: float = 0.5) -> np.ndarray:
    """Composite indices with n_a + n_b <= fraction * n_max.

    Squeezing populates high Fock states, so rows/columns near the cutoff
    edge are corrupted by truncation; equivalence assertions restrict to
    this low-excitation region.
    """
    n_a, n_b = _mode_occupations(cutoff.n_max)
    return np.nonzero(n_a + n_b <= fraction * cutoff.n_max)[0]


def _residual_on_blocks(blocks_a, blocks_b, cutoff: FockCutoff, fraction: float) -> float:
    limit = fraction * cutoff.n_max
    worst = 0.0
    for d, one, other in zip(range(-cutoff.n_max, cutoff.n_max + 1), blocks_a, blocks_b):
        i, j = _block_occupations(d, cutoff.n_max)
        keep = (i + j) <= limit
        if keep.any():
            diff = np.abs(one[np.ix_(keep, keep)] - other[np.ix_(keep, keep)])
            if diff.size:
                worst = max(worst, float(diff.max()))
    return worst


def unitary_equivalence_residual(gain: GainConfig, phi: float, cutoff: FockCutoff,
                                 safe_fraction: float = 0.5) -> float:
    """max |U_normal_ordered - U_direct| over the safe sub-block."""
    return _residual_on_blocks(
        _u_blocks(gain, phi, cutoff, normal_ordered=True),
        _u_blocks(gain, phi, cutoff, normal_ordered=False),
        cutoff, safe_fraction)


def measurement_equivalence_residual(gain: GainConfig, phi: float, cutoff: FockCutoff,
                                     safe_fraction: float = 0.5) -> float:
    """max |mu_normal_ordered - mu_conjugated| over the safe sub-block."""
    return _residual_on_blocks(
        _mu_blocks(gain, phi, cutoff, normal_ordered=True),
        _mu_blocks(gain, phi, cutoff, normal_ordered=False),
        cutoff, safe_fraction)
