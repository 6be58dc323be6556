"""Closed-form parity signals: frozen oracle values, limits, and properties."""

import math

import numpy as np
import pytest

from su11parity import (CoherentSqueezed, DerivativeVanishes, DomainError,
                        GainConfig, ThermalSqueezed, TwoModeCoherent,
                        TwoModeVacuum, VacuumFock, parity_coherent_svs,
                        parity_signal, parity_thermal_svs,
                        parity_two_mode_coherent, parity_vacuum,
                        parity_vacuum_fock, parity_vacuum_fock_printed,
                        phase_sensitivity, vacuum_optimal_sensitivity)

TWO_PI = 2.0 * math.pi

# Fock-space oracle values (truncated two-mode expectation, cutoffs 45 and 53
# agree to the digits quoted); the closed forms must reproduce them.
ORACLE_COHERENT = 0.263411081877298        # alpha=0.8, beta=0.5i, g=0.5, theta=0, phi=0.7
ORACLE_COHERENT_SVS = 0.521898986932       # alpha=0.5, r=0.6, theta_s=0.4, g=0.5, phi=0.9
ORACLE_THERMAL_SVS = 0.608021282531        # nbar=0.8, r=0.5, g=0.6, phi=0.5


def single_mode_parity_b(amplitudes):
    """Direct parity of a truncated single-mode state: sum (-1)^n |c_n|^2."""
    amplitudes = np.asarray(amplitudes)
    signs = (-1.0) ** np.arange(len(amplitudes))
    return float((signs * np.abs(amplitudes) ** 2).sum())


def coherent_amplitudes(alpha, n_max=60):
    out = np.zeros(n_max + 1, dtype=complex)
    out[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def svs_amplitudes(r, theta_s, n_max=60):
    out = np.zeros(n_max + 1, dtype=complex)
    term = 1.0 / math.sqrt(math.cosh(r))
    out[0] = term
    for m in range(1, n_max // 2 + 1):
        term = term * (-np.exp(1j * theta_s)) * math.tanh(r) * math.sqrt((2 * m - 1) / (2 * m))
        out[2 * m] = term
    return out


class TestVacuum:
    def test_zero_phase(self):
        assert parity_vacuum(GainConfig(0.5), 0.0) == 1.0

    def test_zero_gain(self):
        assert parity_vacuum(GainConfig(0.0), 2.17) == 1.0

    def test_quarter_fringe(self):
        # 1 / (1 + sinh^2 1) = sech^2 1
        assert parity_vacuum(GainConfig(0.5), math.pi / 2) == pytest.approx(
            0.4199743416140261, abs=1e-12)


class TestTwoModeCoherent:
    def test_zero_amplitudes_reduce_to_vacuum(self):
        gain = GainConfig(0.7)
        assert parity_two_mode_coherent(0.0, 0.0, gain, 0.3) == pytest.approx(
            parity_vacuum(gain, 0.3), abs=1e-15)

    def test_zero_phase_mode_a_only(self):
        assert parity_two_mode_coherent(1.0, 0.0, GainConfig(0.9, 1.1), 0.0) == 1.0

    def test_oracle_value(self):
        value = parity_two_mode_coherent(0.8, 0.5j, GainConfig(0.5), 0.7)
        assert value == pytest.approx(ORACLE_COHERENT, abs=1e-7)


class TestCoherentSvs:
    def test_r_zero_reduces_to_coherent(self):
        gain = GainConfig(0.6, 0.4)
        for alpha in (0.3, 0.7 - 0.2j):
            assert parity_coherent_svs(alpha, 0.0, 0.0, gain, 1.1) == pytest.approx(
                parity_two_mode_coherent(alpha, 0.0, gain, 1.1), abs=1e-15)

    def test_zero_phase(self):
        assert parity_coherent_svs(0.0, 0.6, 0.0, GainConfig(0.5), 0.0) == 1.0

    def test_oracle_value(self):
        value = parity_coherent_svs(0.5, 0.6, 0.4, GainConfig(0.5), 0.9)
        assert value == pytest.approx(ORACLE_COHERENT_SVS, abs=1e-6)

    def test_negative_r_rejected(self):
        with pytest.raises(DomainError):
            parity_coherent_svs(0.5, -0.1, 0.0, GainConfig(0.5), 0.9)


class TestThermalSvs:
    def test_nbar_zero_reduces_to_svs(self):
        gain = GainConfig(0.5, 0.9)
        for r in (0.0, 0.4, 0.8):
            assert parity_thermal_svs(0.0, r, gain, 0.8) == pytest.approx(
                parity_coherent_svs(0.0, r, 0.0, gain, 0.8), abs=1e-15)

    def test_zero_phase(self):
        assert parity_thermal_svs(0.5, 0.0, GainConfig(0.5), 0.0) == 1.0

    def test_oracle_value(self):
        value = parity_thermal_svs(0.8, 0.5, GainConfig(0.6), 0.5)
        assert value == pytest.approx(ORACLE_THERMAL_SVS, abs=1e-6)


class TestVacuumFock:
    def test_n_zero_is_vacuum(self):
        gain = GainConfig(0.4, 0.2)
        for phi in (0.0, 0.9, 2.8):
            assert parity_vacuum_fock(0, gain, phi) == pytest.approx(
                parity_vacuum(gain, phi), abs=1e-15)

    def test_identity_interferometer(self):
        assert parity_vacuum_fock(1, GainConfig(0.5), 0.0) == -1.0

    def test_quarter_fringe_n1(self):
        # magnitude matches the sign-free form; the sign is fixed by the oracle
        value = parity_vacuum_fock(1, GainConfig(0.5), math.pi / 2)
        assert value == pytest.approx(-0.17637844761413468, abs=1e-8)
        printed = parity_vacuum_fock_printed(1, GainConfig(0.5), math.pi / 2)
        assert printed == pytest.approx(+0.17637844761413468, abs=1e-8)


class TestDispatch:
    def test_matches_direct_calls(self):
        gain = GainConfig(0.5, 0.3)
        cases = [
            (TwoModeVacuum(), parity_vacuum(gain, math.pi / 2), math.pi / 2),
            (VacuumFock(n=2), parity_vacuum_fock(2, GainConfig(0.3), 1.0), 1.0),
            (CoherentSqueezed(alpha=0.5, r=0.6, theta_s=0.4),
             parity_coherent_svs(0.5, 0.6, 0.4, GainConfig(0.5), 0.9), 0.9),
        ]
        gains = [gain, GainConfig(0.3), GainConfig(0.5)]
        for (state, expected, phi), g in zip(cases, gains):
            assert parity_signal(state, g, phi) == expected

    def test_thermal_dispatch_drops_theta_s(self):
        gain = GainConfig(0.6)
        for theta_s in (0.0, 1.3, 4.0):
            state = ThermalSqueezed(nbar=0.8, r=0.5, theta_s=theta_s)
            assert parity_signal(state, gain, 0.5) == parity_thermal_svs(0.8, 0.5, gain, 0.5)


class TestZeroPhaseIdentities:
    """At phi = 0 the interferometer is the identity, so the signal equals
    the mode-b parity of the input state."""

    def test_coherent(self):
        for beta in (0.3, 0.9j, -0.5 + 0.4j):
            direct = single_mode_parity_b(coherent_amplitudes(beta))
            value = parity_two_mode_coherent(0.7, beta, GainConfig(0.8, 0.2), 0.0)
            assert value == pytest.approx(direct, abs=1e-8)
            assert value == pytest.approx(math.exp(-2 * abs(beta) ** 2), abs=1e-12)

    def test_squeezed_vacuum(self):
        for r in (0.2, 0.6):
            direct = single_mode_parity_b(svs_amplitudes(r, 0.7))
            assert parity_coherent_svs(0.4, r, 0.7, GainConfig(0.5), 0.0) == pytest.approx(
                direct, abs=1e-8)

    def test_fock(self):
        for n in range(5):
            direct = (-1.0) ** n
            assert parity_vacuum_fock(n, GainConfig(0.9), 0.0) == pytest.approx(direct, abs=1e-12)

    def test_vacuum_and_thermal(self):
        assert parity_vacuum(GainConfig(1.1), 0.0) == 1.0
        assert parity_thermal_svs(0.0, 0.0, GainConfig(0.7), 0.0) == 1.0


class TestReductionChain:
    def test_chain_random(self):
        rng = np.random.default_rng(31415)
        for _ in range(200):
            gain = GainConfig(rng.uniform(0, 1.2), rng.uniform(0, TWO_PI))
            phi = rng.uniform(0, TWO_PI)
            alpha = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
            r = rng.uniform(0, 1)
            assert abs(parity_coherent_svs(alpha, 0.0, 0.0, gain, phi)
                       - parity_two_mode_coherent(alpha, 0.0, gain, phi)) <= 1e-12
            assert abs(parity_thermal_svs(0.0, r, gain, phi)
                       - parity_coherent_svs(0.0, r, 0.0, gain, phi)) <= 1e-12
            assert abs(parity_two_mode_coherent(0.0, 0.0, gain, phi)
                       - parity_vacuum(gain, phi)) <= 1e-12
            assert abs(parity_vacuum_fock(0, gain, phi) - parity_vacuum(gain, phi)) <= 1e-12


def _random_state(rng):
    kind = rng.integers(0, 5)
    if kind == 0:
        return TwoModeVacuum()
    if kind == 1:
        return TwoModeCoherent(alpha=rng.uniform(-1, 1) * 1.5 + 1.5j * rng.uniform(-1, 1),
                               beta=rng.uniform(-1, 1) * 1.5 + 1.5j * rng.uniform(-1, 1))
    if kind == 2:
        return CoherentSqueezed(alpha=1.5 * rng.uniform(-1, 1), r=rng.uniform(0, 1),
                                theta_s=rng.uniform(0, TWO_PI))
    if kind == 3:
        return ThermalSqueezed(nbar=rng.uniform(0, 2), r=rng.uniform(0, 1),
                               theta_s=rng.uniform(0, TWO_PI))
    return VacuumFock(n=int(rng.integers(0, 7)))


class TestSignalProperties:
    def test_bounded(self):
        rng = np.random.default_rng(123)
        for _ in range(1000):
            state = _random_state(rng)
            gain = GainConfig(rng.uniform(0, 1.5), rng.uniform(0, TWO_PI))
            phi = rng.uniform(0, TWO_PI)
            assert abs(parity_signal(state, gain, phi)) <= 1.0 + 1e-12

    def test_periodic(self):
        rng = np.random.default_rng(456)
        for _ in range(1000):
            state = _random_state(rng)
            gain = GainConfig(rng.uniform(0, 1.5), rng.uniform(0, TWO_PI))
            phi = rng.uniform(0, TWO_PI)
            assert abs(parity_signal(state, gain, phi)
                       - parity_signal(state, gain, phi + TWO_PI)) <= 1e-12


class TestPhaseSensitivity:
    def test_vacuum_near_optimum(self):
        value = phase_sensitivity(TwoModeVacuum(), GainConfig(0.5), 0.01)
        assert value == pytest.approx(0.8509181282393216, rel=0.01)

    def test_stationary_point_raises(self):
        with pytest.raises(DerivativeVanishes):
            phase_sensitivity(TwoModeVacuum(), GainConfig(0.5), 0.0)

    def test_fock_against_analytic_derivative(self):
        # d/dphi of (-1)^n q^{n+1} with q = 1/(1 + 2 sin^2(phi/2) sinh^2 2g)
        n, g, phi = 2, 0.5, 0.01
        state, gain = VacuumFock(n=n), GainConfig(g)
        q = parity_vacuum(gain, phi)
        p = (-1.0) ** n * q ** (n + 1)
        dq_dphi = -(q ** 2) * math.sin(phi) * math.sinh(2 * g) ** 2
        dp_dphi = (-1.0) ** n * (n + 1) * q ** n * dq_dphi
        expected = math.sqrt(1.0 - p * p) / abs(dp_dphi)
        value = phase_sensitivity(state, gain, phi)
        assert value == pytest.approx(expected, rel=1e-6)
        # steeper slope for larger n: better sensitivity than the vacuum
        assert value < phase_sensitivity(TwoModeVacuum(), gain, phi)

    def test_bad_fd_step(self):
        with pytest.raises(DomainError):
            phase_sensitivity(TwoModeVacuum(), GainConfig(0.5), 0.3, fd_step=0.0)


class TestVacuumOptimalSensitivity:
    def test_reference_values(self):
        assert vacuum_optimal_sensitivity(0.5) == pytest.approx(0.8509181282393216, abs=1e-12)
        assert vacuum_optimal_sensitivity(0.1) == pytest.approx(4.966821568814516, abs=1e-9)

    def test_forms_agree(self):
        for g in (0.1, 0.3, 0.5, 1.0, 2.0):
            sh2 = math.sinh(g) ** 2
            explicit = 1.0 / math.sqrt(2 * sh2 * (2 * sh2 + 2))
            assert abs(vacuum_optimal_sensitivity(g) - explicit) <= 1e-12

    def test_large_gain_asymptote(self):
        g = 8.0
        assert vacuum_optimal_sensitivity(g) == pytest.approx(2.0 * math.exp(-2.0 * g), rel=1e-3)

    def test_zero_gain_rejected(self):
        with pytest.raises(DomainError):
            vacuum_optimal_sensitivity(0.0)
