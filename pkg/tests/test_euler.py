import math

import numpy as np
import pytest

from wavelab.core.profiles import Profile
from wavelab.euler import (
    DoubleWaveSolution,
    GasParameters,
    RiemannWaveSolution,
    characteristic_fields,
    classical_double_wave,
    gamma_minus,
    gamma_plus,
    gamma_zero,
    integrate_double_wave,
    printed_double_wave_mismatch,
    propagation_sign,
    reduced_matrices,
    reduced_matrix,
    reduced_matrix_closed_form,
    simple_wave,
    velocity_slope_error,
)
from wavelab.fields import StateVector, lie_bracket
from wavelab.solver import residual_check
from wavelab.types import Convention, SystemKind, WaveKind


def _c(v: StateVector, kappa: float) -> float:
    return math.sqrt(kappa * v.p / v.rho)


def test_characteristic_fields_are_eigenvectors(gas, states):
    for field in characteristic_fields(gas):
        for v in states[:20]:
            assert field.eigen_residual(v) < 1e-10


def test_acoustic_bracket_is_multiple_of_w2(gas, states):
    bracket = lie_bracket(gamma_plus(gas.kappa), gamma_minus(gas.kappa))
    for v in states:
        expected = [0.0, 0.0, 0.5 * (1.0 - gas.kappa) * 2.0 * _c(v, gas.kappa)]
        np.testing.assert_allclose(bracket.value(v), expected, atol=1e-8)


def test_acoustic_entropic_brackets(gas, states):
    plus = lie_bracket(gamma_plus(gas.kappa), gamma_zero())
    minus = lie_bracket(gamma_minus(gas.kappa), gamma_zero())
    for v in states:
        half = _c(v, gas.kappa) / (2.0 * v.rho)
        np.testing.assert_allclose(plus.value(v), [-1.0, 0.0, half], atol=1e-8)
        np.testing.assert_allclose(minus.value(v), [-1.0, 0.0, -half], atol=1e-8)


def test_propagation_sign_per_convention():
    assert propagation_sign(Convention.POSITIVE) == -1.0
    assert propagation_sign(Convention.STANDARD) == 1.0


def test_reduced_matrix_triple_product_matches_closed_form(states):
    g = GasParameters(kappa=3.0)
    for v in states:
        np.testing.assert_allclose(reduced_matrix(v, g), reduced_matrix_closed_form(v, g), atol=1e-11, rtol=1e-12)


def test_reduced_matrix_spectrum(states):
    arr = np.array([v.as_array() for v in states])
    lam = np.sort(np.linalg.eigvals(reduced_matrices(arr, 3.0)).real, axis=1)
    c = np.sqrt(3.0 * arr[:, 1] / arr[:, 0])
    u = arr[:, 2]
    expected = np.sort(np.column_stack([u - c, u, u + c]), axis=1)
    np.testing.assert_allclose(lam, expected, atol=1e-10, rtol=1e-10)


def test_entropic_simple_wave_keeps_pressure_and_velocity():
    curve = simple_wave(WaveKind.ENTROPIC, GasParameters(), [0.5, 1.0, 2.0])
    np.testing.assert_allclose(curve.states[:, 1], 1.0)
    np.testing.assert_allclose(curve.states[:, 2], 0.0)


@pytest.mark.parametrize("kind", [WaveKind.S_PLUS, WaveKind.S_MINUS])
def test_acoustic_simple_wave_is_isentropic(kind):
    g = GasParameters(kappa=1.4)
    curve = simple_wave(kind, g, np.linspace(-0.3, 0.3, 61))
    assert curve.relation_error < 1e-7
    assert velocity_slope_error(curve, g.kappa) < 1e-3


def test_classical_double_wave_matches_integrated_flow(gas):
    base = StateVector(1.0, 1.0, 0.0)
    for r1, r2 in [(0.1, 0.0), (0.0, -0.1), (0.05, 0.08)]:
        exact = classical_double_wave(r1, r2, base, gas.kappa).as_array()
        integrated = integrate_double_wave(r1, r2, base, gas.kappa).as_array()
        np.testing.assert_allclose(exact, integrated, rtol=1e-8)


def test_printed_double_wave_is_rescaled_flow_only_when_isothermal():
    off = printed_double_wave_mismatch(0.1, 0.2, GasParameters(kappa=1.4))
    on = printed_double_wave_mismatch(0.1, 0.2, GasParameters(kappa=1.0))
    assert max(row["mismatch"] for row in off.values()) > 1e-3
    assert max(row["mismatch"] for row in on.values()) < 1e-6


def test_entropic_riemann_wave_solves_full_system():
    base = StateVector(1.0, 1.0, 0.3)
    wave = RiemannWaveSolution(WaveKind.ENTROPIC, Profile("bump", 0.2, 0.5, 0.2), base, 1.4)
    points = [(x, t) for x in np.linspace(0.3, 0.7, 16) for t in (0.0, 0.05, 0.1, 0.2)]
    assert residual_check(wave, SystemKind.FULL, points, GasParameters(kappa=1.4)) < 1e-6


def test_double_wave_solves_full_system_at_kappa_three():
    base = StateVector(1.0, 1.0, 0.0)
    wave = DoubleWaveSolution(Profile("bump", 0.05, 0.4, 0.2), Profile("bump", 0.05, 0.6, 0.2), base, 3.0)
    points = [(x, t) for x in np.linspace(0.2, 0.8, 16) for t in (0.0, 0.01, 0.03, 0.05)]
    assert residual_check(wave, SystemKind.FULL, points, GasParameters(kappa=3.0)) < 1e-6


def test_double_wave_accepts_root_converged_to_machine_precision():
    base = StateVector(1.0, 1.0, 0.0)
    phi1, phi2 = Profile("bump", 0.05, 0.4, 0.2), Profile("bump", 0.05, 0.6, 0.2)
    wave = DoubleWaveSolution(phi1, phi2, base, 3.0)
    for x in (0.55999, 0.56001):
        r1, r2 = wave.invariants(x, 0.05)
        v = wave(x, 0.05)
        assert r1 == pytest.approx(phi1(x + (v.u + _c(v, 3.0)) * 0.05), abs=1e-10)
        assert r2 == pytest.approx(phi2(x + (v.u - _c(v, 3.0)) * 0.05), abs=1e-10)
