import math

import numpy as np
import pytest

from wavelab.core.errors import StateDomainError
from wavelab.euler import gamma_minus, gamma_plus, gamma_zero, h_acoustic, transformed_basis
from wavelab.euler.model import GasParameters
from wavelab.fields import (
    ScalarField,
    StateVector,
    VectorField,
    constant_field,
    derivative_along,
    expand_in_span,
    jacobi_residual,
    lie_bracket,
    scale_field,
    unit_scalar,
    wedge_independent,
)
from wavelab.fields import dual
from wavelab.types import DiffMode

SQRT2 = math.sqrt(2.0)


def test_state_vector_rejects_non_positive_density_and_pressure():
    with pytest.raises(StateDomainError):
        StateVector(0.0, 1.0, 0.0)
    with pytest.raises(StateDomainError):
        StateVector(1.0, -1.0, 0.0)


def test_nested_duals_give_second_derivatives():
    def f(x):
        return x * x * x

    outer = dual.new_tag()
    x = dual.Dual(outer, 2.0, 1.0)
    first = dual.jacobian(lambda y: (f(y),), [x])[0][0]
    # d/dx (3 x^2) = 6 x
    assert dual.tangent(first, outer) == pytest.approx(12.0)
    assert dual.value_of(first) == pytest.approx(12.0)


def test_bracket_with_itself_vanishes(states):
    g = gamma_plus(1.4)
    bracket = lie_bracket(g, g)
    for v in states[:10]:
        np.testing.assert_allclose(bracket.value(v), 0.0, atol=1e-14)


def test_bracket_plus_minus_at_unit_state(unit_state):
    value = lie_bracket(gamma_plus(2.0), gamma_minus(2.0)).value(unit_state)
    np.testing.assert_allclose(value, [0.0, 0.0, -SQRT2], atol=1e-12)


def test_bracket_plus_zero_at_unit_state(unit_state):
    value = lie_bracket(gamma_plus(2.0), gamma_zero()).value(unit_state)
    np.testing.assert_allclose(value, [-1.0, 0.0, SQRT2 / 2.0], atol=1e-12)


def test_antisymmetry(states):
    x, y = gamma_plus(1.4), gamma_zero()
    for v in states:
        np.testing.assert_allclose(
            lie_bracket(x, y).value(v), -lie_bracket(y, x).value(v), atol=1e-12
        )


def test_jacobi_identity_for_euler_fields(states):
    x, y, z = gamma_plus(1.4), gamma_zero(), gamma_minus(1.4)
    for v in states:
        assert jacobi_residual(x, y, z, v) < 1e-8


def test_leibniz_rule(states):
    x, y = gamma_plus(2.0), gamma_minus(2.0)
    h = ScalarField(lambda rho, p, u: rho * p + u * u, "h")
    left = lie_bracket(x, scale_field(h, y))
    plain = lie_bracket(x, y)
    for v in states[:30]:
        right = derivative_along(x, h, v) * y.value(v) + h.value(v) * plain.value(v)
        np.testing.assert_allclose(left.value(v), right, rtol=1e-8, atol=1e-8)


def test_bracket_jacobian_matches_finite_differences(states):
    bracket = lie_bracket(gamma_plus(1.4), gamma_zero())
    for v in states[:5]:
        exact = bracket.jacobian(v)
        step = 1e-6
        columns = []
        for k in range(3):
            plus = v.as_array()
            minus = v.as_array()
            plus[k] += step * max(1.0, abs(plus[k]))
            minus[k] -= step * max(1.0, abs(minus[k]))
            width = plus[k] - minus[k]
            columns.append(
                (bracket.value(StateVector.from_array(plus)) - bracket.value(StateVector.from_array(minus)))
                / width
            )
        np.testing.assert_allclose(exact, np.column_stack(columns), rtol=1e-6, atol=1e-6)


def test_wedge_independence_of_characteristic_fields(states):
    family = [gamma_plus(1.4), gamma_zero(), gamma_minus(1.4)]
    assert all(wedge_independent(family, v) for v in states)


def test_repeated_field_is_dependent(unit_state):
    g = gamma_plus(2.0)
    assert not wedge_independent([g, g], unit_state)


def test_transformed_basis_with_entropic_field_is_independent(unit_state):
    w1, w2 = transformed_basis(GasParameters(kappa=2.0))
    assert wedge_independent([w1, w2, gamma_zero()], unit_state)


def test_wedge_independent_rejects_empty_family(unit_state):
    with pytest.raises(ValueError):
        wedge_independent([], unit_state)


def test_expand_plus_minus_bracket_in_its_pair(unit_state):
    gp, gm = gamma_plus(2.0), gamma_minus(2.0)
    expansion = expand_in_span(lie_bracket(gp, gm), [gp, gm], unit_state)
    np.testing.assert_allclose(expansion.coefficients, [-0.5, 0.5], atol=1e-12)
    assert expansion.residual < 1e-12


def test_plus_zero_bracket_leaves_its_pair(unit_state):
    gp, g0 = gamma_plus(2.0), gamma_zero()
    expansion = expand_in_span(lie_bracket(gp, g0), [gp, g0], unit_state)
    assert expansion.residual > 0.1


def test_zero_target_expands_to_zero(unit_state):
    zero = constant_field((0.0, 0.0, 0.0), "0")
    expansion = expand_in_span(zero, [gamma_plus(2.0), gamma_zero()], unit_state)
    np.testing.assert_allclose(expansion.coefficients, 0.0)
    assert expansion.residual == 0.0


def test_vector_in_span_has_negligible_residual(states):
    gp, gm = gamma_plus(1.4), gamma_minus(1.4)
    target = 2.0 * gp - 3.0 * gm
    for v in states:
        assert expand_in_span(target, [gp, gm], v).relative_residual < 1e-10


def test_scaling_by_one_is_identity(states):
    g = gamma_plus(1.4)
    scaled = scale_field(unit_scalar(), g)
    for v in states[:10]:
        np.testing.assert_allclose(scaled.value(v), g.value(v))
        np.testing.assert_allclose(scaled.jacobian(v), g.jacobian(v))


def test_acoustic_rescaling_commutes(states):
    h = h_acoustic(2.0)
    bracket = lie_bracket(scale_field(h, gamma_plus(2.0)), scale_field(h, gamma_minus(2.0)))
    for v in states:
        np.testing.assert_allclose(bracket.value(v), 0.0, atol=1e-12)


def test_inverse_density_times_w2(unit_state):
    _, w2 = transformed_basis(GasParameters(kappa=2.0))
    h = ScalarField(lambda rho, p, u: 1.0 / rho, "1/rho")
    np.testing.assert_allclose(scale_field(h, w2).value(unit_state), [0.0, 0.0, 2.0 * SQRT2])


def test_vanishing_rescaling_is_reported(unit_state):
    h = ScalarField(lambda rho, p, u: rho - 1.0, "rho-1")
    with pytest.raises(StateDomainError):
        scale_field(h, gamma_zero()).value(unit_state)


def test_math_module_field_falls_back_to_finite_differences(unit_state):
    field = VectorField(lambda rho, p, u: (math.sqrt(rho), p, u), "sqrt-rho")
    assert field.mode == DiffMode.FINITE_DIFFERENCE
    assert field.approximate
    np.testing.assert_allclose(field.jacobian(unit_state)[0], [0.5, 0.0, 0.0], rtol=1e-6)
    assert lie_bracket(field, gamma_zero()).approximate
