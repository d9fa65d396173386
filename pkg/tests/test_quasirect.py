import pytest

from wavelab.core.errors import DegenerateFamilyError
from wavelab.euler import GasParameters, gamma_minus, gamma_plus, gamma_zero, h_acoustic, transformed_basis
from wavelab.fields import StateVector, scale_field
from wavelab.quasirect import (
    CriterionConfig,
    CriterionFactory,
    coordinate_check,
    curl_span_test,
    dual_frame,
    exactness_check,
    exactness_orientation,
    flux_integral_test,
    rescaling_convention,
    riemann_invariant_coordinates,
    span_test,
    verify_rescaling,
)
from wavelab.fields.vectorfield import random_states
from wavelab.types import Criterion

KAPPA = 1.4


def test_acoustic_pair_is_quasi_rectifiable(gas):
    report = span_test([gamma_plus(gas.kappa), gamma_minus(gas.kappa)], samples=50, seed=7)
    assert report.verdict
    assert report.seed == 7
    assert report.per_pair[0].max_residual < 1e-10


def test_acoustic_entropic_pair_is_not():
    report = span_test([gamma_plus(KAPPA), gamma_zero()], samples=20)
    assert not report.verdict
    assert report.failing_pairs == [("gamma+", "gamma0")]


def test_full_triple_fails_only_on_mixed_pairs():
    report = span_test([gamma_plus(KAPPA), gamma_zero(), gamma_minus(KAPPA)], samples=20)
    assert not report.verdict
    passed = {row.labels: row.passed for row in report.per_pair}
    assert passed[("gamma+", "gamma-")]
    assert not passed[("gamma+", "gamma0")]
    assert not passed[("gamma0", "gamma-")]


def test_dependent_pair_raises():
    with pytest.raises(DegenerateFamilyError):
        span_test([gamma_plus(KAPPA), gamma_plus(KAPPA)], samples=5)


def test_curl_and_span_agree_pairwise():
    family = [gamma_plus(KAPPA), gamma_zero(), gamma_minus(KAPPA)]
    span = span_test(family, samples=30, seed=3)
    curl = curl_span_test(family, samples=30, seed=3)
    assert [row.passed for row in span.per_pair] == [row.passed for row in curl.per_pair]


def test_curl_needs_three_fields():
    with pytest.raises(ValueError):
        curl_span_test([gamma_plus(KAPPA), gamma_minus(KAPPA)])


def test_acoustic_rescaling_commutes():
    h = h_acoustic(KAPPA)
    report = verify_rescaling([gamma_plus(KAPPA), gamma_minus(KAPPA)], [h, h], samples=50)
    assert report.verdict
    assert report.max_relative < 1e-10


def test_rescaling_orientation_is_h_not_its_reciprocal():
    h = h_acoustic(KAPPA)
    report = rescaling_convention([gamma_plus(KAPPA), gamma_minus(KAPPA)], [h, h], samples=20)
    assert report.convention == "h"


def test_riemann_invariants_are_flow_coordinates():
    h = h_acoustic(KAPPA)
    fields = [scale_field(h, gamma_plus(KAPPA)), scale_field(h, gamma_minus(KAPPA))]
    coordinates = riemann_invariant_coordinates(KAPPA, StateVector(1.0, 1.0, 0.0))
    assert coordinate_check(fields, coordinates, samples=50).verdict


def test_dual_frame_pairs_to_identity(rng):
    frame = dual_frame([gamma_plus(KAPPA), gamma_zero(), gamma_minus(KAPPA)])
    assert frame.max_pairing_error(random_states(rng, 30)) < 1e-10


def test_flux_limit_separates_pairs(unit_state):
    family = [gamma_plus(KAPPA), gamma_zero(), gamma_minus(KAPPA)]
    table = flux_integral_test(family, unit_state, pairs=[(0, 2), (0, 1)])
    acoustic, mixed = table.rows
    assert abs(acoustic.limit) < 1e-5
    assert abs(mixed.limit) > 0.1


def test_flux_radii_must_decrease(unit_state):
    with pytest.raises(ValueError):
        flux_integral_test([gamma_plus(KAPPA), gamma_minus(KAPPA)], unit_state, radii=[0.1, 0.2])


def test_factory_builds_each_criterion():
    for criterion in Criterion:
        built = CriterionFactory.create_criterion(criterion, CriterionConfig(samples=3))
        assert built.criterion == criterion


def test_transformed_basis_is_quasi_rectifiable():
    w1, w2 = transformed_basis(GasParameters(kappa=2.0))
    family = [w1, w2, gamma_zero()]
    assert span_test(family, samples=100, seed=5).verdict
    assert curl_span_test(family, samples=100, seed=5).verdict


def test_acoustic_dual_form_is_exact_with_reciprocal_rescaling():
    eta_plus = dual_frame([gamma_plus(KAPPA), gamma_zero(), gamma_minus(KAPPA)]).one_forms[0]
    h = h_acoustic(KAPPA)
    distribution = [gamma_plus(KAPPA), gamma_minus(KAPPA)]

    assert exactness_check(eta_plus, h.reciprocal(), distribution, samples=30, seed=2).verdict
    direct = exactness_check(eta_plus, h, distribution, samples=30, seed=2)
    assert not direct.verdict
    assert direct.max_value > 0.01

    orientation = exactness_orientation(eta_plus, h, distribution, samples=30, seed=2)
    assert (orientation.direct, orientation.inverse) == (False, True)
    assert orientation.convention == "1/h"
