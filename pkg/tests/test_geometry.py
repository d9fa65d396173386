import math

import numpy as np
import pytest

from wavelab.core.errors import FoliationInputError, GeometryDomainError, ImmersionError
from wavelab.fields import StateVector
from wavelab.geometry import (
    curvatures,
    foliation_check,
    fundamental_forms,
    geometry_report,
    log_relation_residual,
    oracle_gap,
    phi_second_form,
    phi_surface,
    plane_patch,
    printed_phi_second_form,
    region_map,
    region_map_determinant,
    region_map_inverse,
    region_map_jacobian,
    sigma_surface,
    sphere_octant,
    write_point_cloud,
)
from wavelab.types import PatchKind


def test_region_map_determinant_matches_closed_form():
    for t in [(0.0, 0.0, 0.0), (0.3, -1.2, 0.5), (-0.4, 2.0, -1.0)]:
        det = np.linalg.det(region_map_jacobian(*t))
        assert det == pytest.approx(region_map_determinant(*t), rel=1e-12)
        assert det == pytest.approx(12.0 * math.sqrt(3.0) * math.exp(8.0 * t[0] + t[2]), rel=1e-12)
    assert region_map_determinant(0.0, 0.0, 0.0) == pytest.approx(12.0 * math.sqrt(3.0))


def test_region_map_inverse():
    v = StateVector(math.exp(0.7), math.exp(1.8), 2.0 * math.sqrt(3.0) * 0.4)
    assert region_map_inverse(v) == pytest.approx((0.3, 0.4, 0.1), abs=1e-12)
    back = region_map(*region_map_inverse(v))
    assert back.as_tuple() == pytest.approx(v.as_tuple(), rel=1e-12)


def test_phi_leaf_point_and_tangents():
    patch = phi_surface(0.0)
    np.testing.assert_allclose(patch(0.0, 1.0), [1.0, 1.0, 2.0 * math.sqrt(3.0)])
    np.testing.assert_allclose(patch.d1(0.0, 1.0), [2.0, 6.0, 0.0])
    np.testing.assert_allclose(patch.d2(0.0, 1.0), [0.0, 0.0, 2.0 * math.sqrt(3.0)])


def test_second_form_at_origin_and_printed_ratio():
    assert float(phi_second_form(0.0, 0.0)) == pytest.approx(-24.0 / math.sqrt(10.0))
    ratio = float(phi_second_form(0.0, 0.0)) / float(printed_phi_second_form(0.0, 0.0))
    assert ratio == pytest.approx(-0.5)


def test_phi_forms_and_curvature_on_a_grid():
    t3 = 0.4
    patch = phi_surface(t3)
    s1, s2 = patch.grid(8, 8)
    forms = fundamental_forms(patch, s1, s2)
    rho, p = math.exp(t3) * np.exp(2.0 * s1), np.exp(6.0 * s1)

    np.testing.assert_allclose(forms.E, 4.0 * rho**2 + 36.0 * p**2, rtol=1e-12)
    np.testing.assert_allclose(forms.F, 0.0, atol=1e-12)
    np.testing.assert_allclose(forms.G, 12.0, rtol=1e-12)
    np.testing.assert_allclose(forms.L, phi_second_form(s1, t3), rtol=1e-10)
    np.testing.assert_allclose(forms.M, 0.0, atol=1e-12)
    np.testing.assert_allclose(forms.N, 0.0, atol=1e-12)

    curv = curvatures(patch, s1, s2, forms)
    np.testing.assert_allclose(curv.K, 0.0, atol=1e-12)
    np.testing.assert_allclose(curv.H, forms.L / (2.0 * forms.E), rtol=1e-10)
    assert oracle_gap(patch, s1, s2, forms) < 1e-6


def test_sigma_leaf_is_flat():
    patch = sigma_surface(0.2)
    s1, s2 = patch.grid(6, 6)
    forms = fundamental_forms(patch, s1, s2)
    for value in (forms.L, forms.M, forms.N):
        np.testing.assert_allclose(value, 0.0, atol=1e-12)
    assert oracle_gap(patch, s1, s2, forms) < 1e-6


def test_sigma_needs_positive_t2():
    with pytest.raises(GeometryDomainError):
        sigma_surface(0.0, ((0.0, 2.0), (-1.0, 2.0)))
    with pytest.raises(GeometryDomainError):
        sigma_surface(0.0)(0.5, 0.0)


def test_exp_of_sigma_is_phi():
    t1, t2 = np.meshgrid(np.linspace(0.1, 1.0, 5), np.linspace(0.1, 2.0, 5))
    assert log_relation_residual(0.3, t1, t2) < 1e-12


def test_points_outside_the_domain_rejected():
    with pytest.raises(GeometryDomainError):
        fundamental_forms(phi_surface(0.0), -0.1, 1.0)
    with pytest.raises(GeometryDomainError):
        fundamental_forms(phi_surface(0.0), 0.5, 2.5)
    with pytest.raises(GeometryDomainError):
        fundamental_forms(sigma_surface(0.0), 0.5, 0.0)


def test_phi_forms_on_the_lower_edge():
    forms = fundamental_forms(phi_surface(0.0), 0.0, 1.0)
    assert float(forms.E) == pytest.approx(40.0)
    assert float(forms.G) == pytest.approx(12.0)
    assert float(forms.L) == pytest.approx(-24.0 / math.sqrt(10.0), rel=1e-12)
    assert float(forms.L) == pytest.approx(float(phi_second_form(0.0, 0.0)), rel=1e-12)


def test_sphere_octant_reference():
    patch = sphere_octant()
    s1, s2 = patch.grid(10, 10)
    forms = fundamental_forms(patch, s1, s2)
    curv = curvatures(patch, s1, s2, forms)
    np.testing.assert_allclose(forms.L, -1.0, atol=1e-12)
    np.testing.assert_allclose(forms.N, -np.sin(s1) ** 2, atol=1e-12)
    np.testing.assert_allclose(curv.K, 1.0, atol=1e-10)
    np.testing.assert_allclose(curv.H, -1.0, atol=1e-10)
    assert oracle_gap(patch, s1, s2, forms) < 1e-6


def test_plane_reference():
    patch = plane_patch(origin=(1.0, 2.0, 3.0), a=(1.0, 1.0, 0.0), b=(0.0, 1.0, 1.0))
    s1, s2 = patch.grid(5, 5)
    curv = curvatures(patch, s1, s2)
    np.testing.assert_allclose(curv.K, 0.0, atol=1e-14)
    np.testing.assert_allclose(curv.H, 0.0, atol=1e-14)


def test_degenerate_patch_raises():
    patch = plane_patch(a=(1.0, 0.0, 0.0), b=(2.0, 0.0, 0.0))
    with pytest.raises(ImmersionError):
        fundamental_forms(patch, 0.5, 0.5)


@pytest.mark.parametrize("kind", [PatchKind.PHI, PatchKind.SIGMA])
def test_leaves_are_disjoint(kind):
    report = foliation_check([0.0, 0.5, 1.0], kind, samples=200, seed=9, coverage_states=200)
    assert report.disjoint
    assert report.collisions == []
    assert report.min_distance > 0.0
    assert report.inversion_residual < 1e-10
    assert report.coverage_residual < 1e-10


def test_foliation_rejects_repeated_or_single_leaves():
    with pytest.raises(FoliationInputError):
        foliation_check([0.0, 0.0])
    with pytest.raises(FoliationInputError):
        foliation_check([0.5])


def test_geometry_report_flags_second_form_mismatch():
    report = geometry_report([0.0, 0.5], points_per_side=6, foliation_samples=50, seed=1)
    assert report.second_form_ratio == pytest.approx(-0.5)
    assert report.max_gaussian < 1e-12
    assert report.max_mixed_normal < 1e-12
    assert report.max_oracle_error < 1e-6
    assert report.foliation.disjoint
    assert report.discrepancy


def test_point_cloud_csv(tmp_path):
    path = write_point_cloud([phi_surface(0.0), phi_surface(1.0)], tmp_path / "leaves.csv", points_per_side=3, seed=5)
    lines = path.read_text().splitlines()
    body = [line for line in lines if not line.startswith("#")]
    assert body[0] == "leaf,s1,s2,x,y,z"
    assert len(body) == 1 + 2 * 9
