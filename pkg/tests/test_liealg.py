import pytest

from wavelab.euler import GasParameters
from wavelab.liealg import (
    GradedElement,
    analyze_variant,
    close_under_bracket,
    family,
    parse_element,
    witt_pattern_scan,
)
from wavelab.liealg.variants import CHARACTERISTIC_SEED
from wavelab.types import AlgebraVariant

N = 4


@pytest.fixture(scope="module")
def k_variant():
    return analyze_variant(AlgebraVariant.K, GasParameters(kappa=2.0), N=N, rng_seed=11)


def test_parse_element():
    assert parse_element("rho^-2 w2") == GradedElement(2, "w2")
    assert parse_element(" gamma0 ") == GradedElement(0, "gamma0")
    assert GradedElement(3, "w1").label == "rho^-3 w1"


def test_negative_grade_rejected():
    with pytest.raises(ValueError):
        GradedElement(-1, "w2")


def test_closure_adds_density_powers_of_w2(k_variant):
    report, _ = k_variant
    assert sorted(report.new_elements) == sorted(f"rho^-{n} w2" for n in range(1, N + 1))
    assert report.max_residual < 1e-7


def test_entropic_bracket_shifts_grade(k_variant):
    report, _ = k_variant
    assert report.shift_coefficients
    for n, value in report.shift_coefficients.items():
        assert value == pytest.approx(-(n + 0.5), abs=1e-7)


def test_coefficients_are_antisymmetric_and_satisfy_jacobi(k_variant):
    report, _ = k_variant
    assert report.checks.antisymmetry < 1e-8
    assert report.checks.jacobi < 1e-6


def test_w2_tower_is_an_abelian_ideal_with_measured_quotient(k_variant):
    report, _ = k_variant
    assert report.ideal.abelian
    assert report.ideal.ideal
    assert (report.fingerprint.derived_dim, report.fingerprint.center_dim) == (2, 0)
    assert report.discrepancy


def test_isothermal_quotient_matches_printed_structure():
    report, _ = analyze_variant(AlgebraVariant.K, GasParameters(kappa=1.0), N=N, rng_seed=11)
    assert (report.fingerprint.derived_dim, report.fingerprint.center_dim) == (1, 1)
    assert not report.discrepancy


def test_h_variant_reports_its_structure():
    report, table = analyze_variant(AlgebraVariant.H, GasParameters(kappa=2.0), N=N, rng_seed=11)
    assert report.variant == AlgebraVariant.H
    assert GradedElement(1, "w1") in table.basis
    assert report.discrepancy


def test_structure_table_rows_per_basis_pair():
    table = close_under_bracket(CHARACTERISTIC_SEED, N, GasParameters(kappa=1.4), rng_seed=5)
    size = len(table.basis)
    assert table.constants().shape == (size, size, size)
    assert table.to_markdown().startswith("| [row, col] |")


def test_witt_scan_per_family():
    seed = family("gamma+", range(3)) + family("gamma0", range(3)) + family("w2", range(3))
    scan = witt_pattern_scan(seed, N=6, g=GasParameters(kappa=1.4))
    by_family = {row.family: row for row in scan.families}

    assert by_family["gamma+"].pattern == "witt"
    assert by_family["gamma+"].shift == 0
    assert by_family["gamma+"].c == pytest.approx(1.0, abs=1e-7)

    assert by_family["gamma0"].pattern == "witt"
    assert by_family["gamma0"].shift == 1
    assert by_family["gamma0"].c == pytest.approx(1.0, abs=1e-7)

    assert by_family["w2"].pattern == "abelian"


def test_witt_scan_rejects_grades_above_truncation():
    with pytest.raises(ValueError):
        witt_pattern_scan(family("gamma0", [7]), N=6)
