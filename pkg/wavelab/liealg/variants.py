"""The K and H decompositions run end to end on the truncated closure."""

import logging
from typing import List, Optional, Tuple

from settings import settings
from wavelab.euler.model import GasParameters
from wavelab.liealg.closure import BracketFitter, StructureTable, close_under_bracket
from wavelab.liealg.graded import GradedElement, family
from wavelab.liealg.structure import coefficient_checks, ideal_check, quotient_fingerprint
from wavelab.schemas import AlgebraReport
from wavelab.types import AlgebraVariant

logger = logging.getLogger(__name__)

CHARACTERISTIC_SEED = family("gamma+", [0]) + family("gamma-", [0]) + family("gamma0", [0])


def variant_seed(variant: AlgebraVariant) -> Tuple[List[GradedElement], str]:
    """Seed elements and the base of the candidate ideal rho^-n base, n >= 1."""
    variant = AlgebraVariant(variant)
    if variant == AlgebraVariant.K:
        return list(CHARACTERISTIC_SEED), "w2"
    elif variant == AlgebraVariant.H:
        return list(CHARACTERISTIC_SEED) + [GradedElement(1, "w1")], "w1"
    else:
        raise ValueError(f"Unknown algebra variant: {variant}")


def shift_coefficients(table: StructureTable) -> dict:
    """n -> coefficient of rho^-(n+1) w2 in [gamma0, rho^-n w2], for n + 1 within the table."""
    zero = GradedElement(0, "gamma0")
    if zero not in table.basis:
        return {}
    out = {}
    for n in range(1, table.truncation):
        source, target = GradedElement(n, "w2"), GradedElement(n + 1, "w2")
        if source in table.basis and target in table.basis:
            entry = table.entry(table.index(zero), table.index(source))
            out[n] = float(entry.coefficients[table.index(target)])
    return out


def analyze_variant(
    variant: AlgebraVariant,
    g: Optional[GasParameters] = None,
    N: Optional[int] = None,
    rng_seed: Optional[int] = None,
) -> Tuple[AlgebraReport, StructureTable]:
    """
    Close the variant's seed, test its candidate ideal and fingerprint the quotient.

    The report is produced whatever the outcome; a candidate that is not an
    Abelian ideal, or a fingerprint other than (1, 1), shows up as a
    discrepancy rather than an error.
    """
    g = g or GasParameters()
    N = settings.MAX_GRADE if N is None else N
    seed, ideal_base = variant_seed(variant)
    fitter = BracketFitter(g.kappa, seed=rng_seed)
    table = close_under_bracket(seed, N, g, fitter=fitter)

    candidate = [e for e in table.basis if e.base == ideal_base and e.n >= 1]
    ideal = ideal_check(table, candidate)
    fingerprint = quotient_fingerprint(table, candidate) if ideal.ideal else None
    report = AlgebraReport(
        variant=AlgebraVariant(variant).value,
        kappa=g.kappa,
        max_grade=N,
        basis=table.labels,
        new_elements=[e.label for e in table.new_elements],
        max_residual=table.max_residual,
        ideal=ideal,
        fingerprint=fingerprint,
        checks=coefficient_checks(table),
        shift_coefficients=shift_coefficients(table),
        grade_law_violations=table.grade_law_violations(),
    )
    if report.discrepancy:
        logger.warning("Variant %s at kappa=%s differs from the printed structure", report.variant, g.kappa)
    return report, table
