"""Ideals, quotient fingerprints and coefficient-level identities of a structure table."""

import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from wavelab.fields.calculus import numerical_rank
from wavelab.liealg.closure import BracketEntry, BracketFitter, StructureTable
from wavelab.liealg.graded import ZERO_TOL, GradedElement
from wavelab.schemas import CoefficientChecks, IdealReport, QuotientFingerprint

logger = logging.getLogger(__name__)

ABELIAN_TOL = 1e-8


def _indices(table: StructureTable, elements: Iterable[GradedElement]) -> List[int]:
    out = []
    for element in elements:
        if element not in table.basis:
            raise ValueError(f"{element.label} is not in the structure table basis")
        out.append(table.index(element))
    return out


def ideal_check(table: StructureTable, candidate: Sequence[GradedElement]) -> IdealReport:
    """
    Whether `candidate` spans an Abelian ideal of the truncated algebra.

    Brackets with terms above the truncation grade are listed in
    truncated_pairs; only their in-range part is tested.
    """
    members = _indices(table, candidate)
    labels = table.labels
    outsiders = [k for k in range(len(table.basis)) if k not in members]

    max_internal = 0.0
    for i, j in itertools.combinations(members, 2):
        entry = table.entry(i, j)
        size = float(np.linalg.norm(entry.coefficients))
        if entry.overflow:
            size = max(size, float(np.linalg.norm(list(entry.overflow.values()))))
        max_internal = max(max_internal, size)

    max_outside = 0.0
    violations = []
    truncated = []
    for k in range(len(table.basis)):
        for i in members:
            if k == i:
                continue
            entry = table.entry(k, i)
            if entry.truncated:
                truncated.append((labels[k], labels[i]))
            outside = float(np.max(np.abs(entry.coefficients[outsiders]))) if outsiders else 0.0
            if outside > ABELIAN_TOL:
                violations.append((labels[k], labels[i]))
            max_outside = max(max_outside, outside)

    report = IdealReport(
        candidate=[labels[i] for i in members],
        abelian=max_internal <= ABELIAN_TOL,
        ideal=not violations,
        max_internal=max_internal,
        max_outside=max_outside,
        violations=violations,
        truncated_pairs=truncated,
    )
    logger.info(
        "Ideal check of %d elements: abelian=%s ideal=%s (%d truncated pairs)",
        len(members),
        report.abelian,
        report.ideal,
        len(truncated),
    )
    return report


def fingerprint_from_constants(constants: np.ndarray) -> Tuple[int, int]:
    """
    (dim of the derived algebra, dim of the center) from C[i, j, k].

    The derived algebra is spanned by the bracket vectors C[i, j, :]; the
    center is the kernel of x -> (sum_i x_i C[i, j, :])_j.
    """
    c = np.where(np.abs(constants) > ABELIAN_TOL, constants, 0.0)
    d = c.shape[0]
    if d == 0:
        return 0, 0
    derived = numerical_rank(c.reshape(d * d, d))
    center = d - numerical_rank(c.transpose(1, 2, 0).reshape(d * d, d))
    return derived, center


def quotient_fingerprint(
    table: StructureTable,
    ideal: Sequence[GradedElement],
    expected: Tuple[int, int] = (1, 1),
) -> QuotientFingerprint:
    """
    Bracket table of the basis elements outside `ideal`, taken modulo the ideal.

    Raises:
        ValueError: If `ideal` is not an ideal of the table.
    """
    report = ideal_check(table, ideal)
    if not report.ideal:
        raise ValueError(f"Quotient requires an ideal; violations: {report.violations}")
    members = set(_indices(table, ideal))
    quotient = [k for k in range(len(table.basis)) if k not in members]
    labels = table.labels
    q = len(quotient)

    constants = np.zeros((q, q, q))
    structure = {}
    worst = 0.0
    for a, b in itertools.permutations(range(q), 2):
        i, j = quotient[a], quotient[b]
        entry = table.entry(i, j)
        constants[a, b] = entry.coefficients[quotient]
        worst = max(worst, entry.residual, table.remainders.get((i, j), 0.0))
        if a < b:
            terms = {labels[quotient[k]]: float(c) for k, c in enumerate(constants[a, b]) if abs(c) > ZERO_TOL}
            if terms:
                structure[f"[{labels[i]},{labels[j]}]"] = terms

    derived, center = fingerprint_from_constants(constants)
    fingerprint = QuotientFingerprint(
        quotient=[labels[k] for k in quotient],
        derived_dim=derived,
        center_dim=center,
        structure=structure,
        max_residual=worst,
        expected=expected,
    )
    if not fingerprint.matches_expected:
        logger.warning(
            "Quotient fingerprint (%s, %s) differs from the expected %s",
            derived,
            center,
            expected,
        )
    return fingerprint


def coefficient_checks(table: StructureTable) -> CoefficientChecks:
    """Antisymmetry and Jacobi identities of the structure constants."""
    c = table.constants()
    truncated = table.truncated_mask()
    d = len(table.basis)

    antisymmetry = 0.0
    for i, j in itertools.combinations(range(d), 2):
        if truncated[i, j] or truncated[j, i]:
            continue
        antisymmetry = max(antisymmetry, float(np.max(np.abs(c[i, j] + c[j, i]), initial=0.0)))

    jacobi = 0.0
    checked = 0
    skipped = 0
    hidden = 0
    for i, j, k in itertools.combinations(range(d), 3):
        total = np.zeros(d)
        uses_truncated = False
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            inner = c[x, y]
            used = np.flatnonzero(inner)
            if truncated[x, y] or np.any(truncated[used, z]):
                uses_truncated = True
            total += inner @ c[:, z, :]
        size = float(np.max(np.abs(total)))
        if uses_truncated:
            skipped += 1
            if size > ABELIAN_TOL:
                hidden += 1
            continue
        checked += 1
        jacobi = max(jacobi, size)

    return CoefficientChecks(
        antisymmetry=antisymmetry,
        jacobi=jacobi,
        jacobi_triples=checked,
        skipped_truncated=skipped,
        truncated_violations=hidden,
    )


def state_independence(table: StructureTable, rng_seed: int, states: Optional[int] = None) -> float:
    """
    Largest change of any bracket coefficient when refitted on other random states.

    The refit uses a fresh BracketFitter seeded with `rng_seed`.
    """
    fitter = BracketFitter(table.kappa, states or table.states, rng_seed)
    worst = 0.0
    for (i, j), entry in table.brackets.items():
        vector, _ = fitter.bracket(table.basis[i].canonical(), table.basis[j].canonical())
        original = _entry_vector(table, entry)
        keys = set(vector) | set(original)
        worst = max(worst, max((abs(vector.get(k, 0.0) - original.get(k, 0.0)) for k in keys), default=0.0))
    return worst


def _entry_vector(table: StructureTable, entry: BracketEntry) -> dict:
    out = dict(entry.overflow)
    for k, coefficient in enumerate(entry.coefficients):
        if coefficient == 0.0:
            continue
        for key, value in table.basis[k].canonical().items():
            out[key] = out.get(key, 0.0) + coefficient * value
    return {k: v for k, v in out.items() if abs(v) > ZERO_TOL}
