import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from settings import settings
from wavelab.euler.model import GasParameters
from wavelab.liealg.closure import BracketFitter
from wavelab.liealg.graded import CanonicalVector, GradedElement, canonical_matrix
from wavelab.schemas import WittFamilyReport, WittScanReport

logger = logging.getLogger(__name__)

SHIFTS = (0, 1)


def _norm(vector: CanonicalVector) -> float:
    return float(np.sqrt(sum(v * v for v in vector.values())))


def _project(vector: CanonicalVector, onto: CanonicalVector) -> Tuple[float, float]:
    """Best multiple c of `onto` and the relative remainder |vector - c onto| / |vector|."""
    matrix, keys = canonical_matrix([vector, onto])
    v, u = matrix[:, 0], matrix[:, 1]
    c = float(v @ u / (u @ u))
    size = float(np.linalg.norm(v))
    return c, (float(np.linalg.norm(v - c * u)) / size if size > 0.0 else 0.0)


def _scan_family(
    base: str, grades: List[int], N: int, fitter: BracketFitter, tolerance: float
) -> WittFamilyReport:
    elements = {n: GradedElement(n, base) for n in grades}
    pairs = [(m, n) for m in grades for n in grades if m < n]
    brackets = {
        (m, n): fitter.bracket(elements[m].canonical(), elements[n].canonical())[0]
        for m, n in pairs
    }

    if not pairs:
        return WittFamilyReport(family=base, grades=grades, pattern="none")
    if all(_norm(v) <= 1e-8 for v in brackets.values()):
        return WittFamilyReport(family=base, grades=grades, pattern="abelian")

    best: Optional[WittFamilyReport] = None
    for shift in SHIFTS:
        fits: Dict[Tuple[int, int], Tuple[float, float]] = {}
        truncated = []
        for m, n in pairs:
            target = m + n + shift
            if target > N:
                truncated.append((m, n))
                continue
            fits[(m, n)] = _project(brackets[(m, n)], GradedElement(target, base).canonical())
        if not fits:
            continue
        diffs = np.array([m - n for m, n in fits], dtype=float)
        values = np.array([c for c, _ in fits.values()])
        c = float(diffs @ values / (diffs @ diffs))
        per_grade: Dict[int, float] = {}
        for (m, n), (c_mn, remainder) in fits.items():
            misfit = max(remainder, abs(c_mn - c * (m - n)) / max(1.0, abs(c)))
            per_grade[m + n] = max(per_grade.get(m + n, 0.0), misfit)
        worst = max(per_grade.values())
        pattern = "witt" if worst <= tolerance and abs(c) > tolerance else "none"
        report = WittFamilyReport(
            family=base,
            grades=grades,
            pattern=pattern,
            shift=shift,
            c=c,
            max_fit_residual=worst,
            per_grade_residual=per_grade,
            truncated_pairs=truncated,
        )
        if best is None or report.max_fit_residual < best.max_fit_residual:
            best = report
    return best or WittFamilyReport(family=base, grades=grades, pattern="none")


def witt_pattern_scan(
    seed: Sequence[GradedElement],
    N: Optional[int] = None,
    g: Optional[GasParameters] = None,
    fitter: Optional[BracketFitter] = None,
    tolerance: Optional[float] = None,
) -> WittScanReport:
    """
    Look for [L_m, L_n] = c (m - n) L_(m+n+s) within each base family of the seed.

    Elements sharing a base form one family L_n = rho^-n base. The shift s is
    0 or 1, whichever fits better; c is fitted by least squares over all
    untruncated pairs. Brackets whose target grade exceeds N are listed as
    truncated and left out of the fit.
    """
    N = settings.MAX_GRADE if N is None else N
    g = g or GasParameters()
    tolerance = settings.CLOSURE_TOL if tolerance is None else tolerance
    fitter = fitter or BracketFitter(g.kappa)

    grouped: Dict[str, List[int]] = {}
    for element in seed:
        if element.n > N:
            raise ValueError(f"Seed element {element.label} exceeds grade {N}")
        grouped.setdefault(element.base, [])
        if element.n not in grouped[element.base]:
            grouped[element.base].append(element.n)

    families = [
        _scan_family(base, sorted(grades), N, fitter, tolerance) for base, grades in grouped.items()
    ]
    for report in families:
        logger.info(
            "Witt scan %s grades %s: %s (shift=%s, c=%s)",
            report.family,
            report.grades,
            report.pattern,
            report.shift,
            report.c,
        )
    return WittScanReport(kappa=g.kappa, max_grade=N, families=families)
