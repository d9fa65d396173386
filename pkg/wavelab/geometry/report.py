import logging
from typing import Optional, Sequence

import numpy as np

from settings import settings
from wavelab.geometry.foliation import foliation_check
from wavelab.geometry.surfaces import (
    FundamentalForms,
    SurfacePatch,
    curvatures,
    finite_difference_forms,
    fundamental_forms,
    phi_second_form,
    phi_surface,
    printed_phi_second_form,
)
from wavelab.schemas import GeometryReport
from wavelab.types import PatchKind

logger = logging.getLogger(__name__)

DEFAULT_LEAVES = (0.0, 0.25, 0.5, 0.75, 1.0)


def oracle_gap(patch: SurfacePatch, s1, s2, analytic: Optional[FundamentalForms] = None) -> float:
    """
    Largest relative gap between analytic and finite-difference forms.

    First-form entries are scaled by max(E, G) and second-form entries by
    max(|L|, |M|, |N|, 1) at the same point.
    """
    analytic = fundamental_forms(patch, s1, s2) if analytic is None else analytic
    numeric = finite_difference_forms(patch, s1, s2)
    first = np.maximum(analytic.E, analytic.G)
    second = np.maximum.reduce([np.abs(analytic.L), np.abs(analytic.M), np.abs(analytic.N), np.ones_like(analytic.L)])
    gap = 0.0
    for name in ("E", "F", "G"):
        gap = max(gap, float(np.max(np.abs(getattr(numeric, name) - getattr(analytic, name)) / first)))
    for name in ("L", "M", "N"):
        gap = max(gap, float(np.max(np.abs(getattr(numeric, name) - getattr(analytic, name)) / second)))
    return gap


def geometry_report(
    t3_values: Sequence[float] = DEFAULT_LEAVES,
    points_per_side: int = 50,
    foliation_samples: int = 400,
    seed: Optional[int] = None,
) -> GeometryReport:
    """
    Curvature, second-form and foliation measurements over several Phi leaves.

    The closed-form L at (t1, t3) = (0, 0) is compared with the printed
    expression; their ratio is part of the report.
    """
    seed = settings.SEED if seed is None else seed
    max_k = max_mn = max_gap = shortcut = 0.0
    for t3 in t3_values:
        patch = phi_surface(t3)
        s1, s2 = patch.grid(points_per_side, points_per_side)
        forms = fundamental_forms(patch, s1, s2)
        curv = curvatures(patch, s1, s2, forms)
        max_k = max(max_k, float(np.max(np.abs(curv.K))))
        max_mn = max(max_mn, float(np.max(np.abs(forms.M))), float(np.max(np.abs(forms.N))))
        max_gap = max(max_gap, oracle_gap(patch, s1, s2, forms))
        shortcut = max(shortcut, float(np.max(np.abs(curv.H - 0.5 * forms.L))))

    measured = float(phi_second_form(0.0, 0.0))
    printed = float(printed_phi_second_form(0.0, 0.0))
    report = GeometryReport(
        t3_values=[float(t) for t in t3_values],
        points_per_leaf=points_per_side**2,
        max_gaussian=max_k,
        max_mixed_normal=max_mn,
        max_oracle_error=max_gap,
        second_form_origin=measured,
        printed_second_form_origin=printed,
        second_form_ratio=measured / printed,
        mean_curvature_shortcut_gap=shortcut,
        foliation=foliation_check(t3_values, PatchKind.PHI, foliation_samples, seed),
    )
    if report.discrepancy:
        logger.warning(
            "Second form at the origin is %.6g, printed value %.6g (ratio %.3g)", measured, printed, measured / printed
        )
    return report
