"""Disjointness of the leaves Phi(t3) (or Sigma(t3)) and coverage of the state cone."""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from settings import settings
from wavelab.core.errors import FoliationInputError
from wavelab.core.utils import make_rng
from wavelab.geometry.parametrization import ROOT3, region_map_array, region_map_inverse_array
from wavelab.geometry.surfaces import DEFAULT_DOMAIN, leaf
from wavelab.schemas import FoliationReport, LeafCollision
from wavelab.types import PatchKind

logger = logging.getLogger(__name__)

COLLISION_TOL = 1e-10
MAX_WITNESSES = 10


def leaf_parameters(points: np.ndarray, kind: PatchKind) -> np.ndarray:
    """(t1, t2, t3) of leaf points; Sigma points are inverted through the log map."""
    if PatchKind(kind) == PatchKind.PHI:
        return region_map_inverse_array(points)
    t1 = points[..., 1] / 6.0
    return np.stack([t1, np.exp(points[..., 2]) / (2.0 * ROOT3), points[..., 0] - 2.0 * t1], axis=-1)


def foliation_check(
    t3_values: Sequence[float],
    patch_kind: PatchKind = PatchKind.PHI,
    samples: int = 400,
    seed: Optional[int] = None,
    coverage_states: int = 1000,
) -> FoliationReport:
    """
    Sample each leaf and look for points shared by two leaves.

    Every sampled point is also mapped back to (t1, t2, t3), which must
    return its own leaf, and random states from the sampling box are pushed
    through inverse then forward map to show the leaves fill the cone.

    Raises:
        FoliationInputError: If a t3 value is repeated or fewer than two are given.
    """
    values = [float(t) for t in t3_values]
    if len(set(values)) != len(values):
        raise FoliationInputError("Leaf parameters t3 must be distinct", {"t3_values": values})
    if len(values) < 2:
        raise FoliationInputError("Need at least two leaves", {"t3_values": values})
    kind = PatchKind(patch_kind)
    seed = settings.SEED if seed is None else seed
    rng = make_rng(seed, stream=3)
    (a1, b1), (a2, b2) = DEFAULT_DOMAIN

    params, points = [], []
    inversion = 0.0
    for t3 in values:
        s1 = a1 + (b1 - a1) * (1.0 - rng.random(samples))
        s2 = a2 + (b2 - a2) * (1.0 - rng.random(samples))
        pts = leaf(kind, t3)(s1, s2)
        back = leaf_parameters(pts, kind)
        expected = np.column_stack([s1, s2, np.full(samples, t3)])
        inversion = max(inversion, float(np.max(np.abs(back - expected))))
        params.append(np.column_stack([s1, s2]))
        points.append(pts)

    collisions = []
    min_distance = math.inf
    for i in range(len(values)):
        tree = cKDTree(points[i])
        for j in range(i + 1, len(values)):
            distance, nearest = tree.query(points[j])
            min_distance = min(min_distance, float(distance.min()))
            for k in np.flatnonzero(distance <= COLLISION_TOL)[:MAX_WITNESSES]:
                collisions.append(
                    LeafCollision(
                        t3_a=values[i],
                        t3_b=values[j],
                        params_a=tuple(params[i][nearest[k]]),
                        params_b=tuple(params[j][k]),
                        distance=float(distance[k]),
                    )
                )

    lo = np.array([settings.SAMPLE_RHO_RANGE[0], settings.SAMPLE_P_RANGE[0], settings.SAMPLE_U_RANGE[0]])
    hi = np.array([settings.SAMPLE_RHO_RANGE[1], settings.SAMPLE_P_RANGE[1], settings.SAMPLE_U_RANGE[1]])
    states = lo + (hi - lo) * rng.random((coverage_states, 3))
    recovered = region_map_inverse_array(states)
    coverage = float(np.max(np.abs(region_map_array(recovered) - states) / np.maximum(np.abs(states), 1.0)))
    in_domain = (recovered[:, 0] > a1) & (recovered[:, 0] <= b1) & (recovered[:, 1] > a2) & (recovered[:, 1] <= b2)

    report = FoliationReport(
        patch_kind=kind,
        t3_values=values,
        samples=samples,
        seed=seed,
        disjoint=not collisions,
        min_distance=min_distance,
        collisions=collisions,
        inversion_residual=inversion,
        coverage_residual=coverage,
        coverage_in_domain=float(np.mean(in_domain)),
    )
    if collisions:
        logger.warning("%d leaf collisions found", len(collisions))
    return report
