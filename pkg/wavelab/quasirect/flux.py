"""Circle-flux criterion: normalized line integrals of X_i x X_j on shrinking circles."""

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from settings import settings
from wavelab.core.errors import QuadratureError
from wavelab.fields.vectorfield import StateVector, VectorField
from wavelab.schemas import FluxRow, FluxTable

logger = logging.getLogger(__name__)

DEFAULT_RADII = (0.4, 0.2, 0.1, 0.05)


def plane_frame(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Gram-Schmidt orthonormal frame of span{a, b}."""
    e1 = a / np.linalg.norm(a)
    rest = b - (b @ e1) * e1
    return e1, rest / np.linalg.norm(rest)


def circle_integral(
    x: VectorField,
    y: VectorField,
    point: StateVector,
    frame: Tuple[np.ndarray, np.ndarray],
    radius: float,
    nodes: int,
) -> float:
    """(1 / pi r^2) times the line integral of X x Y along the circle, Gauss-Legendre in the angle."""
    e1, e2 = frame
    theta, weights = np.polynomial.legendre.leggauss(nodes)
    theta = np.pi * (theta + 1.0)
    weights = np.pi * weights
    centre = point.as_array()
    total = 0.0
    for angle, weight in zip(theta, weights):
        q = StateVector.from_array(centre + radius * (np.cos(angle) * e1 + np.sin(angle) * e2))
        tangent = radius * (-np.sin(angle) * e1 + np.cos(angle) * e2)
        total += weight * float(np.cross(x.value(q), y.value(q)) @ tangent)
    return total / (np.pi * radius**2)


def richardson_limit(radii: Sequence[float], values: Sequence[float]) -> float:
    """Value at r = 0 of the polynomial in r^2 through the samples; odd powers cancel on a circle."""
    r2 = np.asarray(radii, dtype=float) ** 2
    coefficients = np.polynomial.polynomial.polyfit(r2, np.asarray(values, dtype=float), len(r2) - 1)
    return float(coefficients[0])


def flux_integral_test(
    family: Sequence[VectorField],
    point: StateVector,
    radii: Sequence[float] = DEFAULT_RADII,
    nodes: Optional[int] = None,
    pairs: Optional[List[Tuple[int, int]]] = None,
) -> FluxTable:
    """
    Decay table of the normalized circle flux for each pair of the family.

    The circle of radius r lies in the plane through `point` spanned by the
    pair's values at `point`; fields are evaluated at the ambient points of
    the circle.

    Args:
        family: Two or three fields.
        point: Centre state.
        radii: Strictly decreasing positive radii.
        nodes: Gauss-Legendre nodes (default from settings).
        pairs: Restrict to these index pairs; all pairs by default.

    Raises:
        ValueError: If radii are not strictly decreasing and positive.
        QuadratureError: If full and half-order quadrature disagree by more than 1e-6.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0.0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError(f"Radii must be positive and strictly decreasing, got {radii}")
    nodes = nodes or settings.QUADRATURE_NODES
    pairs = pairs or list(itertools.combinations(range(len(family)), 2))

    rows = []
    for i, j in pairs:
        x, y = family[i], family[j]
        frame = plane_frame(x.value(point), y.value(point))
        values = []
        gap = 0.0
        for r in radii:
            full = circle_integral(x, y, point, frame, r, nodes)
            half = circle_integral(x, y, point, frame, r, max(2, nodes // 2))
            gap = max(gap, abs(full - half))
            if abs(full - half) > 1e-6 * max(1.0, abs(full)):
                raise QuadratureError(
                    f"Circle quadrature did not converge for ({x.label}, {y.label}) at r={r}",
                    {"pair": [x.label, y.label], "radius": r, "full": full, "half": half},
                )
            values.append(full)
        limit = richardson_limit(radii, values)
        logger.debug("Flux limit for (%s, %s): %.3e", x.label, y.label, limit)
        rows.append(
            FluxRow(
                pair=(i, j),
                labels=(x.label, y.label),
                radii=radii,
                values=values,
                limit=limit,
                max_order_gap=gap,
            )
        )
    return FluxTable(point=point.as_tuple(), nodes=nodes, rows=rows)
