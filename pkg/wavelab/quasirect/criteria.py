from typing import Optional, Sequence, Tuple

import numpy as np

from wavelab.fields.calculus import (
    curl_of_cross,
    expand_in_span,
    expand_vector,
    field_matrix,
    lie_bracket,
)
from wavelab.fields.vectorfield import StateVector, VectorField
from wavelab.quasirect.base import CriterionConfig, QuasiRectCriterion
from wavelab.quasirect.flux import DEFAULT_RADII, flux_integral_test
from wavelab.schemas import QuasiRectReport
from wavelab.types import Criterion


class SpanCriterion(QuasiRectCriterion):
    """[X_i, X_j] must lie in span{X_i, X_j}."""

    criterion = Criterion.SPAN

    def pair_residual(
        self, x: VectorField, y: VectorField, v: StateVector
    ) -> Tuple[float, Optional[np.ndarray]]:
        expansion = expand_in_span(lie_bracket(x, y), [x, y], v)
        return expansion.relative_residual, expansion.coefficients


class CurlCriterion(QuasiRectCriterion):
    """curl(X_i x X_j) must lie in span{X_i, X_j}; defined for families of three."""

    criterion = Criterion.CURL

    def _check_family(self, family: Sequence[VectorField]) -> None:
        if len(family) != 3:
            raise ValueError(f"Curl criterion needs exactly three fields, got {len(family)}")

    def pair_residual(
        self, x: VectorField, y: VectorField, v: StateVector
    ) -> Tuple[float, Optional[np.ndarray]]:
        curl = curl_of_cross(x, y, v)
        expansion = expand_vector(field_matrix([x, y], v), curl, v, [x.label, y.label])
        return expansion.relative_residual, expansion.coefficients


def span_test(
    family: Sequence[VectorField],
    samples: int = 100,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> QuasiRectReport:
    return SpanCriterion(CriterionConfig(samples, seed, tolerance)).evaluate(family)


def curl_span_test(
    family: Sequence[VectorField],
    samples: int = 100,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> QuasiRectReport:
    return CurlCriterion(CriterionConfig(samples, seed, tolerance)).evaluate(family)


class FluxCriterion(QuasiRectCriterion):
    """
    Extrapolated circle flux of X_i x X_j must vanish.

    The limit is normalized by |curl(X_i x X_j)| at the centre; radii shrink
    with the smaller of rho and p so every circle stays in the state cone.
    """

    criterion = Criterion.FLUX

    def __init__(self, config: Optional[CriterionConfig] = None):
        config = config or CriterionConfig(samples=10)
        if config.tolerance is None:
            config.tolerance = 1e-6
        super().__init__(config)

    def pair_residual(
        self, x: VectorField, y: VectorField, v: StateVector
    ) -> Tuple[float, Optional[np.ndarray]]:
        factor = min(1.0, v.rho, v.p)
        radii = [r * factor for r in DEFAULT_RADII]
        table = flux_integral_test([x, y], v, radii=radii)
        reference = float(np.linalg.norm(curl_of_cross(x, y, v)))
        limit = abs(table.rows[0].limit)
        return (limit / reference if reference > 0.0 else limit), None


class CriterionFactory:
    @staticmethod
    def create_criterion(
        criterion: Criterion, config: Optional[CriterionConfig] = None
    ) -> QuasiRectCriterion:
        if criterion == Criterion.SPAN:
            return SpanCriterion(config)
        elif criterion == Criterion.CURL:
            return CurlCriterion(config)
        elif criterion == Criterion.FLUX:
            return FluxCriterion(config)
        else:
            raise ValueError(f"Unknown criterion: {criterion}")
