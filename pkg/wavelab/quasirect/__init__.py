from wavelab.quasirect.base import CriterionConfig, QuasiRectCriterion
from wavelab.quasirect.criteria import (
    CriterionFactory,
    CurlCriterion,
    FluxCriterion,
    SpanCriterion,
    curl_span_test,
    span_test,
)
from wavelab.quasirect.flux import flux_integral_test, richardson_limit
from wavelab.quasirect.rescaling import (
    DualFrame,
    coordinate_check,
    dual_frame,
    exactness_check,
    exactness_orientation,
    rescaling_convention,
    riemann_invariant_coordinates,
    verify_rescaling,
)

__all__ = [
    "CriterionConfig",
    "CriterionFactory",
    "CurlCriterion",
    "DualFrame",
    "FluxCriterion",
    "QuasiRectCriterion",
    "SpanCriterion",
    "coordinate_check",
    "curl_span_test",
    "dual_frame",
    "exactness_check",
    "exactness_orientation",
    "flux_integral_test",
    "rescaling_convention",
    "richardson_limit",
    "riemann_invariant_coordinates",
    "span_test",
    "verify_rescaling",
]
