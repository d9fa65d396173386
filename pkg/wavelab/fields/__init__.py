from wavelab.fields.calculus import (
    CommutatorExpansion,
    curl_of_cross,
    derivative_along,
    expand_in_span,
    field_matrix,
    jacobi_residual,
    lie_bracket,
    numerical_rank,
    scale_field,
    wedge_independent,
)
from wavelab.fields.vectorfield import (
    CovectorField,
    ScalarField,
    StateVector,
    VectorField,
    combine,
    constant_field,
    random_states,
    unit_scalar,
)

__all__ = [
    "CommutatorExpansion",
    "CovectorField",
    "ScalarField",
    "StateVector",
    "VectorField",
    "combine",
    "constant_field",
    "curl_of_cross",
    "derivative_along",
    "expand_in_span",
    "field_matrix",
    "jacobi_residual",
    "lie_bracket",
    "numerical_rank",
    "random_states",
    "scale_field",
    "unit_scalar",
    "wedge_independent",
]
