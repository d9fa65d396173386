from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from wavelab.types import AlgebraVariant, Criterion, PatchKind, Verdict, WaveKind


class PairResidual(BaseModel):
    pair: Tuple[int, int] = Field(..., description="Indices (i, j) of the pair within the family.")
    labels: Tuple[str, str] = Field(..., description="Labels of the two fields.")
    max_residual: float = Field(
        ..., description="Largest residual over the sampled states, relative to the tested vector's norm."
    )
    passed: bool = Field(..., description="Whether max_residual is within tolerance.")
    coefficients: Optional[List[float]] = Field(
        default=None,
        description="Expansion coefficients over the pair at the first sampled state.",
    )


class QuasiRectReport(BaseModel):
    verdict: bool = Field(..., description="True iff every pair passes the chosen criterion.")
    criterion: Criterion
    samples: int
    seed: int
    tolerance: float
    per_pair: List[PairResidual]
    approximate: bool = Field(
        default=False, description="Set when any Jacobian came from finite differences."
    )

    @property
    def failing_pairs(self) -> List[Tuple[str, str]]:
        return [row.labels for row in self.per_pair if not row.passed]


class FluxRow(BaseModel):
    pair: Tuple[int, int]
    labels: Tuple[str, str]
    radii: List[float]
    values: List[float] = Field(..., description="Normalized circle integrals, one per radius.")
    limit: float = Field(..., description="Richardson-extrapolated value at radius zero.")
    max_order_gap: float = Field(
        ..., description="Largest disagreement between the full and half-order quadrature."
    )


class FluxTable(BaseModel):
    point: Tuple[float, float, float]
    nodes: int
    rows: List[FluxRow]


class RescalingReport(BaseModel):
    verdict: bool
    max_residual: float = Field(..., description="Largest bracket norm of rescaled fields.")
    max_relative: float = Field(
        ..., description="Largest bracket norm divided by the product of the rescaled field norms."
    )
    worst_state: Tuple[float, float, float]
    samples: int
    seed: int


class ExactnessReport(BaseModel):
    verdict: bool
    max_value: float = Field(..., description="Largest |d(h eta)(X_a, X_b)| over pairs and states.")
    samples: int
    seed: int


class ConventionReport(BaseModel):
    direct: bool = Field(..., description="Result of the check with the supplied rescaling h.")
    inverse: bool = Field(..., description="Result of the check with 1/h.")

    @property
    def convention(self) -> str:
        if self.direct and self.inverse:
            return "both"
        if self.direct:
            return "h"
        if self.inverse:
            return "1/h"
        return "neither"


class CoordinateReport(BaseModel):
    verdict: bool
    max_error: float = Field(..., description="Largest |X_i(x^j) - delta_ij| over states.")
    samples: int
    seed: int


class InteractionReport(BaseModel):
    t_min: Optional[float]
    t_max: Optional[float]
    entering: List[WaveKind]
    leaving: List[WaveKind]
    index: int
    verdict: Verdict
    thresholds: Dict[str, float]
    seed: int
    regions: int = Field(default=0, description="Number of disjoint interaction regions detected.")
    type_preserved: Optional[bool] = Field(
        default=None,
        description="For index zero: whether the leaving kinds equal the entering kinds.",
    )


class IdealReport(BaseModel):
    candidate: List[str]
    abelian: bool = Field(..., description="All internal brackets vanish to 1e-8.")
    ideal: bool = Field(
        ..., description="Brackets with every basis element stay in the candidate span, up to truncation."
    )
    max_internal: float
    max_outside: float = Field(..., description="Largest component of a bracket outside the candidate span.")
    violations: List[Tuple[str, str]] = Field(default_factory=list)
    truncated_pairs: List[Tuple[str, str]] = Field(
        default_factory=list, description="Pairs whose bracket has terms above the maximum grade."
    )


class QuotientFingerprint(BaseModel):
    quotient: List[str] = Field(..., description="Basis elements representing the quotient.")
    derived_dim: int
    center_dim: int
    structure: Dict[str, Dict[str, float]] = Field(
        ..., description="Nonzero quotient brackets, keyed '[a,b]' then by element label."
    )
    max_residual: float = Field(..., description="Largest remainder outside ideal plus quotient span.")
    expected: Tuple[int, int] = (1, 1)

    @property
    def matches_expected(self) -> bool:
        return (self.derived_dim, self.center_dim) == tuple(self.expected)


class CoefficientChecks(BaseModel):
    antisymmetry: float = Field(..., description="max |c_ij + c_ji| over untruncated pairs.")
    jacobi: float = Field(..., description="Largest coefficient-level Jacobi sum over untruncated triples.")
    jacobi_triples: int
    skipped_truncated: int
    truncated_violations: int = Field(
        default=0, description="Skipped triples whose Jacobi sum would be nonzero."
    )


class WittFamilyReport(BaseModel):
    family: str
    grades: List[int]
    pattern: str = Field(..., description="'abelian', 'witt' or 'none'.")
    shift: Optional[int] = Field(default=None, description="s in [L_m, L_n] = c (m - n) L_(m+n+s).")
    c: Optional[float] = None
    max_fit_residual: float = 0.0
    per_grade_residual: Dict[int, float] = Field(default_factory=dict)
    truncated_pairs: List[Tuple[int, int]] = Field(default_factory=list)


class WittScanReport(BaseModel):
    kappa: float
    max_grade: int
    families: List[WittFamilyReport]


class AlgebraReport(BaseModel):
    variant: AlgebraVariant
    kappa: float
    max_grade: int
    basis: List[str]
    new_elements: List[str]
    max_residual: float
    ideal: IdealReport
    fingerprint: Optional[QuotientFingerprint] = Field(
        default=None, description="Present only when the candidate is an ideal."
    )
    checks: CoefficientChecks
    shift_coefficients: Dict[int, float] = Field(
        default_factory=dict, description="n -> coefficient of rho^-(n+1) w2 in [gamma0, rho^-n w2]."
    )
    grade_law_violations: List[Tuple[str, str]] = Field(default_factory=list)

    @property
    def discrepancy(self) -> bool:
        """Measured structure differs from the printed 3-dimensional quotient with an Abelian ideal."""
        if not (self.ideal.abelian and self.ideal.ideal):
            return True
        return self.fingerprint is None or not self.fingerprint.matches_expected


class LeafCollision(BaseModel):
    t3_a: float
    t3_b: float
    params_a: Tuple[float, float]
    params_b: Tuple[float, float]
    distance: float


class FoliationReport(BaseModel):
    patch_kind: PatchKind
    t3_values: List[float]
    samples: int
    seed: int
    disjoint: bool
    min_distance: float = Field(..., description="Smallest distance between points of different leaves.")
    collisions: List[LeafCollision] = Field(default_factory=list)
    inversion_residual: float = Field(
        ..., description="Largest parameter error when sampled leaf points are mapped back."
    )
    coverage_residual: float = Field(
        ..., description="Largest state error of map(inverse(v)) over random states in the cone."
    )
    coverage_in_domain: float = Field(
        ..., description="Fraction of random cone states whose parameters fall in the default rectangle."
    )


class GeometryReport(BaseModel):
    t3_values: List[float]
    points_per_leaf: int
    max_gaussian: float
    max_mixed_normal: float = Field(..., description="max(|M|, |N|) over all sampled points of the phi leaves.")
    max_oracle_error: float = Field(..., description="Largest relative gap to the finite-difference oracle.")
    second_form_origin: float
    printed_second_form_origin: float
    second_form_ratio: float
    mean_curvature_shortcut_gap: float = Field(
        ..., description="max |H - L/2| over the samples, the printed shortcut for H."
    )
    foliation: FoliationReport

    @property
    def discrepancy(self) -> bool:
        return abs(self.second_form_ratio - 1.0) > 1e-9 or self.mean_curvature_shortcut_gap > 1e-9
