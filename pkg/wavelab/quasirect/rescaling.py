"""Rescaling functions, dual frames and the exactness form of the integrating-factor criterion."""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from settings import settings
from wavelab.core.errors import DegenerateFamilyError
from wavelab.core.utils import make_rng
from wavelab.fields import dual
from wavelab.fields.calculus import derivative_along, field_matrix, lie_bracket, scale_field
from wavelab.fields.vectorfield import (
    CovectorField,
    ScalarField,
    StateVector,
    VectorField,
    random_states,
)
from wavelab.schemas import (
    ConventionReport,
    CoordinateReport,
    ExactnessReport,
    RescalingReport,
)
from wavelab.types import DiffMode

logger = logging.getLogger(__name__)


def _states(samples: int, seed: Optional[int]) -> tuple:
    seed = settings.SEED if seed is None else seed
    return random_states(make_rng(seed), samples), seed


def verify_rescaling(
    family: Sequence[VectorField],
    h: Sequence[ScalarField],
    samples: int = 100,
    seed: Optional[int] = None,
) -> RescalingReport:
    """
    Check that the rescaled fields h_i X_i commute pairwise.

    A pair passes at a state when |[h_i X_i, h_j X_j]| is at most
    DERIVATIVE_TOL times |h_i X_i| |h_j X_j|.

    Raises:
        ValueError: If family and h differ in length.
        StateDomainError: If some h_i vanishes at a sampled state.
    """
    if len(family) != len(h):
        raise ValueError(f"Need one rescaling per field, got {len(h)} for {len(family)}")
    states, seed = _states(samples, seed)
    rescaled = [scale_field(hi, xi) for hi, xi in zip(h, family)]
    brackets = {
        (i, j): lie_bracket(rescaled[i], rescaled[j])
        for i, j in itertools.combinations(range(len(family)), 2)
    }
    worst_abs = 0.0
    worst_rel = 0.0
    worst_state = states[0]
    for v in states:
        norms = [float(np.linalg.norm(f.value(v))) for f in rescaled]
        for (i, j), bracket in brackets.items():
            size = float(np.linalg.norm(bracket.value(v)))
            relative = size / (norms[i] * norms[j])
            if relative > worst_rel:
                worst_rel, worst_state = relative, v
            worst_abs = max(worst_abs, size)
    verdict = worst_rel <= settings.DERIVATIVE_TOL
    logger.info(
        "Rescaling %s of %s: verdict=%s (max relative bracket %.3e)",
        [x.label for x in h],
        [f.label for f in family],
        verdict,
        worst_rel,
    )
    return RescalingReport(
        verdict=verdict,
        max_residual=worst_abs,
        max_relative=worst_rel,
        worst_state=worst_state.as_tuple(),
        samples=len(states),
        seed=seed,
    )


def rescaling_convention(
    family: Sequence[VectorField],
    h: Sequence[ScalarField],
    samples: int = 100,
    seed: Optional[int] = None,
) -> ConventionReport:
    """Run verify_rescaling with h and with 1/h and report which orientation commutes."""
    direct = verify_rescaling(family, h, samples, seed).verdict
    inverse = verify_rescaling(family, [x.reciprocal() for x in h], samples, seed).verdict
    return ConventionReport(direct=direct, inverse=inverse)


@dataclass(frozen=True)
class DualFrame:
    """One-forms eta_i with eta_i(X_j) = delta_ij, from the inverse of the field matrix."""

    one_forms: List[CovectorField]
    basis: List[VectorField]

    def max_pairing_error(self, states: Sequence[StateVector]) -> float:
        worst = 0.0
        for v in states:
            pairing = np.array(
                [[eta.value(v) @ x.value(v) for x in self.basis] for eta in self.one_forms]
            )
            worst = max(worst, float(np.max(np.abs(pairing - np.eye(len(self.basis))))))
        return worst


def _inverse_3x3(m: list) -> list:
    (a, b, c), (d, e, f), (g, h, i) = m
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if dual.value_of(det) == 0.0:
        raise DegenerateFamilyError("Field matrix is singular; no dual frame")
    return [
        [(e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det],
        [(f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det],
        [(d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det],
    ]


def dual_frame(basis: Sequence[VectorField]) -> DualFrame:
    """
    Dual one-forms of a pointwise independent three-field family.

    Each eta_i is row i of the inverse of the matrix whose columns are the
    field values, written generically so the forms differentiate exactly.
    """
    if len(basis) != 3:
        raise ValueError(f"A dual frame needs exactly three fields, got {len(basis)}")
    fields = list(basis)

    def row(index: int):
        def func(rho, p, u):
            columns = [f(rho, p, u) for f in fields]
            matrix = [[columns[k][r] for k in range(3)] for r in range(3)]
            return tuple(_inverse_3x3(matrix)[index])

        return func

    mode = DiffMode.FINITE_DIFFERENCE if any(f.approximate for f in fields) else DiffMode.DUAL
    forms = [CovectorField(row(i), f"eta[{fields[i].label}]", mode=mode) for i in range(3)]
    return DualFrame(one_forms=forms, basis=fields)


def exactness_check(
    eta: CovectorField,
    h: ScalarField,
    distribution: Sequence[VectorField],
    samples: int = 100,
    seed: Optional[int] = None,
) -> ExactnessReport:
    """
    Evaluate d(h eta)(X_a, X_b) = X_a(h eta(X_b)) - X_b(h eta(X_a)) - h eta([X_a, X_b]).

    Returns:
        ExactnessReport whose verdict is true iff every value is within
        DERIVATIVE_TOL in magnitude.
    """
    states, seed = _states(samples, seed)
    for v in states:
        if np.linalg.matrix_rank(field_matrix(distribution, v)) < len(distribution):
            raise DegenerateFamilyError(
                "Distribution fields are dependent",
                {"state": v.as_tuple(), "fields": [f.label for f in distribution]},
            )

    def weighted(x: VectorField) -> ScalarField:
        return ScalarField(
            lambda rho, p, u: h(rho, p, u) * eta.pair((rho, p, u), x(rho, p, u)),
            f"{h.label}*eta({x.label})",
        )

    worst = 0.0
    for a, b in itertools.combinations(range(len(distribution)), 2):
        xa, xb = distribution[a], distribution[b]
        along_b = weighted(xb)
        along_a = weighted(xa)
        bracket = lie_bracket(xa, xb)
        for v in states:
            value = (
                derivative_along(xa, along_b, v)
                - derivative_along(xb, along_a, v)
                - h.value(v) * float(eta.value(v) @ bracket.value(v))
            )
            worst = max(worst, abs(value))
    verdict = worst <= settings.DERIVATIVE_TOL
    logger.info("Exactness of %s*%s on %s: %s", h.label, eta.label, [x.label for x in distribution], verdict)
    return ExactnessReport(verdict=verdict, max_value=worst, samples=len(states), seed=seed)


def exactness_orientation(
    eta: CovectorField,
    h: ScalarField,
    distribution: Sequence[VectorField],
    samples: int = 100,
    seed: Optional[int] = None,
) -> ConventionReport:
    """Run exactness_check with h and with 1/h."""
    direct = exactness_check(eta, h, distribution, samples, seed).verdict
    inverse = exactness_check(eta, h.reciprocal(), distribution, samples, seed).verdict
    return ConventionReport(direct=direct, inverse=inverse)


def coordinate_check(
    fields: Sequence[VectorField],
    coordinates: Sequence[ScalarField],
    samples: int = 100,
    seed: Optional[int] = None,
) -> CoordinateReport:
    """Verify X_i(x^j) = delta_ij at sampled states."""
    if len(fields) != len(coordinates):
        raise ValueError(f"Need as many coordinates as fields, got {len(coordinates)} for {len(fields)}")
    states, seed = _states(samples, seed)
    worst = 0.0
    for v in states:
        for i, x in enumerate(fields):
            for j, coordinate in enumerate(coordinates):
                expected = 1.0 if i == j else 0.0
                worst = max(worst, abs(derivative_along(x, coordinate, v) - expected))
    return CoordinateReport(
        verdict=worst <= settings.DERIVATIVE_TOL, max_error=worst, samples=len(states), seed=seed
    )


def riemann_invariant_coordinates(kappa: float, base: StateVector) -> List[ScalarField]:
    """
    Coordinates (r1, r2) of the acoustic double wave through `base`.

    r1 = (c - c_b)/(kappa - 1) + (u - u_b)/2 and r2 = (c - c_b)/(kappa - 1) - (u - u_b)/2
    satisfy (h+ gamma+)(r_j) = delta_1j and (h- gamma-)(r_j) = delta_2j.
    """
    if kappa == 1.0:
        raise ValueError("Riemann-invariant coordinates require kappa != 1")
    c_base = math.sqrt(kappa * base.p / base.rho)

    def r1(rho, p, u):
        return (dual.sqrt(kappa * p / rho) - c_base) / (kappa - 1.0) + 0.5 * (u - base.u)

    def r2(rho, p, u):
        return (dual.sqrt(kappa * p / rho) - c_base) / (kappa - 1.0) - 0.5 * (u - base.u)

    return [ScalarField(r1, "r1"), ScalarField(r2, "r2")]
