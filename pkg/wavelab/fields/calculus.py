"""Lie brackets, independence tests and span decompositions of vector fields."""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence

import numpy as np
from scipy import linalg

from settings import settings
from wavelab.core.errors import StateDomainError
from wavelab.fields import dual
from wavelab.fields.vectorfield import ScalarField, StateVector, VectorField
from wavelab.types import DiffMode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommutatorExpansion:
    coefficients: np.ndarray
    residual: float
    point: StateVector
    labels: List[str] = field(default_factory=list)
    target_norm: float = 0.0
    basis_norm: float = 0.0
    rank: int = 0

    @property
    def relative_residual(self) -> float:
        """Residual over the target norm, floored at round-off level of the basis."""
        reference = max(self.target_norm, 1e-12 * self.basis_norm)
        if reference == 0.0:
            return self.residual
        return self.residual / reference

    def as_dict(self) -> dict:
        return {
            "coefficients": dict(zip(self.labels, self.coefficients.tolist())),
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "point": self.point.as_tuple(),
            "rank": self.rank,
        }


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """
    [X, Y] = DY.X - DX.Y.

    The returned field is itself differentiable by nested dual numbers unless
    either argument is finite-difference only, in which case the bracket is
    marked approximate.
    """
    label = f"[{X.label},{Y.label}]"
    if X.approximate or Y.approximate:

        def fd_func(rho, p, u):
            v = StateVector(rho, p, u)
            return tuple(Y.jacobian(v) @ X.value(v) - X.jacobian(v) @ Y.value(v))

        logger.warning("Bracket %s uses finite-difference Jacobians", label)
        return VectorField(fd_func, label, mode=DiffMode.FINITE_DIFFERENCE)

    def func(rho, p, u):
        x = (rho, p, u)
        jx = X.jacobian_generic(x)
        jy = Y.jacobian_generic(x)
        xv = X(*x)
        yv = Y(*x)
        return tuple(
            sum(jy[i][k] * xv[k] - jx[i][k] * yv[k] for k in range(3)) for i in range(3)
        )

    return VectorField(func, label, mode=DiffMode.DUAL)


def field_matrix(family: Sequence[VectorField], v: StateVector) -> np.ndarray:
    return np.column_stack([f.value(v) for f in family])


def numerical_rank(matrix: np.ndarray, rtol: Optional[float] = None) -> int:
    rtol = settings.RANK_TOL if rtol is None else rtol
    s = linalg.svd(np.atleast_2d(matrix), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def wedge_independent(family: Sequence[VectorField], v: StateVector) -> bool:
    """True iff the field values at v have full column rank."""
    if not 1 <= len(family) <= 3:
        raise ValueError(f"Family size must be between 1 and 3, got {len(family)}")
    return numerical_rank(field_matrix(family, v)) == len(family)


def expand_in_span(
    target: VectorField, basis: Sequence[VectorField], v: StateVector
) -> CommutatorExpansion:
    """
    Least-squares coefficients of target(v) over the basis values at v.

    Args:
        target: Field to decompose, typically a bracket.
        basis: One to three fields.
        v: Evaluation state.

    Returns:
        CommutatorExpansion with the minimum-norm coefficients and the norm of
        the orthogonal remainder.
    """
    if not 1 <= len(basis) <= 3:
        raise ValueError(f"Basis size must be between 1 and 3, got {len(basis)}")
    a = field_matrix(basis, v)
    b = target.value(v)
    return expand_vector(a, b, v, [f.label for f in basis])


def expand_vector(
    a: np.ndarray, b: np.ndarray, v: StateVector, labels: List[str]
) -> CommutatorExpansion:
    """Minimum-norm least squares of b over the columns of a."""
    scale = np.linalg.norm(a, 2) if a.size else 0.0
    if scale == 0.0:
        coefficients = np.zeros(a.shape[1])
        rank = 0
    else:
        coefficients, _, rank, _ = linalg.lstsq(a, b, cond=settings.RANK_TOL)
    remainder = b - a @ coefficients
    return CommutatorExpansion(
        coefficients=np.asarray(coefficients, dtype=float),
        residual=float(np.linalg.norm(remainder)),
        point=v,
        labels=labels,
        target_norm=float(np.linalg.norm(b)),
        basis_norm=float(scale),
        rank=int(rank),
    )


def _check_nonvanishing(h: ScalarField, hx: Any, x: Sequence[Any]) -> None:
    if dual.value_of(hx) == 0.0:
        point = [dual.value_of(c) for c in x]
        raise StateDomainError(f"Rescaling {h.label} vanishes at {point}", {"point": point})


def scale_field(h: ScalarField, X: VectorField) -> VectorField:
    """Pointwise product hX with Jacobian by the product rule."""
    label = f"{h.label}*{X.label}"

    def func(rho, p, u):
        hx = h(rho, p, u)
        _check_nonvanishing(h, hx, (rho, p, u))
        return tuple(hx * c for c in X(rho, p, u))

    if h.approximate or X.approximate:
        return VectorField(func, label, mode=DiffMode.FINITE_DIFFERENCE)

    def jac(rho, p, u):
        x = (rho, p, u)
        hx = h(*x)
        grad = h.gradient_generic(x)
        xv = X(*x)
        jx = X.jacobian_generic(x)
        return tuple(tuple(hx * jx[i][k] + xv[i] * grad[k] for k in range(3)) for i in range(3))

    return VectorField(func, label, jacobian=jac)


def derivative_along(X: VectorField, h: ScalarField, v: StateVector) -> float:
    """Directional derivative (X h)(v)."""
    return float(h.gradient(v) @ X.value(v))


def jacobi_residual(X: VectorField, Y: VectorField, Z: VectorField, v: StateVector) -> float:
    total = (
        lie_bracket(X, lie_bracket(Y, Z)).value(v)
        + lie_bracket(Y, lie_bracket(Z, X)).value(v)
        + lie_bracket(Z, lie_bracket(X, Y)).value(v)
    )
    return float(np.linalg.norm(total))


def curl_of_cross(X: VectorField, Y: VectorField, v: StateVector) -> np.ndarray:
    """
    curl(X x Y) at v, from the Jacobians of X and Y.

    Uses curl(X x Y) = X div Y - Y div X + DX.Y - DY.X.
    """
    jx = X.jacobian(v)
    jy = Y.jacobian(v)
    xv = X.value(v)
    yv = Y.value(v)
    return xv * np.trace(jy) - yv * np.trace(jx) + jx @ yv - jy @ xv
