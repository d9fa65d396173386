"""
State space and the fields that live on it.

Field functions take the three state coordinates (rho, p, u) positionally and
must be written with the operators and the `wavelab.fields.dual` elementary
functions so they accept floats and dual numbers alike. Functions that do
not (for example ones calling `math.sqrt`) are detected on construction and
differentiated by central differences instead, and are marked approximate.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from settings import settings
from wavelab.core.errors import StateDomainError
from wavelab.fields import dual
from wavelab.types import DiffMode

logger = logging.getLogger(__name__)

GenericFunc = Callable[..., Any]

_PROBE = (1.0, 1.0, 0.0)


@dataclass(frozen=True)
class StateVector:
    rho: float
    p: float
    u: float

    def __post_init__(self):
        if not (self.rho > 0.0 and self.p > 0.0):
            raise StateDomainError(
                f"State requires rho > 0 and p > 0, got rho={self.rho}, p={self.p}",
                {"rho": self.rho, "p": self.p, "u": self.u},
            )

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "StateVector":
        rho, p, u = (float(x) for x in values)
        return cls(rho, p, u)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.rho, self.p, self.u)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)


def random_states(rng: np.random.Generator, count: int) -> List[StateVector]:
    """
    Draw states with rho, p log-uniform and u uniform over the configured ranges.
    """
    lo_rho, hi_rho = settings.SAMPLE_RHO_RANGE
    lo_p, hi_p = settings.SAMPLE_P_RANGE
    lo_u, hi_u = settings.SAMPLE_U_RANGE
    rho = np.exp(rng.uniform(np.log(lo_rho), np.log(hi_rho), size=count))
    p = np.exp(rng.uniform(np.log(lo_p), np.log(hi_p), size=count))
    u = rng.uniform(lo_u, hi_u, size=count)
    return [StateVector(float(a), float(b), float(c)) for a, b, c in zip(rho, p, u)]


def _supports_duals(func: GenericFunc) -> bool:
    tag = dual.new_tag()
    try:
        func(*(dual.Dual(tag, x, 1.0) for x in _PROBE))
    except TypeError:
        return False
    return True


def _central_difference(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """Columns d func / d x_k with step FD_STEP scaled by max(1, |x_k|)."""
    columns = []
    for k in range(len(x)):
        step = settings.FD_STEP * max(1.0, abs(x[k]))
        forward = x.copy()
        backward = x.copy()
        forward[k] += step
        backward[k] -= step
        columns.append((func(forward) - func(backward)) / (2.0 * step))
    return np.stack(columns, axis=-1)


class _Field:
    """Shared evaluation and differentiation for vector and covector fields."""

    def __init__(
        self,
        func: GenericFunc,
        label: str,
        jacobian: Optional[GenericFunc] = None,
        mode: Optional[DiffMode] = None,
    ):
        self.func = func
        self.label = label
        self._jacobian = jacobian
        if jacobian is not None:
            self.mode = DiffMode.ANALYTIC
        elif mode is not None:
            self.mode = mode
        elif _supports_duals(func):
            self.mode = DiffMode.DUAL
        else:
            logger.warning(
                "Field %s does not accept dual numbers; using central differences",
                label,
            )
            self.mode = DiffMode.FINITE_DIFFERENCE

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label!r}, mode={self.mode.value})"

    def __call__(self, rho: Any, p: Any, u: Any) -> Tuple[Any, Any, Any]:
        return tuple(self.func(rho, p, u))

    @property
    def approximate(self) -> bool:
        return self.mode == DiffMode.FINITE_DIFFERENCE

    def value(self, v: StateVector) -> np.ndarray:
        return np.array([dual.value_of(c) for c in self(*v.as_tuple())], dtype=float)

    def jacobian_generic(self, x: Sequence[Any]) -> List[List[Any]]:
        """Jacobian at possibly-dual coordinates; entries keep outer perturbations."""
        if self._jacobian is not None:
            return [list(row) for row in self._jacobian(*x)]
        return dual.jacobian(self.func, x)

    def jacobian(self, v: StateVector) -> np.ndarray:
        if self.mode == DiffMode.FINITE_DIFFERENCE:
            return _central_difference(
                lambda x: np.array(self.func(*x), dtype=float), v.as_array()
            )
        rows = self.jacobian_generic(v.as_tuple())
        return np.array([[dual.value_of(c) for c in row] for row in rows], dtype=float)


class VectorField(_Field):
    """A field X(v) on the open cone rho, p > 0 with Jacobian access."""

    def __add__(self, other: "VectorField") -> "VectorField":
        return combine([(1.0, self), (1.0, other)], f"({self.label}+{other.label})")

    def __sub__(self, other: "VectorField") -> "VectorField":
        return combine([(1.0, self), (-1.0, other)], f"({self.label}-{other.label})")

    def __rmul__(self, scalar: float) -> "VectorField":
        return combine([(float(scalar), self)], f"{scalar}*{self.label}")


class CovectorField(_Field):
    """A one-form eta(v); pairing with a vector field gives a scalar field."""

    def pair(self, x: Sequence[Any], vector: Sequence[Any]) -> Any:
        components = self(*x)
        return sum(c * w for c, w in zip(components, vector))


class ScalarField:
    def __init__(
        self,
        func: GenericFunc,
        label: str,
        gradient: Optional[GenericFunc] = None,
        mode: Optional[DiffMode] = None,
    ):
        self.func = func
        self.label = label
        self._gradient = gradient
        if gradient is not None:
            self.mode = DiffMode.ANALYTIC
        elif mode is not None:
            self.mode = mode
        elif _supports_duals(lambda *x: (func(*x),)):
            self.mode = DiffMode.DUAL
        else:
            logger.warning(
                "Scalar field %s does not accept dual numbers; using central differences",
                label,
            )
            self.mode = DiffMode.FINITE_DIFFERENCE

    def __repr__(self) -> str:
        return f"ScalarField({self.label!r}, mode={self.mode.value})"

    def __call__(self, rho: Any, p: Any, u: Any) -> Any:
        return self.func(rho, p, u)

    @property
    def approximate(self) -> bool:
        return self.mode == DiffMode.FINITE_DIFFERENCE

    def value(self, v: StateVector) -> float:
        return dual.value_of(self(*v.as_tuple()))

    def gradient_generic(self, x: Sequence[Any]) -> List[Any]:
        if self._gradient is not None:
            return list(self._gradient(*x))
        return dual.gradient(self.func, x)

    def gradient(self, v: StateVector) -> np.ndarray:
        if self.mode == DiffMode.FINITE_DIFFERENCE:
            return _central_difference(
                lambda x: np.array([self.func(*x)], dtype=float), v.as_array()
            )[0]
        return np.array([dual.value_of(c) for c in self.gradient_generic(v.as_tuple())])

    def reciprocal(self) -> "ScalarField":
        mode = DiffMode.FINITE_DIFFERENCE if self.approximate else DiffMode.DUAL
        return ScalarField(
            lambda rho, p, u: 1.0 / self.func(rho, p, u), f"1/{self.label}", mode=mode
        )


def constant_field(components: Sequence[float], label: str) -> VectorField:
    a, b, c = (float(x) for x in components)
    return VectorField(
        lambda rho, p, u: (a + 0.0 * rho, b + 0.0 * rho, c + 0.0 * rho),
        label,
        jacobian=lambda rho, p, u: ((0.0, 0.0, 0.0),) * 3,
    )


def unit_scalar() -> ScalarField:
    return ScalarField(
        lambda rho, p, u: 1.0 + 0.0 * rho, "1", gradient=lambda rho, p, u: (0.0, 0.0, 0.0)
    )


def combine(terms: Sequence[Tuple[float, VectorField]], label: str) -> VectorField:
    """Constant-coefficient linear combination of vector fields."""
    fields = [f for _, f in terms]
    weights = [float(w) for w, _ in terms]

    def func(rho, p, u):
        values = [f(rho, p, u) for f in fields]
        return tuple(sum(w * val[i] for w, val in zip(weights, values)) for i in range(3))

    if any(f.mode == DiffMode.FINITE_DIFFERENCE for f in fields):
        return VectorField(func, label, mode=DiffMode.FINITE_DIFFERENCE)

    def jac(rho, p, u):
        blocks = [f.jacobian_generic((rho, p, u)) for f in fields]
        return tuple(
            tuple(sum(w * b[i][k] for w, b in zip(weights, blocks)) for k in range(3))
            for i in range(3)
        )

    return VectorField(func, label, jacobian=jac)
