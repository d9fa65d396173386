"""
The Euler model v_t = A(v) v_x with v = (rho, p, u): coefficient matrix,
characteristic fields, rescalings, the transformed basis and the reduced
matrix of the superposition parametrization.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from wavelab.fields import dual
from wavelab.fields.vectorfield import ScalarField, StateVector, VectorField
from wavelab.types import WaveKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GasParameters:
    kappa: float = 1.4
    A: float = 1.0
    p0: float = 0.0
    u0: float = 0.0

    def __post_init__(self):
        if not self.kappa > 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not self.A > 0.0:
            raise ValueError(f"A must be positive, got {self.A}")

    def require_non_isothermal(self) -> None:
        if self.kappa == 1.0:
            raise ValueError("Sound-wave formulas require kappa != 1")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GasParameters":
        return cls(**{k: float(v) for k, v in data.items()})


def sound_speed(rho: Any, p: Any, kappa: float) -> Any:
    return dual.sqrt(kappa * p / rho)


@dataclass(frozen=True)
class CharacteristicField:
    kind: WaveKind
    gamma: VectorField
    kappa: float

    def speed(self, v: StateVector) -> float:
        c = math.sqrt(self.kappa * v.p / v.rho)
        if self.kind == WaveKind.S_PLUS:
            return v.u + c
        if self.kind == WaveKind.S_MINUS:
            return v.u - c
        return v.u

    def speeds(self, rho: np.ndarray, p: np.ndarray, u: np.ndarray) -> np.ndarray:
        c = np.sqrt(self.kappa * p / rho)
        sign = {WaveKind.S_PLUS: 1.0, WaveKind.ENTROPIC: 0.0, WaveKind.S_MINUS: -1.0}[self.kind]
        return u + sign * c

    def covector(self, v: StateVector) -> Tuple[float, float]:
        """lambda = (-speed, 1) in (t, x) components; x - speed*t is constant along it."""
        return (-self.speed(v), 1.0)

    def eigen_residual(self, v: StateVector) -> float:
        a = euler_matrix(v, self.kappa)
        g = self.gamma.value(v)
        return float(np.linalg.norm(a @ g - self.speed(v) * g))


def euler_matrix(v: StateVector, kappa: float) -> np.ndarray:
    """A(v) = [[u, 0, rho], [0, u, kappa p], [0, 1/rho, u]]."""
    return np.array(
        [[v.u, 0.0, v.rho], [0.0, v.u, kappa * v.p], [0.0, 1.0 / v.rho, v.u]], dtype=float
    )


def euler_matrices(states: np.ndarray, kappa: float) -> np.ndarray:
    """Batched A(v) for an (n, 3) array of states."""
    rho, p, u = states[:, 0], states[:, 1], states[:, 2]
    out = np.zeros((states.shape[0], 3, 3))
    out[:, 0, 0] = u
    out[:, 0, 2] = rho
    out[:, 1, 1] = u
    out[:, 1, 2] = kappa * p
    out[:, 2, 1] = 1.0 / rho
    out[:, 2, 2] = u
    return out


def gamma_plus(kappa: float) -> VectorField:
    def func(rho, p, u):
        return (rho, kappa * p, sound_speed(rho, p, kappa))

    def jac(rho, p, u):
        c = sound_speed(rho, p, kappa)
        return ((1.0, 0.0, 0.0), (0.0, kappa, 0.0), (-c / (2.0 * rho), c / (2.0 * p), 0.0))

    return VectorField(func, "gamma+", jacobian=jac)


def gamma_minus(kappa: float) -> VectorField:
    def func(rho, p, u):
        return (rho, kappa * p, -sound_speed(rho, p, kappa))

    def jac(rho, p, u):
        c = sound_speed(rho, p, kappa)
        return ((1.0, 0.0, 0.0), (0.0, kappa, 0.0), (c / (2.0 * rho), -c / (2.0 * p), 0.0))

    return VectorField(func, "gamma-", jacobian=jac)


def gamma_zero() -> VectorField:
    return VectorField(
        lambda rho, p, u: (1.0 + 0.0 * rho, 0.0 * rho, 0.0 * rho),
        "gamma0",
        jacobian=lambda rho, p, u: ((0.0, 0.0, 0.0),) * 3,
    )


def characteristic_fields(
    g: GasParameters,
) -> Tuple[CharacteristicField, CharacteristicField, CharacteristicField]:
    """(S+, E, S-) with speeds u + c, u, u - c."""
    return (
        CharacteristicField(WaveKind.S_PLUS, gamma_plus(g.kappa), g.kappa),
        CharacteristicField(WaveKind.ENTROPIC, gamma_zero(), g.kappa),
        CharacteristicField(WaveKind.S_MINUS, gamma_minus(g.kappa), g.kappa),
    )


def transformed_basis(g: GasParameters) -> Tuple[VectorField, VectorField]:
    """w1 = gamma+ + gamma- = (2 rho, 2 kappa p, 0), w2 = gamma+ - gamma- = (0, 0, 2c)."""
    kappa = g.kappa

    def w1(rho, p, u):
        return (2.0 * rho, 2.0 * kappa * p, 0.0 * rho)

    def w1_jac(rho, p, u):
        return ((2.0, 0.0, 0.0), (0.0, 2.0 * kappa, 0.0), (0.0, 0.0, 0.0))

    def w2(rho, p, u):
        return (0.0 * rho, 0.0 * rho, 2.0 * sound_speed(rho, p, kappa))

    def w2_jac(rho, p, u):
        c = sound_speed(rho, p, kappa)
        return ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (-c / rho, c / p, 0.0))

    return VectorField(w1, "w1", jacobian=w1_jac), VectorField(w2, "w2", jacobian=w2_jac)


def base_field(name: str, kappa: float) -> VectorField:
    """Look up one of gamma+, gamma-, gamma0, w1, w2 by name."""
    if name == "gamma+":
        return gamma_plus(kappa)
    elif name == "gamma-":
        return gamma_minus(kappa)
    elif name == "gamma0":
        return gamma_zero()
    elif name == "w1":
        return transformed_basis(GasParameters(kappa=kappa))[0]
    elif name == "w2":
        return transformed_basis(GasParameters(kappa=kappa))[1]
    else:
        raise ValueError(f"Unknown base field: {name}")


# Rescaling functions: h+- for the acoustic pair, h2 for w2, h0 for gamma0.
def h_acoustic(kappa: float) -> ScalarField:
    """h = (kappa p / rho)^(-1/2)."""

    def grad(rho, p, u):
        h = (kappa * p / rho) ** -0.5
        return (h / (2.0 * rho), -h / (2.0 * p), 0.0)

    return ScalarField(lambda rho, p, u: (kappa * p / rho) ** -0.5, "h_pm", gradient=grad)


def h_two() -> ScalarField:
    """h2 = (rho / p)^(1/2)."""

    def grad(rho, p, u):
        h = (rho / p) ** 0.5
        return (h / (2.0 * rho), -h / (2.0 * p), 0.0)

    return ScalarField(lambda rho, p, u: (rho / p) ** 0.5, "h2", gradient=grad)


def h_zero() -> ScalarField:
    """h0 = rho."""
    return ScalarField(lambda rho, p, u: rho, "h0", gradient=lambda rho, p, u: (1.0, 0.0, 0.0))


def reduced_matrix(v: StateVector, g: GasParameters) -> np.ndarray:
    """
    Left . diag(u + c, u - c, u) . Right with Right = [[1, h2, 0], [1, -h2, 0], [0, 0, h0]]
    and Left its inverse.

    Equals [[u, sqrt(kappa), 0], [sqrt(kappa) p / rho, u, 0], [0, 0, u]].
    """
    if g.kappa != 3.0:
        logger.warning("reduced_matrix evaluated at kappa=%s; the parametrization assumes 3", g.kappa)
    h2 = math.sqrt(v.rho / v.p)
    h0 = v.rho
    c = math.sqrt(g.kappa * v.p / v.rho)
    left = np.array(
        [[0.5, 0.5, 0.0], [0.5 / h2, -0.5 / h2, 0.0], [0.0, 0.0, 1.0 / h0]], dtype=float
    )
    speeds = np.diag([v.u + c, v.u - c, v.u])
    right = np.array([[1.0, h2, 0.0], [1.0, -h2, 0.0], [0.0, 0.0, h0]], dtype=float)
    return left @ speeds @ right


def reduced_matrix_closed_form(v: StateVector, g: GasParameters) -> np.ndarray:
    root = math.sqrt(g.kappa)
    return np.array(
        [[v.u, root, 0.0], [root * v.p / v.rho, v.u, 0.0], [0.0, 0.0, v.u]], dtype=float
    )


def reduced_matrices(states: np.ndarray, kappa: float) -> np.ndarray:
    """Batched closed form of the reduced matrix for an (n, 3) array of states."""
    rho, p, u = states[:, 0], states[:, 1], states[:, 2]
    root = math.sqrt(kappa)
    out = np.zeros((states.shape[0], 3, 3))
    out[:, 0, 0] = u
    out[:, 0, 1] = root
    out[:, 1, 0] = root * p / rho
    out[:, 1, 1] = u
    out[:, 2, 2] = u
    return out
