"""
The three-parameter map f(t1, t2, t3) = (e^(2 t1 + t3), e^(6 t1), 2 sqrt(3) t2)
onto the region of acoustic-entropic superposition at kappa = 3.
"""

import math
from typing import Tuple

import numpy as np

from wavelab.core.errors import GeometryDomainError
from wavelab.fields.vectorfield import StateVector

ROOT3 = math.sqrt(3.0)


def region_map(t1: float, t2: float, t3: float) -> StateVector:
    return StateVector(math.exp(2.0 * t1 + t3), math.exp(6.0 * t1), 2.0 * ROOT3 * t2)


def region_map_array(params: np.ndarray) -> np.ndarray:
    """Row-wise region_map of an (n, 3) parameter array."""
    params = np.asarray(params, dtype=float)
    t1, t2, t3 = params[..., 0], params[..., 1], params[..., 2]
    return np.stack([np.exp(2.0 * t1 + t3), np.exp(6.0 * t1), 2.0 * ROOT3 * t2], axis=-1)


def region_map_jacobian(t1: float, t2: float, t3: float) -> np.ndarray:
    """d(rho, p, u) / d(t1, t2, t3)."""
    rho = math.exp(2.0 * t1 + t3)
    p = math.exp(6.0 * t1)
    return np.array(
        [[2.0 * rho, 0.0, rho], [6.0 * p, 0.0, 0.0], [0.0, 2.0 * ROOT3, 0.0]], dtype=float
    )


def region_map_determinant(t1: float, t2: float, t3: float) -> float:
    """Closed form 12 sqrt(3) e^(8 t1 + t3); never zero."""
    return 12.0 * ROOT3 * math.exp(8.0 * t1 + t3)


def region_map_inverse(v: StateVector) -> Tuple[float, float, float]:
    """t1 = ln(p)/6, t2 = u/(2 sqrt 3), t3 = ln(rho) - 2 t1."""
    t1 = math.log(v.p) / 6.0
    return t1, v.u / (2.0 * ROOT3), math.log(v.rho) - 2.0 * t1


def region_map_inverse_array(states: np.ndarray) -> np.ndarray:
    states = np.asarray(states, dtype=float)
    if np.any(states[..., 0] <= 0.0) or np.any(states[..., 1] <= 0.0):
        raise GeometryDomainError("Region map inverse needs rho > 0 and p > 0")
    t1 = np.log(states[..., 1]) / 6.0
    return np.stack(
        [t1, states[..., 2] / (2.0 * ROOT3), np.log(states[..., 0]) - 2.0 * t1], axis=-1
    )
