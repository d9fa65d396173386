"""Pointwise decomposition of u_x over the characteristic fields."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from wavelab.core.errors import DegenerateFamilyError
from wavelab.euler.model import CharacteristicField
from wavelab.euler.waves import propagation_sign
from wavelab.solver.grid import Grid1D, TimeSeries
from wavelab.types import Convention, WaveKind

KIND_ORDER = (WaveKind.S_PLUS, WaveKind.ENTROPIC, WaveKind.S_MINUS)
SINGULAR_TOL = 1e-12


@dataclass
class GradientDecomposition:
    """
    xi[:, s] with u_x = sum_s xi^s gamma_s at every node, s in (S+, E, S-).

    `strength` rescales each coefficient by |gamma_s / (rho, p, c)| so the
    three families are measured in the same relative units.
    """

    xi: np.ndarray
    strength: np.ndarray
    consistency: Optional[np.ndarray] = None

    def of(self, kind: WaveKind) -> np.ndarray:
        return self.xi[:, KIND_ORDER.index(WaveKind(kind))]


def _kappa(fields: Sequence[CharacteristicField]) -> float:
    kinds = [f.kind for f in fields]
    if sorted(k.value for k in kinds) != sorted(k.value for k in KIND_ORDER):
        raise ValueError(f"Need the S+, E and S- fields, got {[k.value for k in kinds]}")
    return fields[0].kappa


def gamma_matrices(state: np.ndarray, kappa: float) -> np.ndarray:
    """(n, 3, 3) with columns gamma+, gamma0, gamma- at each node."""
    rho, p = state[:, 0], state[:, 1]
    c = np.sqrt(kappa * p / rho)
    out = np.zeros((state.shape[0], 3, 3))
    out[:, 0, 0] = rho
    out[:, 1, 0] = kappa * p
    out[:, 2, 0] = c
    out[:, 0, 1] = 1.0
    out[:, 0, 2] = rho
    out[:, 1, 2] = kappa * p
    out[:, 2, 2] = -c
    return out


def decompose_gradient(
    frame: Grid1D,
    fields: Sequence[CharacteristicField],
    time_derivative: Optional[np.ndarray] = None,
    convention: Convention = Convention.POSITIVE,
) -> GradientDecomposition:
    """
    Solve u_x = sum_s xi^s gamma_s(u) node by node.

    Args:
        frame: Euler-state frame; u_x by second-order central differences.
        fields: The three characteristic fields of the model.
        time_derivative: Optional u_t at the nodes; when given, the
            per-node consistency |u_t - sum_s xi^s v_s gamma_s| is reported,
            v_s being the convention-signed propagation speed.
        convention: Sign convention of the frame's evolution.

    Raises:
        DegenerateFamilyError: If the gamma matrix is singular at a node.
    """
    kappa = _kappa(fields)
    state = frame.state
    u_x = np.gradient(state, frame.dx, axis=0)
    gammas = gamma_matrices(state, kappa)
    det = np.linalg.det(gammas)
    scale = np.prod(np.linalg.norm(gammas, axis=1), axis=1)
    singular = np.abs(det) <= SINGULAR_TOL * scale
    if np.any(singular):
        node = int(np.flatnonzero(singular)[0])
        raise DegenerateFamilyError(
            f"Characteristic fields are dependent at node {node}",
            {"node": node, "state": state[node].tolist()},
        )
    xi = np.linalg.solve(gammas, u_x[:, :, None])[:, :, 0]

    rho, p = state[:, 0], state[:, 1]
    acoustic = np.sqrt(2.0 + kappa**2)
    strength = np.abs(xi) * np.column_stack([np.full_like(rho, acoustic), 1.0 / rho, np.full_like(rho, acoustic)])

    consistency = None
    if time_derivative is not None:
        c = np.sqrt(kappa * p / rho)
        u = state[:, 2]
        speeds = propagation_sign(convention) * np.column_stack([u + c, u, u - c])
        predicted = np.einsum("nij,nj->ni", gammas, xi * speeds)
        consistency = np.linalg.norm(time_derivative + predicted, axis=1)
    return GradientDecomposition(xi=xi, strength=strength, consistency=consistency)


def decompose_series(
    series: TimeSeries,
    fields: Sequence[CharacteristicField],
    convention: Convention = Convention.POSITIVE,
) -> List[GradientDecomposition]:
    """Decompose every frame; u_t from central differences in time where both neighbours exist."""
    out = []
    times = series.times
    for k, frame in enumerate(series.frames):
        u_t = None
        if 0 < k < len(series.frames) - 1:
            span = times[k + 1] - times[k - 1]
            u_t = (series.frames[k + 1].state - series.frames[k - 1].state) / span
        out.append(decompose_gradient(frame, fields, u_t, convention))
    return out
