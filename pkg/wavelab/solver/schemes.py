"""Characteristic upwinding (Courant-Isaacson-Rees) for quasilinear systems in one space dimension."""

import logging
from typing import Callable, Optional, Tuple

import numpy as np

from settings import settings
from wavelab.core.errors import CFLViolationError, NonDiagonalizableError, PositivityLossError
from wavelab.euler.waves import propagation_sign
from wavelab.solver.grid import Grid1D
from wavelab.types import Convention

logger = logging.getLogger(__name__)

MatrixFn = Callable[[np.ndarray], np.ndarray]

IMAG_TOL = 1e-10
EIGENVECTOR_COND_LIMIT = 1e12


def transport_matrices(
    matrix_fn: MatrixFn, state: np.ndarray, convention: Convention
) -> np.ndarray:
    """
    B with w_t + B w_x = 0.

    `matrix_fn` returns M of the form w_t = M w_x under the positive
    convention, or of w_t + M w_x = 0 under the standard one.
    """
    return propagation_sign(convention) * matrix_fn(state)


def eigensystem(matrices: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Batched real eigen-decomposition B = R diag(lam) L with L = R^-1.

    Raises:
        NonDiagonalizableError: At the first node with complex eigenvalues
            or an ill-conditioned eigenvector matrix.
    """
    lam, right = np.linalg.eig(matrices)
    scale = 1.0 + np.abs(lam)
    bad = np.any(np.abs(lam.imag) > IMAG_TOL * scale, axis=-1)
    if np.any(bad):
        node = int(np.flatnonzero(bad)[0])
        raise NonDiagonalizableError(
            f"Complex eigenvalues at node {node}", {"node": node, "eigenvalues": lam[node].tolist()}
        )
    right = right.real
    cond = np.linalg.cond(right)
    if np.any(~np.isfinite(cond)) or np.any(cond > EIGENVECTOR_COND_LIMIT):
        node = int(np.flatnonzero(~(cond <= EIGENVECTOR_COND_LIMIT))[0])
        raise NonDiagonalizableError(
            f"Defective coefficient matrix at node {node}", {"node": node, "condition": float(cond[node])}
        )
    return lam.real, right, np.linalg.inv(right)


def spectral_radius(grid: Grid1D, matrix_fn: MatrixFn) -> float:
    lam = np.linalg.eigvals(matrix_fn(grid.state))
    return float(np.max(np.abs(lam)))


def cfl_dt(grid: Grid1D, matrix_fn: MatrixFn, cfl: Optional[float] = None) -> float:
    """Largest stable step for the current frame; infinite when every speed vanishes."""
    cfl = settings.CFL if cfl is None else cfl
    radius = spectral_radius(grid, matrix_fn)
    return np.inf if radius == 0.0 else cfl * grid.dx / radius


def step_quasilinear(
    grid: Grid1D,
    matrix_fn: MatrixFn,
    dt: float,
    convention: Convention = Convention.POSITIVE,
    cfl: Optional[float] = None,
) -> Grid1D:
    """
    One CIR step: each characteristic variable is upwinded by the sign of its speed.

    w_i <- w_i - dt/dx R (Lam+ L (w_i - w_(i-1)) + Lam- L (w_(i+1) - w_i)), with
    the eigen-decomposition taken at node i and zero-gradient boundaries.

    Raises:
        CFLViolationError: If dt max|lam| / dx exceeds the CFL limit.
        NonDiagonalizableError: If some node has no real eigenbasis.
        PositivityLossError: If a positive column becomes non-positive or non-finite.
    """
    limit = settings.CFL if cfl is None else cfl
    w = grid.state
    lam, right, left = eigensystem(transport_matrices(matrix_fn, w, convention))
    courant = dt * float(np.max(np.abs(lam))) / grid.dx
    if courant > limit * (1.0 + 1e-12):
        raise CFLViolationError(
            f"CFL number {courant:.4f} exceeds limit {limit}", {"cfl": courant, "limit": limit, "dt": dt}
        )

    padded = np.concatenate([w[:1], w, w[-1:]], axis=0)
    backward = padded[1:-1] - padded[:-2]
    forward = padded[2:] - padded[1:-1]
    upwind = np.maximum(lam, 0.0) * np.einsum("nij,nj->ni", left, backward) + np.minimum(
        lam, 0.0
    ) * np.einsum("nij,nj->ni", left, forward)
    updated = w - (dt / grid.dx) * np.einsum("nij,nj->ni", right, upwind)

    if not np.all(np.isfinite(updated)):
        raise PositivityLossError("Non-finite values after step", {"dt": dt})
    if grid.positive:
        columns = list(grid.positive)
        if np.any(updated[:, columns] <= 0.0):
            node = int(np.flatnonzero(np.any(updated[:, columns] <= 0.0, axis=1))[0])
            raise PositivityLossError(
                f"Positivity lost at node {node}",
                {"node": node, "x": float(grid.x[node]), "state": updated[node].tolist()},
            )
    return grid.with_state(updated)


def max_gradient(grid: Grid1D) -> float:
    return float(np.max(np.abs(np.diff(grid.state, axis=0)))) / grid.dx
