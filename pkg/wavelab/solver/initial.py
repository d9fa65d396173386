"""Initial frames built from wave profiles on a base state, or read from a CSV file."""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from wavelab.core.profiles import Profile
from wavelab.euler.waves import classical_double_wave
from wavelab.fields.vectorfield import StateVector
from wavelab.solver.grid import Grid1D
from wavelab.types import WaveKind


@dataclass(frozen=True)
class WaveProfile:
    kind: WaveKind
    profile: Profile


def wave_states(
    x: np.ndarray, waves: Sequence[WaveProfile], base: StateVector, kappa: float
) -> np.ndarray:
    """
    Euler states carrying the given simple waves on top of `base`.

    Acoustic profiles are Riemann-invariant values of the classical double
    wave (S+ drives r1, S- drives r2) built on the base state shifted by the
    entropic density profile. Where supports are disjoint every node lies
    on an exact simple wave of one family.
    """
    by_kind: Dict[WaveKind, List[Profile]] = {kind: [] for kind in WaveKind}
    for wave in waves:
        by_kind[WaveKind(wave.kind)].append(wave.profile)

    def total(kind: WaveKind) -> np.ndarray:
        return sum((p(x) for p in by_kind[kind]), np.zeros_like(x))

    r1, r2, drho = total(WaveKind.S_PLUS), total(WaveKind.S_MINUS), total(WaveKind.ENTROPIC)
    rows = []
    for a, b, d in zip(r1, r2, drho):
        local = StateVector(base.rho + d, base.p, base.u)
        rows.append(classical_double_wave(float(a), float(b), local, kappa).as_array())
    return np.array(rows)


def euler_grid(
    x0: float,
    x1: float,
    nx: int,
    waves: Sequence[WaveProfile],
    base: StateVector,
    kappa: float,
) -> Grid1D:
    x = np.linspace(x0, x1, nx)
    return Grid1D(x0, x1, wave_states(x, waves, base, kappa))


def grid_from_csv(path: Path, nx: Optional[int] = None) -> Grid1D:
    """
    Read columns x, rho, p, u (comma separated, '#' comments) and resample linearly.

    Raises FileNotFoundError if the file does not exist.
    """
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if data.shape[1] != 4:
        raise ValueError(f"Expected columns x, rho, p, u in {path}, got {data.shape[1]} columns")
    data = data[np.argsort(data[:, 0])]
    x0, x1 = float(data[0, 0]), float(data[-1, 0])
    nx = nx or data.shape[0]
    x = np.linspace(x0, x1, nx)
    state = np.column_stack([np.interp(x, data[:, 0], data[:, k]) for k in (1, 2, 3)])
    return Grid1D(x0, x1, state)
