"""Entering and leaving wave families, interaction index and elasticity verdict."""

import logging
from typing import List, Optional, Tuple

import numpy as np

from wavelab.core.errors import DetectionError
from wavelab.euler.waves import propagation_sign
from wavelab.interaction.region import InteractionRegion, WaveSupport
from wavelab.solver.grid import TimeSeries
from wavelab.types import Convention, Verdict, WaveKind

logger = logging.getLogger(__name__)

GATE_CELLS = 3
OVERLAP_PAD = 2


def characteristic_speed(state: np.ndarray, kind: WaveKind, kappa: float, convention: Convention) -> np.ndarray:
    """dx/dt of the given family at each node."""
    rho, p, u = state[:, 0], state[:, 1], state[:, 2]
    c = np.sqrt(kappa * p / rho)
    eigen = {WaveKind.S_PLUS: u + c, WaveKind.ENTROPIC: u, WaveKind.S_MINUS: u - c}[WaveKind(kind)]
    return propagation_sign(convention) * eigen


def _shift_mask(mask: np.ndarray, cells: int, pad: int) -> np.ndarray:
    idx = np.flatnonzero(mask)
    out = np.zeros_like(mask)
    lo = np.clip(idx + cells - pad, 0, mask.size - 1)
    hi = np.clip(idx + cells + pad, 0, mask.size - 1)
    for a, b in zip(lo, hi):
        out[a : b + 1] = True
    return out


def _follow(
    support: WaveSupport,
    series: TimeSeries,
    start: int,
    mask: np.ndarray,
    step: int,
    stop: int,
    target: np.ndarray,
    kappa: float,
    convention: Convention,
) -> bool:
    """
    Track one component frame by frame until it touches `target` or is lost.

    The next component must overlap the current one advected by the local
    characteristic speed (padded by a few cells) or have its centroid within
    the gate of the predicted position.
    """
    x = series.initial.x
    dx = series.initial.dx
    current = mask
    k = start
    while True:
        if np.any(current & target[k]):
            return True
        if k == stop:
            return False
        k_next = k + step
        dt = series.times[k_next] - series.times[k]
        speed = float(np.mean(characteristic_speed(series.frames[k].state[current], support.kind, kappa, convention)))
        predicted = float(np.mean(x[current])) + speed * dt
        advected = _shift_mask(current, int(round(speed * dt / dx)), OVERLAP_PAD)

        labels, count = support.components(k_next)
        candidates = []
        for j in range(1, count + 1):
            comp = labels == j
            distance = abs(float(np.mean(x[comp])) - predicted)
            if np.any(comp & advected) or distance <= GATE_CELLS * dx:
                candidates.append((distance, j))
        if not candidates:
            return False
        candidates.sort()
        if len(candidates) > 1 and candidates[1][0] - candidates[0][0] < 0.5 * dx:
            raise DetectionError(
                f"Ambiguous continuation of a {support.kind.value} component",
                {"frame": k_next, "t": float(series.times[k_next]), "kind": support.kind.value},
            )
        current = labels == candidates[0][1]
        k = k_next


def _frames_for_collar(region: InteractionRegion, n_frames: int) -> Tuple[int, int]:
    _, et = region.epsilon
    before = region.k_min - 2 * et
    after = region.k_max + 2 * et
    if before < 0 or after > n_frames - 1:
        raise DetectionError(
            "Interaction region touches the recorded time window; the collar is not resolvable",
            {
                "t_min": region.t_min,
                "t_max": region.t_max,
                "collar_frames": 2 * et,
                "frames": n_frames,
            },
        )
    return before, after


def classify_waves(
    series: TimeSeries,
    region: InteractionRegion,
    kappa: float,
    convention: Convention = Convention.POSITIVE,
) -> Tuple[List[WaveKind], List[WaveKind]]:
    """
    Families entering and leaving the interaction region.

    A family enters if one of its components at the outer collar frame before
    t_min is tracked forward into M_eps; it leaves if one of its components
    at the outer collar frame after t_max is tracked backward into M_eps.
    Waves that left M early are followed back from wherever they are.

    Raises:
        DetectionError: If the collar lies outside the recorded frames or a
            component cannot be continued unambiguously.
    """
    if region.empty:
        return [], []
    before, after = _frames_for_collar(region, len(series.frames))
    target = region.dilated(1)

    entering, leaving = [], []
    for kind, support in region.supports.items():
        if not support.present:
            continue
        for frame, step, stop, bucket in (
            (before, 1, region.k_max, entering),
            (after, -1, region.k_min, leaving),
        ):
            labels, count = support.components(frame)
            for j in range(1, count + 1):
                comp = labels == j
                if _follow(support, series, frame, comp, step, stop, target, kappa, convention):
                    bucket.append(kind)
                    break
    logger.info(
        "Entering %s, leaving %s",
        [k.value for k in entering],
        [k.value for k in leaving],
    )
    return entering, leaving


def interaction_index(entering: List[WaveKind], leaving: List[WaveKind]) -> int:
    """
    card(leaving) - card(entering).

    Raises:
        DetectionError: If fewer families leave than enter.
    """
    index = len(set(leaving)) - len(set(entering))
    if index < 0:
        raise DetectionError(
            "Fewer wave families leave the interaction than enter it",
            {"entering": [k.value for k in entering], "leaving": [k.value for k in leaving]},
        )
    return index


def elasticity_verdict(index: int) -> Verdict:
    if index < 0:
        raise DetectionError(f"Interaction index must be nonnegative, got {index}", {"index": index})
    return Verdict.ELASTIC if index == 0 else Verdict.NON_ELASTIC


def type_preserved(entering: List[WaveKind], leaving: List[WaveKind]) -> Optional[bool]:
    """For an index-zero interaction, whether the same families come out; None otherwise."""
    if len(set(leaving)) != len(set(entering)):
        return None
    return set(leaving) == set(entering)
