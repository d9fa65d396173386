"""Wave supports and the interaction region M in the (t, x) plane."""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy import ndimage

from settings import settings
from wavelab.interaction.decomposition import KIND_ORDER, GradientDecomposition
from wavelab.solver.grid import TimeSeries
from wavelab.types import SupportScale, WaveKind

logger = logging.getLogger(__name__)


@dataclass
class WaveSupport:
    """Active cells of one family: |strength| at or above `level`."""

    kind: WaveKind
    active: np.ndarray
    level: float
    peak: float

    @property
    def present(self) -> bool:
        return bool(self.active.any())

    def components(self, frame: int):
        """Labelled connected components of the support at one frame."""
        return ndimage.label(self.active[frame])


@dataclass
class InteractionRegion:
    """
    M = cells where at least two families are active, with its collar.

    `epsilon` is (cells, frames); M_eps dilates M by that box and the collar
    A_eps is M_2eps minus M_eps.
    """

    times: np.ndarray
    x: np.ndarray
    supports: Dict[WaveKind, WaveSupport]
    cells: np.ndarray
    epsilon: tuple
    threshold: float

    @property
    def empty(self) -> bool:
        return not bool(self.cells.any())

    @property
    def frames_touched(self) -> np.ndarray:
        return np.flatnonzero(self.cells.any(axis=1))

    @property
    def k_min(self) -> Optional[int]:
        touched = self.frames_touched
        return int(touched[0]) if touched.size else None

    @property
    def k_max(self) -> Optional[int]:
        touched = self.frames_touched
        return int(touched[-1]) if touched.size else None

    @property
    def t_min(self) -> Optional[float]:
        return None if self.empty else float(self.times[self.k_min])

    @property
    def t_max(self) -> Optional[float]:
        return None if self.empty else float(self.times[self.k_max])

    @property
    def n_regions(self) -> int:
        _, count = ndimage.label(self.cells, structure=np.ones((3, 3)))
        return int(count)

    def dilated(self, factor: int = 1) -> np.ndarray:
        ex, et = self.epsilon
        structure = np.ones((2 * factor * et + 1, 2 * factor * ex + 1), dtype=bool)
        return ndimage.binary_dilation(self.cells, structure=structure)

    def collar(self) -> np.ndarray:
        return self.dilated(2) & ~self.dilated(1)


def wave_supports(
    decompositions: Sequence[GradientDecomposition],
    threshold: Optional[float] = None,
    scale: SupportScale = None,
) -> Dict[WaveKind, WaveSupport]:
    """
    Active cells of every family over all frames.

    With the common scale every family is compared with the strongest peak of
    any family, so numerical leakage into an absent family stays inactive.
    The per-kind scale compares each family with its own peak.
    """
    threshold = settings.SUPPORT_THRESHOLD if threshold is None else threshold
    scale = SupportScale(scale or settings.SUPPORT_SCALE)
    strength = np.stack([d.strength for d in decompositions])
    peaks = strength.max(axis=(0, 1))
    overall = float(peaks.max())
    supports = {}
    for s, kind in enumerate(KIND_ORDER):
        reference = overall if scale == SupportScale.COMMON else float(peaks[s])
        level = threshold * reference
        active = strength[:, :, s] >= level if level > 0.0 else np.zeros(strength.shape[:2], dtype=bool)
        supports[kind] = WaveSupport(kind=kind, active=active, level=level, peak=float(peaks[s]))
    return supports


def interaction_region(
    series: TimeSeries,
    decompositions: Sequence[GradientDecomposition],
    threshold: Optional[float] = None,
    collar_cells: Optional[int] = None,
    scale: SupportScale = None,
) -> InteractionRegion:
    """
    Locate M on the recorded frames.

    An empty region (no cell with two active families) is returned as such
    and carries no t_min or t_max.
    """
    threshold = settings.SUPPORT_THRESHOLD if threshold is None else threshold
    collar_cells = settings.COLLAR_CELLS if collar_cells is None else collar_cells
    supports = wave_supports(decompositions, threshold, scale)
    count = sum(sup.active.astype(int) for sup in supports.values())
    cells = count >= 2
    region = InteractionRegion(
        times=np.asarray(series.times),
        x=series.initial.x,
        supports=supports,
        cells=cells,
        epsilon=(collar_cells, collar_cells),
        threshold=threshold,
    )
    if region.empty:
        logger.info("No interaction region at threshold %.3g", threshold)
    else:
        logger.info(
            "Interaction region over t in [%.4f, %.4f], %d component(s)",
            region.t_min,
            region.t_max,
            region.n_regions,
        )
    return region
