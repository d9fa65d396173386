from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from settings import settings
from wavelab.core.plotting import wireframe_svg
from wavelab.core.utils import write_csv_atomic
from wavelab.geometry.surfaces import SurfacePatch


def write_point_cloud(
    patches: Sequence[SurfacePatch], path: Path, points_per_side: int = 20, seed: Optional[int] = None
) -> Path:
    """CSV of (leaf, s1, s2, x, y, z) rows sampled on each patch's interior grid."""
    seed = settings.SEED if seed is None else seed
    rows = []
    for index, patch in enumerate(patches):
        s1, s2 = patch.grid(points_per_side, points_per_side)
        pts = patch(s1, s2)
        for a, b, p in zip(s1.ravel(), s2.ravel(), pts.reshape(-1, 3)):
            rows.append((index, a, b, *p))
    return write_csv_atomic(
        path,
        ["leaf", "s1", "s2", "x", "y", "z"],
        rows,
        seed,
        {},
        {"leaves": [patch.name for patch in patches]},
    )


def write_wireframe(
    patches: Sequence[SurfacePatch], path: Path, points_per_side: int = 12, seed: Optional[int] = None
) -> Path:
    seed = settings.SEED if seed is None else seed
    surfaces = []
    for patch in patches:
        s1, s2 = patch.grid(points_per_side, points_per_side)
        surfaces.append({"label": patch.name, "points": np.asarray(patch(s1, s2))})
    return wireframe_svg(surfaces, path, seed)
