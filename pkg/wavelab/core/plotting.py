"""Static SVG figures; matplotlib runs headless with a fixed hash salt so output is reproducible."""

from io import StringIO
from pathlib import Path
from typing import Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from wavelab.core.utils import atomic_write_text  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "wavelab"

KIND_COLORS = {"S+": "tab:blue", "E": "tab:green", "S-": "tab:red"}


def _save_svg(fig, path: Path, seed: int) -> Path:
    buffer = StringIO()
    fig.savefig(buffer, format="svg", metadata={"Date": None, "Description": f"seed={seed}"})
    plt.close(fig)
    return atomic_write_text(path, buffer.getvalue())


def space_time_svg(
    times: np.ndarray,
    x: np.ndarray,
    values: np.ndarray,
    path: Path,
    seed: int,
    label: str = "rho",
) -> Path:
    """Colour map of one variable over the (x, t) plane."""
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(x, times, values, shading="auto")
    fig.colorbar(mesh, ax=ax, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    return _save_svg(fig, path, seed)


def supports_svg(
    times: np.ndarray,
    x: np.ndarray,
    supports: Dict[str, np.ndarray],
    region: np.ndarray,
    path: Path,
    seed: int,
    collar: Optional[np.ndarray] = None,
) -> Path:
    """Wave supports per family with the interaction region (and its collar) overlaid."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for kind, mask in supports.items():
        if mask.any():
            ax.contourf(x, times, mask.astype(float), levels=[0.5, 1.5], colors=[KIND_COLORS.get(kind, "grey")], alpha=0.35)
            ax.plot([], [], color=KIND_COLORS.get(kind, "grey"), label=kind)
    if region.any():
        ax.contour(x, times, region.astype(float), levels=[0.5], colors="black")
        ax.plot([], [], color="black", label="M")
    if collar is not None and collar.any():
        ax.contour(x, times, collar.astype(float), levels=[0.5], colors="grey", linestyles="dashed")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.legend(loc="upper right")
    return _save_svg(fig, path, seed)


def wireframe_svg(surfaces: Sequence[Dict[str, np.ndarray]], path: Path, seed: int) -> Path:
    """
    Wireframe projections of sampled surfaces.

    Each entry holds 'label' and the (n1, n2, 3) array 'points'.
    """
    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    for surface in surfaces:
        pts = surface["points"]
        ax.plot_wireframe(pts[..., 0], pts[..., 1], pts[..., 2], linewidth=0.5, label=surface["label"])
    ax.set_xlabel("rho")
    ax.set_ylabel("p")
    ax.set_zlabel("u")
    ax.legend(loc="upper left")
    return _save_svg(fig, path, seed)
