from dataclasses import dataclass
from typing import Any, Dict

import numpy as np


@dataclass(frozen=True)
class Profile:
    """
    A scalar initial profile or Riemann-wave phase on the line.

    shape is one of "bump" (smooth, compact support), "gauss", "cosine"
    (squared cosine, compact support) or "zero".
    """

    shape: str = "bump"
    amplitude: float = 0.0
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.shape not in ("bump", "gauss", "cosine", "zero"):
            raise ValueError(f"Unknown profile shape: {self.shape}")
        if not self.width > 0.0:
            raise ValueError(f"Profile width must be positive, got {self.width}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Profile":
        return cls(**data)

    def __call__(self, x: Any) -> Any:
        x = np.asarray(x, dtype=float)
        s = (x - self.center) / self.width
        if self.shape == "zero":
            out = np.zeros_like(s)
        elif self.shape == "gauss":
            out = self.amplitude * np.exp(-(s**2))
        elif self.shape == "cosine":
            out = np.where(np.abs(s) < 1.0, self.amplitude * np.cos(0.5 * np.pi * s) ** 2, 0.0)
        else:
            inside = np.abs(s) < 1.0
            safe = np.where(inside, s, 0.0)
            out = np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / (1.0 - safe**2)), 0.0)
        return out if out.ndim else float(out)

    def derivative(self, x: Any) -> Any:
        x = np.asarray(x, dtype=float)
        s = (x - self.center) / self.width
        if self.shape == "zero":
            out = np.zeros_like(s)
        elif self.shape == "gauss":
            out = -2.0 * s * self.amplitude * np.exp(-(s**2)) / self.width
        elif self.shape == "cosine":
            out = np.where(
                np.abs(s) < 1.0,
                -0.5 * np.pi * self.amplitude * np.sin(np.pi * s) / self.width,
                0.0,
            )
        else:
            inside = np.abs(s) < 1.0
            safe = np.where(inside, s, 0.0)
            value = np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / (1.0 - safe**2)), 0.0)
            out = np.where(inside, value * (-2.0 * safe / (1.0 - safe**2) ** 2) / self.width, 0.0)
        return out if out.ndim else float(out)

    @property
    def lower(self) -> float:
        return min(0.0, self.amplitude)

    @property
    def upper(self) -> float:
        return max(0.0, self.amplitude)

    def support(self) -> tuple:
        """Interval outside which the profile is (numerically) zero."""
        if self.shape == "gauss":
            return (self.center - 6.0 * self.width, self.center + 6.0 * self.width)
        if self.shape == "zero":
            return (self.center, self.center)
        return (self.center - self.width, self.center + self.width)
