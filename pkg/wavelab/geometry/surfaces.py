"""
Parametrized surfaces in state space and their fundamental forms.

Patches carry analytic first and second derivatives; a finite-difference
oracle recomputes the same quantities from the embedding alone.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from settings import settings
from wavelab.core.errors import GeometryDomainError, ImmersionError
from wavelab.geometry.parametrization import ROOT3
from wavelab.types import PatchKind

logger = logging.getLogger(__name__)

VectorMap = Callable[[np.ndarray, np.ndarray], np.ndarray]
Rectangle = Tuple[Tuple[float, float], Tuple[float, float]]

DEFAULT_DOMAIN: Rectangle = ((0.0, 2.0), (0.0, 2.0))
SECOND_STEP = 1e-3


def _stack(*components) -> np.ndarray:
    shape = np.broadcast(*components).shape
    return np.stack([np.broadcast_to(np.asarray(c, dtype=float), shape) for c in components], axis=-1)


@dataclass(frozen=True)
class SurfacePatch:
    """
    A map (s1, s2) -> R^3 on a rectangle, open at the lower edges unless
    `open_lower` is False.

    The unit normal is (d1 x d2) / |d1 x d2| times `orientation`.
    """

    name: str
    embedding: VectorMap
    d1: VectorMap
    d2: VectorMap
    d11: VectorMap
    d12: VectorMap
    d22: VectorMap
    domain: Rectangle = DEFAULT_DOMAIN
    orientation: int = 1
    open_lower: bool = True

    def contains(self, s1, s2) -> np.ndarray:
        (a1, b1), (a2, b2) = self.domain
        s1, s2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
        if self.open_lower:
            return (s1 > a1) & (s1 <= b1) & (s2 > a2) & (s2 <= b2)
        return (s1 >= a1) & (s1 <= b1) & (s2 >= a2) & (s2 <= b2)

    def require(self, s1, s2) -> None:
        if not np.all(self.contains(s1, s2)):
            raise GeometryDomainError(
                f"Point outside the {self.name} parameter domain",
                {"domain": [list(r) for r in self.domain]},
            )

    def __call__(self, s1, s2) -> np.ndarray:
        return self.embedding(np.asarray(s1, dtype=float), np.asarray(s2, dtype=float))

    def normal(self, s1, s2) -> np.ndarray:
        n = np.cross(self.d1(s1, s2), self.d2(s1, s2))
        return self.orientation * n / np.linalg.norm(n, axis=-1, keepdims=True)

    def grid(self, n1: int, n2: int) -> Tuple[np.ndarray, np.ndarray]:
        """Regular interior sample grid; the open lower edges are excluded."""
        (a1, b1), (a2, b2) = self.domain
        s1 = np.linspace(a1, b1, n1 + 1)[1:]
        s2 = np.linspace(a2, b2, n2 + 1)[1:]
        return np.meshgrid(s1, s2, indexing="ij")


def phi_surface(t3: float, domain: Rectangle = DEFAULT_DOMAIN) -> SurfacePatch:
    """Leaf (t1, t2) -> (e^(2 t1 + t3), e^(6 t1), 2 sqrt(3) t2)."""
    scale = math.exp(t3)

    def embedding(t1, t2):
        return _stack(scale * np.exp(2.0 * t1), np.exp(6.0 * t1), 2.0 * ROOT3 * t2)

    def d1(t1, t2):
        return _stack(2.0 * scale * np.exp(2.0 * t1), 6.0 * np.exp(6.0 * t1), 0.0 * t2)

    def d2(t1, t2):
        return _stack(0.0 * t1, 0.0 * t1, 2.0 * ROOT3 + 0.0 * t2)

    def d11(t1, t2):
        return _stack(4.0 * scale * np.exp(2.0 * t1), 36.0 * np.exp(6.0 * t1), 0.0 * t2)

    def zero(t1, t2):
        return _stack(0.0 * t1, 0.0 * t2, 0.0 * t1)

    # smooth on all of R^2, so the lower edge is closed
    return SurfacePatch(f"phi(t3={t3:g})", embedding, d1, d2, d11, zero, zero, domain, open_lower=False)


def sigma_surface(t3: float, domain: Rectangle = DEFAULT_DOMAIN) -> SurfacePatch:
    """
    Leaf (t1, t2) -> (2 t1 + t3, 6 t1, ln(2 sqrt 3) + ln t2), the componentwise log of phi.

    Raises:
        GeometryDomainError: If the domain admits t2 <= 0.
    """
    if domain[1][0] < 0.0:
        raise GeometryDomainError("Sigma leaves need t2 > 0", {"domain": [list(r) for r in domain]})
    offset = math.log(2.0 * ROOT3)

    def embedding(t1, t2):
        if np.any(np.asarray(t2) <= 0.0):
            raise GeometryDomainError("Sigma leaves need t2 > 0")
        return _stack(2.0 * t1 + t3, 6.0 * t1, offset + np.log(t2))

    def d1(t1, t2):
        return _stack(2.0 + 0.0 * t1, 6.0 + 0.0 * t1, 0.0 * t2)

    def d2(t1, t2):
        return _stack(0.0 * t1, 0.0 * t1, 1.0 / t2)

    def d22(t1, t2):
        return _stack(0.0 * t1, 0.0 * t1, -1.0 / t2**2)

    def zero(t1, t2):
        return _stack(0.0 * t1, 0.0 * t2, 0.0 * t1)

    return SurfacePatch(f"sigma(t3={t3:g})", embedding, d1, d2, zero, zero, d22, domain)


def leaf(kind: PatchKind, t3: float, domain: Rectangle = DEFAULT_DOMAIN) -> SurfacePatch:
    kind = PatchKind(kind)
    return phi_surface(t3, domain) if kind == PatchKind.PHI else sigma_surface(t3, domain)


def sphere_octant() -> SurfacePatch:
    """Unit sphere in polar (s1) and azimuthal (s2) angles; outward normal."""

    def embedding(a, b):
        return _stack(np.sin(a) * np.cos(b), np.sin(a) * np.sin(b), np.cos(a))

    def d1(a, b):
        return _stack(np.cos(a) * np.cos(b), np.cos(a) * np.sin(b), -np.sin(a))

    def d2(a, b):
        return _stack(-np.sin(a) * np.sin(b), np.sin(a) * np.cos(b), 0.0 * a)

    def d11(a, b):
        return -embedding(a, b)

    def d12(a, b):
        return _stack(-np.cos(a) * np.sin(b), np.cos(a) * np.cos(b), 0.0 * a)

    def d22(a, b):
        return _stack(-np.sin(a) * np.cos(b), -np.sin(a) * np.sin(b), 0.0 * a)

    quarter = 0.5 * math.pi
    return SurfacePatch("sphere", embedding, d1, d2, d11, d12, d22, ((0.0, quarter), (0.0, quarter)))


def plane_patch(
    origin=(0.0, 0.0, 0.0), a=(1.0, 0.0, 0.0), b=(0.0, 1.0, 0.0)
) -> SurfacePatch:
    origin, a, b = (np.asarray(v, dtype=float) for v in (origin, a, b))

    def embedding(s1, s2):
        return origin + np.asarray(s1)[..., None] * a + np.asarray(s2)[..., None] * b

    def d1(s1, s2):
        return np.broadcast_to(a, np.broadcast(s1, s2).shape + (3,)).copy()

    def d2(s1, s2):
        return np.broadcast_to(b, np.broadcast(s1, s2).shape + (3,)).copy()

    def zero(s1, s2):
        return np.zeros(np.broadcast(s1, s2).shape + (3,))

    return SurfacePatch("plane", embedding, d1, d2, zero, zero, zero)


@dataclass
class FundamentalForms:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray

    @property
    def metric_det(self) -> np.ndarray:
        return self.E * self.G - self.F**2

    def as_tuple(self) -> Tuple[np.ndarray, ...]:
        return (self.E, self.F, self.G, self.L, self.M, self.N)


def _forms(d1, d2, d11, d12, d22, orientation: int) -> FundamentalForms:
    n = np.cross(d1, d2)
    norm = np.linalg.norm(n, axis=-1)
    E = np.einsum("...i,...i->...", d1, d1)
    F = np.einsum("...i,...i->...", d1, d2)
    G = np.einsum("...i,...i->...", d2, d2)
    det = E * G - F**2
    scale = np.maximum(E * G, np.finfo(float).tiny)
    if np.any(det <= 1e-14 * scale) or np.any(norm == 0.0):
        raise ImmersionError("Tangent vectors are dependent (EG - F^2 <= 0)", {"min_det": float(np.min(det))})
    unit = orientation * n / norm[..., None]
    L = np.einsum("...i,...i->...", d11, unit)
    M = np.einsum("...i,...i->...", d12, unit)
    N = np.einsum("...i,...i->...", d22, unit)
    return FundamentalForms(E, F, G, L, M, N)


def fundamental_forms(patch: SurfacePatch, s1, s2) -> FundamentalForms:
    """
    First and second fundamental forms from the analytic derivatives.

    Args:
        patch: Surface patch.
        s1, s2: Parameter values (scalars or broadcastable arrays).

    Raises:
        GeometryDomainError: If a point lies outside the patch domain.
        ImmersionError: If EG - F^2 <= 0 at some point.
    """
    patch.require(s1, s2)
    s1, s2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    return _forms(
        patch.d1(s1, s2), patch.d2(s1, s2), patch.d11(s1, s2), patch.d12(s1, s2), patch.d22(s1, s2), patch.orientation
    )


def finite_difference_forms(
    patch: SurfacePatch, s1, s2, step: Optional[float] = None, second_step: float = SECOND_STEP
) -> FundamentalForms:
    """
    The same forms using only the embedding.

    Tangents use central differences with `step`; second derivatives use the
    fourth-order five-point stencil with `second_step`, which keeps round-off
    below the comparison tolerance.
    """
    h = settings.RESIDUAL_FD_STEP if step is None else step
    k = second_step
    s1, s2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    f = patch.embedding

    d1 = (f(s1 + h, s2) - f(s1 - h, s2)) / (2.0 * h)
    d2 = (f(s1, s2 + h) - f(s1, s2 - h)) / (2.0 * h)

    def second(e1: float, e2: float) -> np.ndarray:
        def at(m: int) -> np.ndarray:
            return f(s1 + m * k * e1, s2 + m * k * e2)

        return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * k * k)

    d11 = second(1.0, 0.0)
    d22 = second(0.0, 1.0)
    d12 = (f(s1 + k, s2 + k) - f(s1 + k, s2 - k) - f(s1 - k, s2 + k) + f(s1 - k, s2 - k)) / (4.0 * k * k)
    return _forms(d1, d2, d11, d12, d22, patch.orientation)


@dataclass
class Curvatures:
    K: np.ndarray
    H: np.ndarray
    k1: np.ndarray
    k2: np.ndarray


def curvatures(patch: SurfacePatch, s1, s2, forms: Optional[FundamentalForms] = None) -> Curvatures:
    """
    K = (LN - M^2)/(EG - F^2), H = (EN - 2FM + GL)/(2(EG - F^2)), k = H +/- sqrt(H^2 - K).

    The sign of H and of the principal curvatures follows the patch orientation.
    """
    forms = fundamental_forms(patch, s1, s2) if forms is None else forms
    det = forms.metric_det
    K = (forms.L * forms.N - forms.M**2) / det
    H = (forms.E * forms.N - 2.0 * forms.F * forms.M + forms.G * forms.L) / (2.0 * det)
    root = np.sqrt(np.maximum(H**2 - K, 0.0))
    return Curvatures(K=K, H=H, k1=H + root, k2=H - root)


def phi_second_form(t1, t3) -> np.ndarray:
    """L on phi(t3) in closed form, with the d1 x d2 orientation."""
    t1 = np.asarray(t1, dtype=float)
    return -24.0 * np.exp(6.0 * t1 + t3) / np.sqrt(9.0 * np.exp(8.0 * t1) + np.exp(2.0 * t3))


def printed_phi_second_form(t1, t3) -> np.ndarray:
    """L = 48 e^t3 e^(6 t1) / sqrt(9 e^(8 t1) + e^(2 t3)) as printed in the source text."""
    t1 = np.asarray(t1, dtype=float)
    return 48.0 * np.exp(t3) * np.exp(6.0 * t1) / np.sqrt(9.0 * np.exp(8.0 * t1) + np.exp(2.0 * t3))


def log_relation_residual(t3: float, t1, t2) -> float:
    """max |exp(sigma(t3)) - phi(t3)| relative to |phi|, on points with t2 > 0."""
    sigma = sigma_surface(t3)(t1, t2)
    phi = phi_surface(t3)(t1, t2)
    return float(np.max(np.abs(np.exp(sigma) - phi) / np.maximum(np.abs(phi), 1.0)))
