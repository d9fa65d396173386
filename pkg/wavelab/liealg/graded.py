"""
Graded elements rho^-n * base and their canonical coordinates.

Every element is a constant-coefficient combination of the canonical fields
rho^-g w2, rho^-g w1 and rho^-g gamma0, which are linearly independent over
the reals; gamma+- = (w1 +- w2) / 2. Brackets are fitted once per canonical
pair and extended to combinations by bilinearity.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from wavelab.euler.model import base_field
from wavelab.fields.calculus import scale_field
from wavelab.fields.vectorfield import ScalarField, VectorField

BASE_NAMES = ("w2", "w1", "gamma+", "gamma-", "gamma0")
CANONICAL_BASES = ("w2", "w1", "gamma0")

# base name -> coefficients over CANONICAL_BASES
BASE_EXPANSION: Dict[str, Tuple[float, float, float]] = {
    "w2": (1.0, 0.0, 0.0),
    "w1": (0.0, 1.0, 0.0),
    "gamma+": (0.5, 0.5, 0.0),
    "gamma-": (-0.5, 0.5, 0.0),
    "gamma0": (0.0, 0.0, 1.0),
}

CanonicalKey = Tuple[int, str]
CanonicalVector = Dict[CanonicalKey, float]

ZERO_TOL = 1e-9


def density_power(n: int) -> ScalarField:
    """rho^-n with its analytic gradient."""
    return ScalarField(
        lambda rho, p, u: rho ** (-n),
        "1" if n == 0 else f"rho^-{n}",
        gradient=lambda rho, p, u: (-n * rho ** (-n - 1), 0.0 * rho, 0.0 * rho),
    )


@dataclass(frozen=True)
class GradedElement:
    n: int
    base: str

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Grade must be nonnegative, got {self.n}")
        if self.base not in BASE_EXPANSION:
            raise ValueError(f"Unknown base field: {self.base}")

    @property
    def label(self) -> str:
        return self.base if self.n == 0 else f"rho^-{self.n} {self.base}"

    def realize(self, kappa: float) -> VectorField:
        field = base_field(self.base, kappa)
        if self.n == 0:
            return field
        return scale_field(density_power(self.n), field)

    def canonical(self) -> CanonicalVector:
        return {
            (self.n, name): weight
            for name, weight in zip(CANONICAL_BASES, BASE_EXPANSION[self.base])
            if weight != 0.0
        }


def parse_element(text: str) -> GradedElement:
    """Parse 'gamma+' or 'rho^-2 w2' into a GradedElement."""
    text = text.strip()
    if text.startswith("rho^-"):
        grade, _, base = text[len("rho^-") :].partition(" ")
        return GradedElement(int(grade), base.strip())
    return GradedElement(0, text)


def family(base: str, grades: Iterable[int]) -> List[GradedElement]:
    return [GradedElement(n, base) for n in grades]


def add(a: CanonicalVector, b: CanonicalVector, weight: float = 1.0) -> CanonicalVector:
    out = dict(a)
    for key, value in b.items():
        out[key] = out.get(key, 0.0) + weight * value
    return out


def prune(vector: CanonicalVector, tol: float = ZERO_TOL) -> CanonicalVector:
    return {key: value for key, value in vector.items() if abs(value) > tol}


def max_grade(vector: CanonicalVector) -> Optional[int]:
    return max((g for g, _ in vector), default=None)


def split_by_grade(vector: CanonicalVector, limit: int) -> Tuple[CanonicalVector, CanonicalVector]:
    """(terms with grade <= limit, terms above it)."""
    inside = {k: v for k, v in vector.items() if k[0] <= limit}
    above = {k: v for k, v in vector.items() if k[0] > limit}
    return inside, above


def canonical_matrix(
    elements: List[CanonicalVector], keys: Optional[List[CanonicalKey]] = None
) -> Tuple[np.ndarray, List[CanonicalKey]]:
    """Columns are the elements in canonical coordinates over `keys` (the union by default)."""
    if keys is None:
        keys = sorted({k for e in elements for k in e}, key=canonical_sort_key)
    index = {k: i for i, k in enumerate(keys)}
    matrix = np.zeros((len(keys), len(elements)))
    for j, element in enumerate(elements):
        for key, value in element.items():
            matrix[index[key], j] = value
    return matrix, keys


def canonical_sort_key(key: CanonicalKey) -> Tuple[int, int]:
    return key[0], CANONICAL_BASES.index(key[1])


def as_graded_elements(grade: int, components: Dict[str, float]) -> List[GradedElement]:
    """
    Graded elements spanning one grade's slice of a remainder.

    A slice proportional to a single base gives that base; otherwise one
    element per canonical component.
    """
    vector = np.array([components.get(name, 0.0) for name in CANONICAL_BASES])
    for name in BASE_NAMES:
        expansion = np.array(BASE_EXPANSION[name])
        scale = float(vector @ expansion / (expansion @ expansion))
        if np.linalg.norm(vector - scale * expansion) <= ZERO_TOL * max(1.0, np.linalg.norm(vector)):
            return [GradedElement(grade, name)]
    return [GradedElement(grade, name) for name in CANONICAL_BASES if abs(components.get(name, 0.0)) > ZERO_TOL]
