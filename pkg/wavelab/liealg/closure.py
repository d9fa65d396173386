import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from settings import settings
from wavelab.core.errors import ClosureError
from wavelab.core.utils import make_rng
from wavelab.euler.model import GasParameters
from wavelab.fields.calculus import lie_bracket
from wavelab.fields.vectorfield import VectorField, random_states
from wavelab.liealg.graded import (
    CANONICAL_BASES,
    ZERO_TOL,
    CanonicalKey,
    CanonicalVector,
    GradedElement,
    add,
    as_graded_elements,
    canonical_matrix,
    canonical_sort_key,
    prune,
    split_by_grade,
)

logger = logging.getLogger(__name__)

# grades searched around m + n when fitting a canonical bracket
GRADE_WINDOW = (-1, 2)


class BracketFitter:
    """
    Fits brackets of canonical fields rho^-g b with state-independent coefficients.

    Each bracket is evaluated at the same set of random states and fitted by
    one stacked least-squares problem over the canonical fields of nearby
    grades. A fit whose relative residual exceeds the tolerance means the
    coefficients would have to depend on the state.
    """

    def __init__(
        self,
        kappa: float,
        states: Optional[int] = None,
        seed: Optional[int] = None,
        tolerance: Optional[float] = None,
    ):
        self.kappa = kappa
        self.seed = settings.SEED if seed is None else seed
        self.tolerance = settings.CLOSURE_TOL if tolerance is None else tolerance
        count = settings.CLOSURE_STATES if states is None else states
        self.states = random_states(make_rng(self.seed, stream=1), count)
        self._fields: Dict[CanonicalKey, VectorField] = {}
        self._values: Dict[CanonicalKey, np.ndarray] = {}
        self._brackets: Dict[Tuple[CanonicalKey, CanonicalKey], Tuple[CanonicalVector, float]] = {}

    def _field(self, key: CanonicalKey) -> VectorField:
        if key not in self._fields:
            self._fields[key] = GradedElement(*key).realize(self.kappa)
        return self._fields[key]

    def _stacked(self, key: CanonicalKey) -> np.ndarray:
        if key not in self._values:
            f = self._field(key)
            self._values[key] = np.array([f.value(v) for v in self.states])
        return self._values[key]

    def canonical_bracket(self, a: CanonicalKey, b: CanonicalKey) -> Tuple[CanonicalVector, float]:
        """Coefficients of [a, b] over canonical fields and the relative fit residual."""
        if a == b:
            return {}, 0.0
        if (a, b) in self._brackets:
            return self._brackets[(a, b)]

        bracket = lie_bracket(self._field(a), self._field(b))
        target = np.array([bracket.value(v) for v in self.states])
        grade = a[0] + b[0]
        keys = [
            (g, name)
            for g in range(max(0, grade + GRADE_WINDOW[0]), grade + GRADE_WINDOW[1] + 1)
            for name in CANONICAL_BASES
        ]
        columns = np.stack([self._stacked(k) for k in keys], axis=-1)

        # per-state row weights leave an exact solution unchanged
        scale = np.maximum(
            np.max(np.abs(columns), axis=(1, 2)), np.max(np.abs(target), axis=1)
        )
        weights = 1.0 / scale
        a_matrix = (columns * weights[:, None, None]).reshape(-1, len(keys))
        rhs = (target * weights[:, None]).reshape(-1)

        rhs_norm = float(np.linalg.norm(rhs))
        if rhs_norm <= 1e-13 * np.sqrt(rhs.size):
            result = ({}, rhs_norm)
        else:
            norms = np.linalg.norm(a_matrix, axis=0)
            solution, _, _, _ = linalg.lstsq(a_matrix / norms, rhs, cond=settings.RANK_TOL)
            coefficients = solution / norms
            residual = float(np.linalg.norm(rhs - a_matrix @ coefficients)) / rhs_norm
            peak = max(1.0, float(np.max(np.abs(coefficients))))
            vector = {
                k: float(c) for k, c in zip(keys, coefficients) if abs(c) > ZERO_TOL * peak
            }
            result = (vector, residual)

        if result[1] > self.tolerance:
            labels = (GradedElement(*a).label, GradedElement(*b).label)
            raise ClosureError(
                f"Bracket [{labels[0]}, {labels[1]}] is not expressible with constant graded coefficients",
                {"pair": list(labels), "residual": result[1], "tolerance": self.tolerance},
            )
        self._brackets[(a, b)] = result
        return result

    def bracket(self, x: CanonicalVector, y: CanonicalVector) -> Tuple[CanonicalVector, float]:
        """Bracket of two constant-coefficient combinations, by bilinearity."""
        total: CanonicalVector = {}
        worst = 0.0
        for ka, ca in x.items():
            for kb, cb in y.items():
                vector, residual = self.canonical_bracket(ka, kb)
                total = add(total, vector, ca * cb)
                worst = max(worst, residual)
        return prune(total), worst


@dataclass
class BracketEntry:
    coefficients: np.ndarray
    overflow: CanonicalVector
    residual: float
    grades: List[int]

    @property
    def truncated(self) -> bool:
        return bool(self.overflow)


@dataclass
class StructureTable:
    basis: List[GradedElement]
    brackets: Dict[Tuple[int, int], BracketEntry]
    truncation: int
    kappa: float
    seed: int
    states: int
    seed_size: int = 0
    remainders: Dict[Tuple[int, int], float] = field(default_factory=dict)

    @property
    def labels(self) -> List[str]:
        return [e.label for e in self.basis]

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.brackets.values()), default=0.0)

    @property
    def new_elements(self) -> List[GradedElement]:
        return self.basis[self.seed_size :]

    def index(self, element: GradedElement) -> int:
        return self.basis.index(element)

    def entry(self, i: int, j: int) -> BracketEntry:
        if i == j:
            return BracketEntry(np.zeros(len(self.basis)), {}, 0.0, [])
        return self.brackets[(i, j)]

    def constants(self) -> np.ndarray:
        """C[i, j, k] = coefficient of basis element k in [e_i, e_j]; overflow excluded."""
        d = len(self.basis)
        out = np.zeros((d, d, d))
        for (i, j), entry in self.brackets.items():
            out[i, j] = entry.coefficients
        return out

    def truncated_mask(self) -> np.ndarray:
        d = len(self.basis)
        mask = np.zeros((d, d), dtype=bool)
        for (i, j), entry in self.brackets.items():
            mask[i, j] = entry.truncated
        return mask

    def grade_law_violations(self) -> List[Tuple[str, str]]:
        """Pairs whose bracket has terms outside grades {m + n, m + n + 1}."""
        out = []
        for (i, j), entry in self.brackets.items():
            if i > j:
                continue
            m, n = self.basis[i].n, self.basis[j].n
            if any(g not in (m + n, m + n + 1) for g in entry.grades):
                out.append((self.basis[i].label, self.basis[j].label))
        return out

    def to_dict(self) -> dict:
        labels = self.labels
        brackets = {}
        for (i, j), entry in sorted(self.brackets.items()):
            if i > j:
                continue
            brackets[f"[{labels[i]},{labels[j]}]"] = {
                "coefficients": {
                    labels[k]: float(c) for k, c in enumerate(entry.coefficients) if abs(c) > ZERO_TOL
                },
                "overflow": {GradedElement(*k).label: v for k, v in sorted(entry.overflow.items())},
                "residual": entry.residual,
                "truncated": entry.truncated,
            }
        return {
            "basis": labels,
            "new_elements": [e.label for e in self.new_elements],
            "truncation": self.truncation,
            "kappa": self.kappa,
            "seed": self.seed,
            "states": self.states,
            "max_residual": self.max_residual,
            "brackets": brackets,
        }

    def to_markdown(self) -> str:
        """Bracket matrix [row, column] with terms above the truncation grade marked."""
        labels = self.labels
        lines = [
            "| [row, col] | " + " | ".join(labels) + " |",
            "|---|" + "---|" * len(labels),
        ]
        for i, row_label in enumerate(labels):
            cells = []
            for j in range(len(labels)):
                entry = self.entry(i, j)
                text = _format_combination(entry.coefficients, labels)
                if entry.truncated:
                    text += " + (truncated)"
                cells.append(text)
            lines.append(f"| {row_label} | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def _format_combination(coefficients: np.ndarray, labels: Sequence[str]) -> str:
    terms = [f"{c:+.6g} {label}" for c, label in zip(coefficients, labels) if abs(c) > ZERO_TOL]
    return " ".join(terms) if terms else "0"


def _span_remainder(
    vector: CanonicalVector, basis: Sequence[GradedElement]
) -> Tuple[np.ndarray, CanonicalVector]:
    """Coefficients of `vector` over the basis and what is left outside their span."""
    elements = [e.canonical() for e in basis]
    keys = sorted({k for e in elements for k in e} | set(vector), key=canonical_sort_key)
    matrix, _ = canonical_matrix(elements, keys)
    target = np.array([vector.get(k, 0.0) for k in keys])
    if not basis:
        return np.zeros(0), prune(vector)
    coefficients, _, _, _ = linalg.lstsq(matrix, target, cond=settings.RANK_TOL)
    remainder = target - matrix @ coefficients
    return coefficients, prune(dict(zip(keys, remainder.tolist())))


def _extends_span(element: GradedElement, basis: Sequence[GradedElement]) -> bool:
    _, remainder = _span_remainder(element.canonical(), basis)
    return bool(remainder)


def close_under_bracket(
    seed: Sequence[GradedElement],
    N: Optional[int] = None,
    g: Optional[GasParameters] = None,
    states: Optional[int] = None,
    rng_seed: Optional[int] = None,
    tolerance: Optional[float] = None,
    fitter: Optional[BracketFitter] = None,
) -> StructureTable:
    """
    Smallest graded span containing `seed` and closed under brackets up to grade N.

    Args:
        seed: Generating elements, all of grade at most N.
        N: Truncation grade (default MAX_GRADE).
        g: Gas parameters; only kappa enters.
        states: Number of random states per fit (default CLOSURE_STATES).
        rng_seed: Seed for the fit states.
        tolerance: Largest admissible relative fit residual (default CLOSURE_TOL).
        fitter: Reuse a fitter and its cache.

    Returns:
        StructureTable over the closed basis, seed elements first.

    Raises:
        ValueError: If N < 1 or a seed element exceeds grade N.
        ClosureError: If some bracket needs state-dependent coefficients.
    """
    N = settings.MAX_GRADE if N is None else N
    if N < 1:
        raise ValueError(f"Truncation grade must be at least 1, got {N}")
    g = g or GasParameters()
    fitter = fitter or BracketFitter(g.kappa, states, rng_seed, tolerance)

    basis: List[GradedElement] = []
    for element in seed:
        if element.n > N:
            raise ValueError(f"Seed element {element.label} exceeds truncation grade {N}")
        if _extends_span(element, basis):
            basis.append(element)
        else:
            logger.debug("Seed element %s is dependent on earlier seeds; skipped", element.label)
    seed_size = len(basis)

    processed = set()
    while True:
        added = False
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                if (i, j) in processed:
                    continue
                processed.add((i, j))
                vector, _ = fitter.bracket(basis[i].canonical(), basis[j].canonical())
                inside, _ = split_by_grade(vector, N)
                _, remainder = _span_remainder(inside, basis)
                by_grade: Dict[int, Dict[str, float]] = {}
                for (grade, name), value in remainder.items():
                    by_grade.setdefault(grade, {})[name] = value
                for grade in sorted(by_grade):
                    for element in as_graded_elements(grade, by_grade[grade]):
                        if _extends_span(element, basis):
                            logger.info(
                                "Closure: [%s, %s] adds %s",
                                basis[i].label,
                                basis[j].label,
                                element.label,
                            )
                            basis.append(element)
                            added = True
        if not added:
            break

    table = _tabulate(basis, N, fitter, g.kappa, seed_size)
    truncated = sum(1 for e in table.brackets.values() if e.truncated)
    if truncated:
        logger.warning("Closure at grade %s: %s bracket entries truncated", N, truncated)
    logger.info(
        "Closure of %s at N=%s: %d elements, max residual %.3e",
        [e.label for e in seed],
        N,
        len(basis),
        table.max_residual,
    )
    return table


def _tabulate(
    basis: List[GradedElement], N: int, fitter: BracketFitter, kappa: float, seed_size: int
) -> StructureTable:
    brackets: Dict[Tuple[int, int], BracketEntry] = {}
    remainders: Dict[Tuple[int, int], float] = {}
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i == j:
                continue
            vector, residual = fitter.bracket(basis[i].canonical(), basis[j].canonical())
            inside, above = split_by_grade(vector, N)
            coefficients, remainder = _span_remainder(inside, basis)
            coefficients = np.where(np.abs(coefficients) > ZERO_TOL, coefficients, 0.0)
            if remainder:
                remainders[(i, j)] = max(abs(v) for v in remainder.values())
            brackets[(i, j)] = BracketEntry(
                coefficients=coefficients,
                overflow=above,
                residual=residual,
                grades=sorted({k[0] for k in vector}),
            )
    return StructureTable(
        basis=list(basis),
        brackets=brackets,
        truncation=N,
        kappa=kappa,
        seed=fitter.seed,
        states=len(fitter.states),
        seed_size=seed_size,
        remainders=remainders,
    )
