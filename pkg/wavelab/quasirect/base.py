import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from settings import settings
from wavelab.core.errors import DegenerateFamilyError
from wavelab.core.utils import make_rng
from wavelab.fields.calculus import wedge_independent
from wavelab.fields.vectorfield import StateVector, VectorField, random_states
from wavelab.schemas import PairResidual, QuasiRectReport
from wavelab.types import Criterion

logger = logging.getLogger(__name__)


@dataclass
class CriterionConfig:
    samples: int = 100
    seed: Optional[int] = None
    tolerance: Optional[float] = None

    def resolved_seed(self) -> int:
        return settings.SEED if self.seed is None else self.seed

    def resolved_tolerance(self) -> float:
        return settings.DERIVATIVE_TOL if self.tolerance is None else self.tolerance


class QuasiRectCriterion(ABC):
    """
    A pairwise test of quasi-rectifiability over sampled states.

    Subclasses supply the vector to decompose for one pair at one state and
    how to decompose it; sampling, degeneracy checks and the verdict are shared.
    """

    criterion: Criterion

    def __init__(self, config: Optional[CriterionConfig] = None):
        self.config = config or CriterionConfig()

    @abstractmethod
    def pair_residual(
        self, x: VectorField, y: VectorField, v: StateVector
    ) -> Tuple[float, Optional[np.ndarray]]:
        """Relative residual of the pair at v and the expansion coefficients if any."""
        pass

    def _check_family(self, family: Sequence[VectorField]) -> None:
        if len(family) < 2:
            raise ValueError(f"Quasi-rectifiability needs at least two fields, got {len(family)}")

    def evaluate(self, family: Sequence[VectorField]) -> QuasiRectReport:
        self._check_family(family)
        seed = self.config.resolved_seed()
        tolerance = self.config.resolved_tolerance()
        states = random_states(make_rng(seed), self.config.samples)
        pairs = list(itertools.combinations(range(len(family)), 2))

        for v in states:
            for i, j in pairs:
                if not wedge_independent([family[i], family[j]], v):
                    raise DegenerateFamilyError(
                        f"Fields {family[i].label} and {family[j].label} are dependent at {v.as_tuple()}",
                        {"state": v.as_tuple(), "pair": [family[i].label, family[j].label]},
                    )

        rows: List[PairResidual] = []
        for i, j in pairs:
            worst = 0.0
            first_coefficients = None
            for k, v in enumerate(states):
                residual, coefficients = self.pair_residual(family[i], family[j], v)
                worst = max(worst, residual)
                if k == 0 and coefficients is not None:
                    first_coefficients = coefficients.tolist()
            rows.append(
                PairResidual(
                    pair=(i, j),
                    labels=(family[i].label, family[j].label),
                    max_residual=worst,
                    passed=worst <= tolerance,
                    coefficients=first_coefficients,
                )
            )

        verdict = all(row.passed for row in rows)
        logger.info(
            "%s criterion on %s: verdict=%s over %d states",
            self.criterion.value,
            [f.label for f in family],
            verdict,
            len(states),
        )
        return QuasiRectReport(
            verdict=verdict,
            criterion=self.criterion,
            samples=len(states),
            seed=seed,
            tolerance=tolerance,
            per_pair=rows,
            approximate=any(f.approximate for f in family),
        )
