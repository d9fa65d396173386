import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from settings import settings
from wavelab.core.errors import GradientBlowupError, StateDomainError
from wavelab.core.profiles import Profile
from wavelab.euler.model import GasParameters, euler_matrices, reduced_matrices
from wavelab.euler.waves import propagation_sign
from wavelab.geometry.parametrization import region_map_array, region_map_inverse_array
from wavelab.solver.grid import EULER_VARIABLES, Grid1D, TimeSeries, refined_nodes
from wavelab.solver.schemes import max_gradient, spectral_radius, step_quasilinear
from wavelab.types import Convention, SystemKind

logger = logging.getLogger(__name__)


class QuasilinearSystem(ABC):
    """
    A system w_t = M(w) w_x (positive convention) or w_t + M(w) w_x = 0 (standard).

    Subclasses provide M batched over nodes and the variable layout.
    """

    kind: SystemKind
    variables: Tuple[str, ...]
    positive: Tuple[int, ...] = ()

    def __init__(self, g: GasParameters, convention: Convention = Convention.POSITIVE):
        self.g = g
        self.convention = Convention(convention)

    @abstractmethod
    def matrices(self, state: np.ndarray) -> np.ndarray:
        """M at every row of an (n, k) state array."""
        pass

    def transport(self, state: np.ndarray) -> np.ndarray:
        """B in w_t + B w_x = 0."""
        return propagation_sign(self.convention) * self.matrices(state)

    def grid(self, x0: float, x1: float, state: np.ndarray) -> Grid1D:
        return Grid1D(x0, x1, state, self.variables, self.positive)


class FullEulerSystem(QuasilinearSystem):
    kind = SystemKind.FULL
    variables = EULER_VARIABLES
    positive = (0, 1)

    def matrices(self, state: np.ndarray) -> np.ndarray:
        return euler_matrices(state, self.g.kappa)


class ReducedSoundSystem(QuasilinearSystem):
    """
    r1_t + a1 r1_x = 0, r2_t + a2 r2_x = 0 with a1,2 = sqrt(kappa)(r1 - r2 +- 1) + u0.

    The equations are taken as written in transport form under both
    conventions.
    """

    kind = SystemKind.REDUCED_SOUND
    variables = ("r1", "r2")

    def __init__(self, g: GasParameters, convention: Convention = Convention.POSITIVE):
        super().__init__(g, Convention.STANDARD)
        self.requested_convention = Convention(convention)

    def speeds(self, state: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        root = np.sqrt(self.g.kappa)
        diff = state[:, 0] - state[:, 1]
        return root * (diff + 1.0) + self.g.u0, root * (diff - 1.0) + self.g.u0

    def matrices(self, state: np.ndarray) -> np.ndarray:
        a1, a2 = self.speeds(state)
        out = np.zeros((state.shape[0], 2, 2))
        out[:, 0, 0] = a1
        out[:, 1, 1] = a2
        return out


class ReducedKappa3System(QuasilinearSystem):
    """Parameters T = (t1, t2, t3) with T_t = M(f(T)) T_x and f the region map."""

    kind = SystemKind.REDUCED_KAPPA3
    variables = ("t1", "t2", "t3")

    def __init__(self, g: GasParameters, convention: Convention = Convention.POSITIVE):
        if g.kappa != 3.0:
            raise ValueError(f"The reduced system is defined for kappa = 3, got {g.kappa}")
        super().__init__(g, convention)

    def matrices(self, state: np.ndarray) -> np.ndarray:
        return reduced_matrices(region_map_array(state), 3.0)


class SystemFactory:
    @staticmethod
    def create_system(
        system: SystemKind, g: GasParameters, convention: Convention = Convention.POSITIVE
    ) -> QuasilinearSystem:
        if system == SystemKind.FULL:
            return FullEulerSystem(g, convention)
        elif system == SystemKind.REDUCED_SOUND:
            return ReducedSoundSystem(g, convention)
        elif system == SystemKind.REDUCED_KAPPA3:
            return ReducedKappa3System(g, convention)
        else:
            raise ValueError(f"Unknown system: {system}")


def _check_gradient(grid: Grid1D, initial: float, t: float) -> None:
    current = max_gradient(grid)
    if not np.isfinite(current) or current > settings.GRADIENT_LIMIT * max(initial, 1.0):
        raise GradientBlowupError(
            f"Gradient blow-up at t={t:.6g}: max |w_x| = {current:.3e}",
            {"t": t, "max_gradient": current, "initial_gradient": initial},
        )


def solve_quasilinear(
    system: QuasilinearSystem,
    grid: Grid1D,
    T: float,
    cfl: Optional[float] = None,
    dt: Optional[float] = None,
    record_every: int = 1,
) -> TimeSeries:
    """
    March `grid` to time T with CIR steps.

    The step is recomputed from the spectral radius of each frame unless a
    fixed dt is given; the last step is shortened to land on T.

    Raises:
        CFLViolationError: If a fixed dt violates the CFL limit.
        GradientBlowupError: If max |w_x| grows past GRADIENT_LIMIT times its
            initial value.
    """
    if T < 0.0:
        raise ValueError(f"Final time must be nonnegative, got {T}")
    cfl = settings.CFL if cfl is None else cfl
    series = TimeSeries(system=system.kind.value, convention=system.convention.value)
    series.record(0.0, grid)
    initial_gradient = max_gradient(grid)

    t = 0.0
    steps = 0
    current = grid
    while t < T:
        radius = spectral_radius(current, system.transport)
        if dt is not None:
            step = dt
        else:
            step = cfl * current.dx / radius if radius > 0.0 else np.inf
        step = min(step, T - t)
        series.cfl_history.append(step * radius / current.dx)
        current = step_quasilinear(current, system.matrices, step, system.convention, cfl)
        t = T if step == T - t else t + step
        steps += 1
        _check_gradient(current, initial_gradient, t)
        if steps % record_every == 0 or t >= T:
            series.record(t, current)
        logger.debug("Step %d: t=%.6g dt=%.3e", steps, t, step)

    logger.info(
        "%s run to T=%s in %d steps (nx=%d, max CFL %.3f)",
        system.kind.value,
        T,
        steps,
        grid.nx,
        max(series.cfl_history, default=0.0),
    )
    return series


def solve_euler(
    grid: Grid1D,
    g: GasParameters,
    T: float,
    convention: Convention = Convention.POSITIVE,
    cfl: Optional[float] = None,
    record_every: int = 1,
) -> TimeSeries:
    return solve_quasilinear(FullEulerSystem(g, convention), grid, T, cfl, record_every=record_every)


def solve_reduced_sound(
    r1_0: Profile,
    r2_0: Profile,
    g: GasParameters,
    T: float,
    domain: Tuple[float, float, int] = (0.0, 1.0, 400),
    cfl: Optional[float] = None,
    dt: Optional[float] = None,
    record_every: int = 1,
) -> TimeSeries:
    """
    Integrate the Riemann-invariant form of the acoustic double wave.

    Args:
        r1_0, r2_0: Initial profiles of the invariants.
        g: kappa and u0 enter the speeds.
        T: Final time.
        domain: (x0, x1, nx).
        dt: Fixed step; lets runs with different data share one time grid.

    Initial invariants are expected to have disjoint supports; an overlap is
    logged as a warning and the run proceeds.

    Raises:
        GradientBlowupError: If the invariants steepen past the gradient limit.
    """
    x0, x1, nx = domain
    x = np.linspace(x0, x1, nx)
    system = ReducedSoundSystem(g)
    r1, r2 = r1_0(x), r2_0(x)
    overlap = (r1 != 0.0) & (r2 != 0.0)
    if np.any(overlap):
        logger.warning(
            "Initial invariants share support on %d nodes; the cross-coupling is active from t=0",
            int(np.count_nonzero(overlap)),
        )
    grid = system.grid(x0, x1, np.column_stack([r1, r2]))
    return solve_quasilinear(system, grid, T, cfl, dt, record_every)


@dataclass
class CoupledRun:
    """Reduced kappa = 3 run, full Euler run, and their distance after mapping."""

    reduced: TimeSeries
    full: TimeSeries
    distances: List[float] = field(default_factory=list)
    spectrum_errors: List[float] = field(default_factory=list)

    @property
    def final_distance(self) -> float:
        return self.distances[-1]

    def mapped(self) -> TimeSeries:
        """The reduced series mapped to Euler states through the region map."""
        out = TimeSeries(times=[], frames=[], cfl_history=list(self.reduced.cfl_history))
        for t, frame in zip(self.reduced.times, self.reduced.frames):
            out.record(t, Grid1D(frame.x0, frame.x1, region_map_array(frame.state)))
        return out


def _spectrum_error(params: np.ndarray) -> float:
    """max over nodes of |eig(M) - {u + c, u - c, u}| at the mapped states."""
    states = region_map_array(params)
    lam = np.sort(np.linalg.eigvals(reduced_matrices(states, 3.0)).real, axis=1)
    rho, p, u = states[:, 0], states[:, 1], states[:, 2]
    c = np.sqrt(3.0 * p / rho)
    expected = np.sort(np.column_stack([u - c, u, u + c]), axis=1)
    return float(np.max(np.abs(lam - expected)))


def solve_reduced_kappa3(
    initial: Grid1D,
    T: float,
    convention: Convention = Convention.POSITIVE,
    cfl: Optional[float] = None,
    record_every: int = 1,
) -> CoupledRun:
    """
    Advance the reduced system in T = (t1, t2, t3) and full Euler from the mapped data in lockstep.

    Both runs share each time step (the smaller of their CFL steps); after
    every step the L1 distance between the mapped reduced state and the
    Euler state is recorded, with the spectrum check of the reduced matrix.
    """
    convention = Convention(convention)
    g = GasParameters(kappa=3.0)
    reduced_system = ReducedKappa3System(g, convention)
    full_system = FullEulerSystem(g, convention)
    cfl = settings.CFL if cfl is None else cfl

    reduced = reduced_system.grid(initial.x0, initial.x1, initial.state)
    full = full_system.grid(initial.x0, initial.x1, region_map_array(initial.state))
    run = CoupledRun(
        reduced=TimeSeries(system=SystemKind.REDUCED_KAPPA3.value, convention=convention.value),
        full=TimeSeries(system=SystemKind.FULL.value, convention=convention.value),
    )
    run.reduced.record(0.0, reduced)
    run.full.record(0.0, full)
    run.distances.append(0.0)
    run.spectrum_errors.append(_spectrum_error(reduced.state))
    gradients = (max_gradient(reduced), max_gradient(full))

    t = 0.0
    steps = 0
    while t < T:
        radius = max(
            spectral_radius(reduced, reduced_system.transport),
            spectral_radius(full, full_system.transport),
        )
        step = min(cfl * full.dx / radius if radius > 0.0 else np.inf, T - t)
        run.reduced.cfl_history.append(step * radius / full.dx)
        run.full.cfl_history.append(step * radius / full.dx)
        reduced = step_quasilinear(reduced, reduced_system.matrices, step, convention, cfl)
        full = step_quasilinear(full, full_system.matrices, step, convention, cfl)
        t = T if step == T - t else t + step
        steps += 1
        _check_gradient(reduced, gradients[0], t)
        _check_gradient(full, gradients[1], t)
        run.spectrum_errors.append(_spectrum_error(reduced.state))
        if steps % record_every == 0 or t >= T:
            run.reduced.record(t, reduced)
            run.full.record(t, full)
            difference = np.abs(region_map_array(reduced.state) - full.state)
            run.distances.append(float(full.dx * np.sum(difference)))

    logger.info(
        "Reduced kappa=3 vs full Euler at T=%s: L1 distance %.3e after %d steps",
        T,
        run.final_distance,
        steps,
    )
    return run


def kappa3_initial_from_euler(grid: Grid1D) -> Grid1D:
    """Pull Euler initial data back to region-map parameters."""
    return Grid1D(
        grid.x0,
        grid.x1,
        region_map_inverse_array(grid.state),
        ReducedKappa3System.variables,
        (),
    )


Candidate = Callable[[float, float], object]


def _as_vector(value: object) -> np.ndarray:
    if hasattr(value, "as_array"):
        return value.as_array()
    return np.asarray(value, dtype=float)


def residual_check(
    candidate: Candidate,
    system: SystemKind,
    sample_points: Sequence[Tuple[float, float]],
    g: Optional[GasParameters] = None,
    convention: Convention = Convention.POSITIVE,
    step: Optional[float] = None,
) -> float:
    """
    max over samples of |w_t + B(w) w_x| for a candidate (x, t) -> w.

    Derivatives are central differences with step RESIDUAL_FD_STEP; B is
    -M under the positive convention and M under the standard one (the reduced
    sound system is always read in transport form).
    """
    g = g or GasParameters(kappa=3.0 if system == SystemKind.REDUCED_KAPPA3 else 1.4)
    model = SystemFactory.create_system(SystemKind(system), g, convention)
    h = settings.RESIDUAL_FD_STEP if step is None else step
    worst = 0.0
    for x, t in sample_points:
        w = _as_vector(candidate(x, t))
        w_t = (_as_vector(candidate(x, t + h)) - _as_vector(candidate(x, t - h))) / (2.0 * h)
        w_x = (_as_vector(candidate(x + h, t)) - _as_vector(candidate(x - h, t))) / (2.0 * h)
        if model.positive and np.any(w[list(model.positive)] <= 0.0):
            raise StateDomainError("Candidate leaves the positive cone", {"x": x, "t": t})
        b = model.transport(w[None, :])[0]
        worst = max(worst, float(np.linalg.norm(w_t + b @ w_x)))
    return worst


def self_convergence(
    system: QuasilinearSystem,
    make_grid: Callable[[int], Grid1D],
    T: float,
    nx: int,
    levels: int = 3,
    cfl: Optional[float] = None,
) -> Tuple[List[float], List[float]]:
    """
    L1 differences between successive refinements and the observed rates.

    Level k uses nx_k = 2 (nx_(k-1) - 1) + 1 nodes so every coarse node is a
    fine node; the difference at level k is dx_k sum |w_k - w_(k+1)[::2]|.
    """
    finals = []
    n = nx
    for _ in range(levels):
        grid = make_grid(n)
        finals.append(solve_quasilinear(system, grid, T, cfl, record_every=10**9).final)
        n = refined_nodes(n)
    errors = [
        float(coarse.dx * np.sum(np.abs(coarse.state - fine.state[::2])))
        for coarse, fine in zip(finals, finals[1:])
    ]
    rates = [float(np.log2(a / b)) for a, b in zip(errors, errors[1:]) if b > 0.0]
    logger.info("Self-convergence errors %s, rates %s", errors, rates)
    return errors, rates
