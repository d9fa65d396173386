"""
Simple waves, double waves and Riemann-wave solutions of the Euler model.

Two double-wave maps live here. `double_wave_state` is the printed
parametrization in the Riemann invariants (r1, r2). `classical_double_wave`
is the map obtained by flowing the commuting rescaled acoustic fields
h+ gamma+ and h- gamma- from a base state; `integrate_double_wave` computes the
same map by numerical integration and serves as its oracle.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, root

from settings import settings
from wavelab.core.errors import IntegrationError, StateDomainError
from wavelab.core.profiles import Profile
from wavelab.euler.model import GasParameters, characteristic_fields, h_acoustic
from wavelab.fields.calculus import scale_field
from wavelab.fields.vectorfield import StateVector
from wavelab.types import Convention, WaveKind

logger = logging.getLogger(__name__)


def propagation_sign(convention: Convention) -> float:
    """Characteristic speed = sign * eigenvalue (positive: v_t = A v_x, standard: v_t + A v_x = 0)."""
    return -1.0 if Convention(convention) == Convention.POSITIVE else 1.0


@dataclass
class SimpleWaveCurve:
    kind: WaveKind
    r: np.ndarray
    states: np.ndarray
    relation_error: Optional[float] = None
    closed_form_readings: Dict[str, bool] = field(default_factory=dict)

    def as_state_vectors(self) -> List[StateVector]:
        return [StateVector.from_array(row) for row in self.states]


def base_state(g: GasParameters) -> StateVector:
    """The point fixed by (A, p0, u0): rho = 1, p = A + p0, u = u0."""
    return StateVector(1.0, g.A + g.p0, g.u0)


def simple_wave(
    kind: WaveKind,
    g: GasParameters,
    r_samples: Sequence[float],
    base: Optional[StateVector] = None,
) -> SimpleWaveCurve:
    """
    States along a simple wave of the given family.

    Args:
        kind: E, S+ or S-.
        g: Gas parameters; (A, p0, u0) fix the base point unless `base` is given.
        r_samples: For E the density values; for S+- the flow parameter of
            d f / d r = gamma(f) measured from the base point.
        base: Optional explicit base state.

    Returns:
        SimpleWaveCurve with, for acoustic kinds, the maximum relative error
        of p = A rho^kappa + p0 along the curve and which closed-form reading
        of the velocity relation matches the integrated curve.

    Raises:
        IntegrationError: If the ODE solver fails or leaves the positive cone.
    """
    kind = WaveKind(kind)
    base = base or base_state(g)
    r = np.asarray(r_samples, dtype=float)

    if kind == WaveKind.ENTROPIC:
        if np.any(r <= 0.0):
            raise StateDomainError("Entropic profile densities must be positive", {"r": r.tolist()})
        states = np.column_stack([r, np.full_like(r, base.p), np.full_like(r, base.u)])
        return SimpleWaveCurve(kind, r, states)

    g.require_non_isothermal()
    fields = {f.kind: f for f in characteristic_fields(g)}
    gamma = fields[kind].gamma
    states = _integrate_flow(lambda y: gamma.value(StateVector.from_array(y)), base, r)

    rho, p, u = states[:, 0], states[:, 1], states[:, 2]
    expected = g.A * rho**g.kappa + g.p0
    relation_error = float(np.max(np.abs(p - expected) / np.abs(expected)))
    readings = _velocity_readings(kind, g, rho, u)
    logger.debug("Simple wave %s: relation error %.3e, readings %s", kind.value, relation_error, readings)
    return SimpleWaveCurve(kind, r, states, relation_error, readings)


def _integrate_flow(
    rhs: Callable[[np.ndarray], np.ndarray], start: StateVector, r: np.ndarray
) -> np.ndarray:
    """Integrate d y / d r = rhs(y) from r = 0 to each sample, both directions."""
    out = np.empty((r.size, 3))
    y0 = start.as_array()
    for direction in (1.0, -1.0):
        mask = r >= 0.0 if direction > 0 else r < 0.0
        if not np.any(mask):
            continue
        targets = r[mask]
        order = np.argsort(direction * targets)
        t_eval = targets[order]
        end = t_eval[-1]
        if end == 0.0:
            out[np.flatnonzero(mask)[order]] = y0
            continue
        try:
            sol = solve_ivp(
                lambda _, y: rhs(y),
                (0.0, end),
                y0,
                method="DOP853",
                t_eval=t_eval,
                rtol=settings.ODE_TOL,
                atol=settings.ODE_TOL,
            )
        except Exception as e:
            raise IntegrationError(f"Integral curve integration failed: {e}") from e
        if not sol.success:
            raise IntegrationError(f"Integral curve integration failed: {sol.message}")
        ys = sol.y.T
        if np.any(ys[:, 0] <= 0.0) or np.any(ys[:, 1] <= 0.0):
            raise IntegrationError("Integral curve left the positive cone")
        out[np.flatnonzero(mask)[order]] = ys
    return out


def _velocity_readings(kind: WaveKind, g: GasParameters, rho: np.ndarray, u: np.ndarray) -> Dict[str, bool]:
    """
    Compare u(rho) on the curve with two readings of the printed sound-wave formula.

    A reading matches when u minus the reading is constant along the curve,
    i.e. the two agree up to the choice of the additive constant.
    """
    sign = 1.0 if kind == WaveKind.S_PLUS else -1.0
    k = g.kappa
    literal = (2.0 / (k - 1.0)) * np.sqrt(k * g.A * rho ** ((k - 1.0) / 2.0))
    standard = (2.0 * math.sqrt(k * g.A) / (k - 1.0)) * rho ** ((k - 1.0) / 2.0)
    scale = max(1.0, float(np.max(np.abs(u))))
    result = {}
    for name, reading in (("literal", literal), ("standard", standard)):
        offset = u - sign * reading
        result[name] = bool(np.ptp(offset) <= 1e-8 * scale)
    return result


def velocity_slope_error(curve: SimpleWaveCurve, kappa: float) -> float:
    """
    Max relative deviation of the finite-difference slope du/drho from +-c/rho.

    Central differences over consecutive curve samples; the curve should be
    sampled on a fine uniform r grid.
    """
    sign = 1.0 if curve.kind == WaveKind.S_PLUS else -1.0
    rho, p, u = curve.states[:, 0], curve.states[:, 1], curve.states[:, 2]
    slope = (u[2:] - u[:-2]) / (rho[2:] - rho[:-2])
    c = np.sqrt(kappa * p[1:-1] / rho[1:-1])
    exact = sign * c / rho[1:-1]
    return float(np.max(np.abs(slope - exact) / np.abs(exact)))


def double_wave_state(r1: float, r2: float, g: GasParameters) -> StateVector:
    """(A e^(r1+r2), kappa A e^(r1+r2) + p0, sqrt(kappa)(r1 - r2) + u0) as printed."""
    e = g.A * math.exp(r1 + r2)
    return StateVector(e, g.kappa * e + g.p0, math.sqrt(g.kappa) * (r1 - r2) + g.u0)


def printed_double_wave_mismatch(r1: float, r2: float, g: GasParameters, step: float = 1e-6) -> Dict[str, Dict[str, float]]:
    """
    Test d state / d r_s against h_s gamma_s for the printed double wave.

    For each invariant the best proportionality scalar and the relative
    mismatch of the derivative from that multiple are reported.
    """
    fields = characteristic_fields(g)
    h = h_acoustic(g.kappa)
    rescaled = {"r1": scale_field(h, fields[0].gamma), "r2": scale_field(h, fields[2].gamma)}
    v = double_wave_state(r1, r2, g)
    report = {}
    for name, shift in (("r1", (step, 0.0)), ("r2", (0.0, step))):
        plus = double_wave_state(r1 + shift[0], r2 + shift[1], g).as_array()
        minus = double_wave_state(r1 - shift[0], r2 - shift[1], g).as_array()
        d = (plus - minus) / (2.0 * step)
        f = rescaled[name].value(v)
        scalar = float(d @ f / (f @ f))
        mismatch = float(np.linalg.norm(d - scalar * f) / np.linalg.norm(d))
        report[name] = {"scalar": scalar, "mismatch": mismatch}
    return report


def classical_double_wave(r1: float, r2: float, base: StateVector, kappa: float) -> StateVector:
    """
    Flow of h+ gamma+ for time r1 and h- gamma- for time r2 from `base`.

    Along either field c changes at rate (kappa - 1)/2 and p / rho^kappa is
    conserved, while u changes at rate +1 and -1 respectively.
    """
    c_base = math.sqrt(kappa * base.p / base.rho)
    u = base.u + r1 - r2
    if kappa == 1.0:
        rho = base.rho * math.exp((r1 + r2) / c_base)
        return StateVector(rho, base.p * rho / base.rho, u)
    c = c_base + 0.5 * (kappa - 1.0) * (r1 + r2)
    if c <= 0.0:
        raise StateDomainError(
            "Double wave parameters leave the positive cone",
            {"r1": r1, "r2": r2, "sound_speed": c},
        )
    rho = base.rho * (c / c_base) ** (2.0 / (kappa - 1.0))
    return StateVector(rho, base.p * (rho / base.rho) ** kappa, u)


def integrate_double_wave(r1: float, r2: float, base: StateVector, kappa: float) -> StateVector:
    """Numerical oracle for `classical_double_wave`: integrate both flows in turn."""
    fields = characteristic_fields(GasParameters(kappa=kappa))
    h = h_acoustic(kappa)
    x1 = scale_field(h, fields[0].gamma)
    x2 = scale_field(h, fields[2].gamma)
    mid = _integrate_flow(lambda y: x1.value(StateVector.from_array(y)), base, np.array([r1]))[0]
    end = _integrate_flow(
        lambda y: x2.value(StateVector.from_array(y)), StateVector.from_array(mid), np.array([r2])
    )[0]
    return StateVector.from_array(end)


def _acoustic_speeds(v: StateVector, kappa: float) -> Tuple[float, float]:
    c = math.sqrt(kappa * v.p / v.rho)
    return v.u + c, v.u - c


class DoubleWaveSolution:
    """
    (x, t) -> state for the S+S- double wave with phases phi1, phi2.

    Solves r1 = phi1(x - s+ t), r2 = phi2(x - s- t) pointwise, with s the
    convention-signed acoustic speeds at the state built from (r1, r2). The
    relations are exact where one invariant is constant and, for kappa = 3,
    everywhere since each speed then depends on its own invariant only.
    """

    def __init__(
        self,
        phi1: Profile,
        phi2: Profile,
        base: StateVector,
        kappa: float,
        convention: Convention = Convention.POSITIVE,
    ):
        self.phi1 = phi1
        self.phi2 = phi2
        self.base = base
        self.kappa = kappa
        self.sign = propagation_sign(convention)

    def invariants(self, x: float, t: float) -> Tuple[float, float]:
        def residual(r):
            v = classical_double_wave(r[0], r[1], self.base, self.kappa)
            lam_plus, lam_minus = _acoustic_speeds(v, self.kappa)
            return [
                r[0] - self.phi1(x - self.sign * lam_plus * t),
                r[1] - self.phi2(x - self.sign * lam_minus * t),
            ]

        guess = [self.phi1(x), self.phi2(x)]
        sol = root(residual, guess, method="hybr", tol=1e-14)
        # hybr reports "xtol too small" once it stalls at machine precision
        if not sol.success and np.max(np.abs(sol.fun)) > settings.ODE_TOL:
            raise IntegrationError(f"Implicit double-wave relations unsolved at x={x}, t={t}: {sol.message}")
        if not sol.success:
            logger.debug("Accepting stalled root at x=%s, t=%s: %s", x, t, sol.message)
        return float(sol.x[0]), float(sol.x[1])

    def __call__(self, x: float, t: float) -> StateVector:
        r1, r2 = self.invariants(x, t)
        return classical_double_wave(r1, r2, self.base, self.kappa)


class RiemannWaveSolution:
    """
    (x, t) -> state for a single Riemann wave r = phi(x - s(f(r)) t).

    The state curve f is the gamma0 line through `base` for E and the
    rescaled acoustic flow for S+-; the implicit phase is solved by
    bracketed root finding before gradient catastrophe.
    """

    def __init__(
        self,
        kind: WaveKind,
        phi: Profile,
        base: StateVector,
        kappa: float,
        convention: Convention = Convention.POSITIVE,
    ):
        self.kind = WaveKind(kind)
        self.phi = phi
        self.base = base
        self.kappa = kappa
        self.sign = propagation_sign(convention)

    def state_of(self, r: float) -> StateVector:
        if self.kind == WaveKind.ENTROPIC:
            return StateVector(self.base.rho + r, self.base.p, self.base.u)
        if self.kind == WaveKind.S_PLUS:
            return classical_double_wave(r, 0.0, self.base, self.kappa)
        return classical_double_wave(0.0, r, self.base, self.kappa)

    def speed_of(self, v: StateVector) -> float:
        plus, minus = _acoustic_speeds(v, self.kappa)
        return {WaveKind.S_PLUS: plus, WaveKind.ENTROPIC: v.u, WaveKind.S_MINUS: minus}[self.kind]

    def phase(self, x: float, t: float) -> float:
        def g(r):
            return r - self.phi(x - self.sign * self.speed_of(self.state_of(r)) * t)

        margin = 1e-9 + 1e-6 * max(abs(self.phi.lower), abs(self.phi.upper))
        lo, hi = self.phi.lower - margin, self.phi.upper + margin
        if g(lo) == 0.0:
            return lo
        return float(brentq(g, lo, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps))

    def __call__(self, x: float, t: float) -> StateVector:
        return self.state_of(self.phase(x, t))
