"""
Tagged forward-mode dual numbers.

Every differentiation pass draws a fresh tag, so a derivative taken inside
another derivative (Jacobian of a Lie bracket, Jacobi identity checks) keeps
its perturbations apart from the outer ones. A value carrying a higher tag
holds lower-tag duals or floats in its primal and tangent slots.
"""

import itertools
import math
from typing import Any, Callable, List, Sequence, Tuple, Union

import numpy as np

Number = Union[int, float]

_tag_counter = itertools.count(1)


def new_tag() -> int:
    return next(_tag_counter)


class Dual:
    __slots__ = ("tag", "p", "t")
    # numpy scalars must defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, tag: int, primal: Any, tangent: Any = 0.0):
        self.tag = tag
        self.p = primal
        self.t = tangent

    def __repr__(self) -> str:
        return f"Dual(tag={self.tag}, p={self.p!r}, t={self.t!r})"

    # ---------- arithmetic ----------
    def __add__(self, other: Any) -> "Dual":
        tag = _top_tag(self, other)
        ap, at = split(self, tag)
        bp, bt = split(other, tag)
        return Dual(tag, ap + bp, at + bt)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Dual":
        tag = _top_tag(self, other)
        ap, at = split(self, tag)
        bp, bt = split(other, tag)
        return Dual(tag, ap - bp, at - bt)

    def __rsub__(self, other: Any) -> "Dual":
        tag = _top_tag(self, other)
        ap, at = split(other, tag)
        bp, bt = split(self, tag)
        return Dual(tag, ap - bp, at - bt)

    def __mul__(self, other: Any) -> "Dual":
        tag = _top_tag(self, other)
        ap, at = split(self, tag)
        bp, bt = split(other, tag)
        return Dual(tag, ap * bp, at * bp + ap * bt)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Dual":
        return _divide(self, other)

    def __rtruediv__(self, other: Any) -> "Dual":
        return _divide(other, self)

    def __neg__(self) -> "Dual":
        return Dual(self.tag, -self.p, -self.t)

    def __pos__(self) -> "Dual":
        return self

    def __abs__(self) -> "Dual":
        return self if value_of(self) >= 0.0 else -self

    def __pow__(self, power: Number) -> "Dual":
        if isinstance(power, Dual):
            raise TypeError("dual exponents are not supported")
        if power == 0:
            return Dual(self.tag, self.p**0, self.t * 0.0)
        return Dual(self.tag, self.p**power, power * self.p ** (power - 1) * self.t)

    # ---------- ordering on the real part ----------
    def __lt__(self, other: Any) -> bool:
        return value_of(self) < value_of(other)

    def __le__(self, other: Any) -> bool:
        return value_of(self) <= value_of(other)

    def __gt__(self, other: Any) -> bool:
        return value_of(self) > value_of(other)

    def __ge__(self, other: Any) -> bool:
        return value_of(self) >= value_of(other)


def _top_tag(a: Any, b: Any) -> int:
    ta = a.tag if isinstance(a, Dual) else 0
    tb = b.tag if isinstance(b, Dual) else 0
    return max(ta, tb)


def split(x: Any, tag: int) -> Tuple[Any, Any]:
    """Primal and tangent of `x` with respect to `tag`; other tags count as constants."""
    if isinstance(x, Dual) and x.tag == tag:
        return x.p, x.t
    return x, 0.0


def _divide(a: Any, b: Any) -> Dual:
    tag = _top_tag(a, b)
    ap, at = split(a, tag)
    bp, bt = split(b, tag)
    if value_of(bp) == 0.0:
        raise ZeroDivisionError("Dual division by zero")
    return Dual(tag, ap / bp, (at * bp - ap * bt) / (bp * bp))


def value_of(x: Any) -> float:
    """Strip every perturbation and return the real part."""
    while isinstance(x, Dual):
        x = x.p
    return float(x)


def tangent(x: Any, tag: int) -> Any:
    if not isinstance(x, Dual):
        return 0.0
    if x.tag == tag:
        return x.t
    if x.tag < tag:
        return 0.0
    return Dual(x.tag, tangent(x.p, tag), tangent(x.t, tag))


# ---------- elementary functions, dispatching on the argument type ----------
def sqrt(x: Any) -> Any:
    if isinstance(x, Dual):
        s = sqrt(x.p)
        return Dual(x.tag, s, x.t / (2.0 * s))
    return np.sqrt(x)


def exp(x: Any) -> Any:
    if isinstance(x, Dual):
        e = exp(x.p)
        return Dual(x.tag, e, e * x.t)
    return np.exp(x)


def log(x: Any) -> Any:
    if isinstance(x, Dual):
        if value_of(x) <= 0.0:
            raise ValueError(f"log domain error: input must be > 0, got {value_of(x)}")
        return Dual(x.tag, log(x.p), x.t / x.p)
    return np.log(x)


def sin(x: Any) -> Any:
    if isinstance(x, Dual):
        return Dual(x.tag, sin(x.p), cos(x.p) * x.t)
    return np.sin(x)


def cos(x: Any) -> Any:
    if isinstance(x, Dual):
        return Dual(x.tag, cos(x.p), -sin(x.p) * x.t)
    return np.cos(x)


def jacobian(func: Callable[..., Sequence[Any]], x: Sequence[Any]) -> List[List[Any]]:
    """
    Forward-mode Jacobian of `func` at `x`, one pass per input direction.

    `x` may itself hold duals of an outer pass; the entries returned then
    carry that outer perturbation, which is how second derivatives are taken.

    Returns:
        Nested list J with J[i][k] = d func_i / d x_k.
    """
    tag = new_tag()
    n = len(x)
    columns = []
    for k in range(n):
        seeded = [Dual(tag, xi, 1.0 if i == k else 0.0) for i, xi in enumerate(x)]
        out = func(*seeded)
        columns.append([tangent(o, tag) for o in out])
    m = len(columns[0])
    return [[columns[k][i] for k in range(n)] for i in range(m)]


def gradient(func: Callable[..., Any], x: Sequence[Any]) -> List[Any]:
    return jacobian(lambda *args: (func(*args),), x)[0]


def is_finite(x: Any) -> bool:
    return math.isfinite(value_of(x))
