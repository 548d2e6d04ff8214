"""Symbolic demand functions of time (months)."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence, Union


@dataclass(frozen=True)
class Linear:
    slope: float
    intercept: float = 0.0

    def __call__(self, t: float) -> float:
        return self.slope * t + self.intercept


@dataclass(frozen=True)
class Exponential:
    """``a * exp(r t) + b``."""

    a: float
    rate: float
    b: float = 0.0

    def __call__(self, t: float) -> float:
        return self.a * math.exp(self.rate * t) + self.b


@dataclass(frozen=True)
class Piecewise:
    """Segments ``(t_start, fn)``; each holds on ``[t_start, next t_start)``.

    The inner function sees absolute time, not time since the segment start.
    Before the first start the value is 0.
    """

    segments: tuple[tuple[float, "SymbFunction"], ...] = field(default=())

    def __post_init__(self):
        starts = [s for s, _ in self.segments]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError(f"piecewise starts must be strictly increasing: {starts}")
        object.__setattr__(self, "_starts", tuple(starts))

    def __call__(self, t: float) -> float:
        idx = bisect.bisect_right(self._starts, t) - 1
        if idx < 0:
            return 0.0
        return self.segments[idx][1](t)


SymbFunction = Union[Linear, Exponential, Piecewise]


def evaluate(fn: SymbFunction, t: float) -> float:
    return fn(t)


def make_function(kind: str, params: Sequence[float] | str) -> SymbFunction:
    """Build ``linear``/``exponential`` functions from a parameter list.

    ``linear``: ``slope [intercept]``; ``exponential``: ``a rate [b]``.
    """
    if isinstance(params, str):
        params = [float(p) for p in params.split()]
    params = [float(p) for p in params]
    kind = kind.strip().lower()
    if kind in ("linear", "lin"):
        if len(params) not in (1, 2):
            raise ValueError(f"linear takes 1 or 2 parameters, got {len(params)}")
        return Linear(*params)
    if kind in ("exponential", "exp"):
        if len(params) not in (2, 3):
            raise ValueError(f"exponential takes 2 or 3 parameters, got {len(params)}")
        return Exponential(*params)
    raise ValueError(f"unknown function type {kind!r}")


def piecewise(pieces: Sequence[tuple[float, SymbFunction]]) -> SymbFunction:
    pieces = sorted(pieces, key=lambda p: p[0])
    if len(pieces) == 1 and pieces[0][0] <= 0:
        return pieces[0][1]
    return Piecewise(tuple((float(s), f) for s, f in pieces))
