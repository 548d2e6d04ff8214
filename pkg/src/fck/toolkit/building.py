"""Minimum-cost deployment: how many of each prototype to build.

    minimize    sum_i c_i y_i
    subject to  sum_i phi_i y_i >= demand,   y_i >= 0 integer

Among equal-cost plans the one with fewer units wins, then the one that
leans on lower-index prototypes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

COVER_TOL = 1e-9


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class BuildOption:
    prototype: str
    capacity: float
    cost: float

    def __post_init__(self):
        if not self.capacity > 0:
            raise BuildError(f"{self.prototype}: capacity must be > 0")
        if self.cost < 0:
            raise BuildError(f"{self.prototype}: cost must be >= 0")


@dataclass(frozen=True)
class BuildProblem:
    options: tuple[BuildOption, ...]
    demand: float

    @classmethod
    def of(cls, demand: float, pairs: Sequence[tuple[float, float]]) -> "BuildProblem":
        """Shorthand from ``(capacity, cost)`` pairs."""
        return cls(tuple(BuildOption(f"p{i}", cap, cost) for i, (cap, cost) in enumerate(pairs)),
                   float(demand))


def _covers(supplied: float, demand: float) -> bool:
    return supplied >= demand - COVER_TOL * max(1.0, abs(demand))


def _key(problem: BuildProblem, y: Sequence[int]) -> tuple:
    cost = sum(o.cost * n for o, n in zip(problem.options, y))
    return (cost, sum(y), tuple(-n for n in y))


def _min_units(remaining: float, capacity: float) -> int:
    if remaining <= 0:
        return 0
    n = max(math.ceil(remaining / capacity - 1e-12), 0)
    while not _covers(n * capacity, remaining):
        n += 1
    return n


def solve_build(problem: BuildProblem) -> tuple[int, ...]:
    """Branch and bound with a fractional-knapsack relaxation as the bound."""
    demand = problem.demand
    if demand < 0:
        raise BuildError(f"negative demand {demand!r}")
    opts = problem.options
    if demand <= 0 or _covers(0.0, demand):
        return tuple(0 for _ in opts)
    if not opts:
        raise BuildError("positive demand but no prototypes to build")

    n = len(opts)
    # cheapest cost per unit capacity among options[k:], for the bound
    best_ratio = [math.inf] * (n + 1)
    for k in range(n - 1, -1, -1):
        best_ratio[k] = min(best_ratio[k + 1], opts[k].cost / opts[k].capacity)

    best: list = [None, None]  # key, y

    def consider(y: list[int]) -> None:
        key = _key(problem, y)
        if best[0] is None or key < best[0]:
            best[0], best[1] = key, tuple(y)

    def bound(cost_so_far: float, remaining: float, k: int) -> float:
        if remaining <= 0:
            return cost_so_far
        return cost_so_far + remaining * best_ratio[k]

    def branch(k: int, y: list[int], cost_so_far: float, remaining: float) -> None:
        if best[0] is not None:
            slack = 1e-9 * (1.0 + abs(best[0][0]))
            if bound(cost_so_far, remaining, k) > best[0][0] + slack:
                return
        if remaining <= 0 or _covers(0.0, remaining):
            consider(y + [0] * (n - k))
            return
        if k == n - 1:
            consider(y + [_min_units(remaining, opts[k].capacity)])
            return
        top = _min_units(remaining, opts[k].capacity)
        for count in range(top, -1, -1):
            branch(k + 1, y + [count], cost_so_far + count * opts[k].cost,
                   remaining - count * opts[k].capacity)

    branch(0, [], 0.0, demand)
    return best[1]


def brute_force_build(problem: BuildProblem) -> tuple[int, ...]:
    """Exhaustive search over ``0 <= y_i <= ceil(demand/phi_i) + 1``."""
    if problem.demand <= 0:
        return tuple(0 for _ in problem.options)
    if not problem.options:
        raise BuildError("positive demand but no prototypes to build")
    axes = [np.arange(math.ceil(problem.demand / o.capacity) + 2) for o in problem.options]
    grid = [g.ravel() for g in np.meshgrid(*axes, indexing="ij")]
    supplied = np.zeros(grid[0].shape)
    cost = np.zeros(grid[0].shape)
    for o, y in zip(problem.options, grid):
        supplied = supplied + o.capacity * y
        cost = cost + o.cost * y
    ok = supplied >= problem.demand - COVER_TOL * max(1.0, abs(problem.demand))
    units = sum(grid)
    # lexsort: last key is primary
    keys = [-y[ok] for y in reversed(grid)] + [units[ok], cost[ok]]
    best = np.lexsort(keys)[0]
    return tuple(int(y[ok][best]) for y in grid)


def plan_cost(problem: BuildProblem, y: Sequence[int]) -> float:
    return sum(o.cost * k for o, k in zip(problem.options, y))
