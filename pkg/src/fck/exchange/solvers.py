"""Flow solvers for an :class:`ExchangeGraph`.

All three solvers minimize ``sum_k (c_k - M) x_k`` where ``M`` is the
graph's penalty (one more than the dearest arc), i.e. they serve as much
demand as possible and prefer cheap arcs. The reported ``cost`` is the
plain ``c @ x``.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog

from fck.exchange.graph import ExchangeGraph, Solution
from fck.exchange.simplex import simplex
from fck.exchange.types import ExchangeError

EXACT_MAX_ARCS = 16
_EXCL_TOL = 1e-12


def arc_order(graph: ExchangeGraph) -> list[int]:
    """Greedy visiting order: cost, then supplier id, request id, bid id."""
    return sorted(range(graph.n_arcs),
                  key=lambda k: (graph.arcs[k].cost, graph.arcs[k].supplier,
                                 graph.arcs[k].request, graph.arcs[k].bid))


def solve_greedy(graph: ExchangeGraph) -> Solution:
    headroom = [row.rhs for row in graph.rows]
    rows_of: list[list[tuple[int, float]]] = [[] for _ in graph.arcs]
    for i, row in enumerate(graph.rows):
        for k, a in row.coeffs.items():
            rows_of[k].append((i, a))
    x = np.zeros(graph.n_arcs)
    for k in arc_order(graph):
        arc = graph.arcs[k]
        grant = arc.upper
        for i, a in rows_of[k]:
            grant = min(grant, headroom[i] / a)
        if arc.exclusive:
            grant = arc.upper if grant >= arc.upper * (1 - _EXCL_TOL) - _EXCL_TOL else 0.0
        if grant <= 0:
            continue
        x[k] = grant
        for i, a in rows_of[k]:
            headroom[i] = max(headroom[i] - a * grant, 0.0)
    return Solution.of(graph, x, "greedy")


def solve_lp(graph: ExchangeGraph) -> Solution:
    """Exact LP optimum by the in-house simplex; exclusive arcs are rejected."""
    if graph.exclusive:
        raise ExchangeError("solve_lp cannot handle exclusive arcs")
    if graph.n_arcs == 0:
        return Solution.of(graph, np.zeros(0), "lp")
    A, b = graph.matrix()
    n = graph.n_arcs
    A_full = np.vstack([A, np.eye(n)])
    b_full = np.concatenate([b, graph.uppers()])
    x, _ = simplex(graph.objective_coeffs(), A_full, b_full)
    return Solution.of(graph, np.minimum(x, graph.uppers()), "lp")


def _lp_restriction(c, A, b, upper) -> tuple[np.ndarray, float] | None:
    if c.size == 0:
        return np.zeros(0), 0.0
    res = linprog(c, A_ub=A if A.size else None, b_ub=b if A.size else None,
                  bounds=list(zip(np.zeros_like(upper), upper)), method="highs")
    if res.status != 0:
        return None
    return np.clip(res.x, 0.0, upper), float(res.fun)


def solve_exact_small(graph: ExchangeGraph) -> Solution:
    """Enumerate exclusive arcs on/off and solve each continuous restriction.

    The restrictions go through HiGHS rather than :func:`solve_lp`, so this
    is an independent reference for tests.
    """
    n = graph.n_arcs
    if n > EXACT_MAX_ARCS:
        raise ExchangeError(f"exact solver limited to {EXACT_MAX_ARCS} arcs, got {n}")
    if n == 0:
        return Solution.of(graph, np.zeros(0), "exact")
    A, b = graph.matrix()
    c = graph.objective_coeffs()
    u = graph.uppers()
    excl = [k for k, a in enumerate(graph.arcs) if a.exclusive]
    free = [k for k, a in enumerate(graph.arcs) if not a.exclusive]
    best_x, best_obj = np.zeros(n), 0.0
    for mask in itertools.product((0, 1), repeat=len(excl)):
        fixed = np.zeros(n)
        for on, k in zip(mask, excl):
            fixed[k] = u[k] if on else 0.0
        rhs = b - A @ fixed if A.size else b
        if np.any(rhs < -1e-9 * (1 + np.max(np.abs(b), initial=0.0))):
            continue
        rhs = np.maximum(rhs, 0.0)
        sub = _lp_restriction(c[free], A[:, free] if A.size else A, rhs, u[free])
        if sub is None:
            continue
        x = fixed.copy()
        x[free] = sub[0]
        obj = float(c @ x)
        if obj < best_obj - 1e-12 * max(1.0, abs(best_obj)):
            best_x, best_obj = x, obj
    return Solution.of(graph, best_x, "exact")


SOLVERS = {"greedy": solve_greedy, "lp": solve_lp, "exact": solve_exact_small}
