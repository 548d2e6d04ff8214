"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Solves ``min c x  s.t.  A x <= b, x >= 0``. Intended for desk-scale
exchange graphs (a few hundred columns at most).
"""

from __future__ import annotations

import numpy as np

PIVOT_TOL = 1e-12
COST_TOL = 1e-10


class LPError(RuntimeError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])


def _iterate(T: np.ndarray, basis: list[int], cost: np.ndarray, allowed: np.ndarray,
             max_iter: int) -> None:
    """Run simplex iterations on tableau ``T`` (last column is the rhs)."""
    m = T.shape[0]
    for _ in range(max_iter):
        body = T[:, :-1]
        reduced = cost - cost[basis] @ body
        scale = max(1.0, float(np.max(np.abs(cost))))
        candidates = np.flatnonzero(allowed & (reduced < -COST_TOL * scale))
        if candidates.size == 0:
            return
        col = int(candidates[0])  # Bland: lowest index enters
        column = body[:, col]
        best_row, best_ratio = -1, np.inf
        for r in range(m):
            if column[r] > PIVOT_TOL:
                ratio = T[r, -1] / column[r]
                tie = 1e-12 * max(1.0, abs(ratio))
                if ratio < best_ratio - tie or (
                        abs(ratio - best_ratio) <= tie and basis[r] < basis[best_row]):
                    best_row, best_ratio = r, ratio
        if best_row < 0:
            raise Unbounded(f"column {col} is unbounded")
        _pivot(T, best_row, col)
        basis[best_row] = col
    raise LPError("simplex iteration limit reached")


def simplex(c, A, b, max_iter: int = 50_000) -> tuple[np.ndarray, float]:
    """Return an optimal vertex ``x`` and ``c @ x``."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A = np.asarray(A, dtype=float).reshape(-1, n)
    b = np.asarray(b, dtype=float).reshape(-1)
    m = A.shape[0]
    if m == 0:
        if np.any(c < 0):
            raise Unbounded("negative cost with no constraints")
        return np.zeros(n), 0.0

    # columns: x (n) | slack (m) | artificial (k) | rhs
    neg = b < 0
    sign = np.where(neg, -1.0, 1.0)
    art_rows = np.flatnonzero(neg)
    k = art_rows.size
    T = np.zeros((m, n + m + k + 1))
    T[:, :n] = A * sign[:, None]
    T[np.arange(m), n + np.arange(m)] = sign
    T[art_rows, n + m + np.arange(k)] = 1.0
    T[:, -1] = b * sign
    basis = [n + i for i in range(m)]
    for j, r in enumerate(art_rows):
        basis[r] = n + m + j
    width = n + m + k

    if k:
        phase1 = np.zeros(width)
        phase1[n + m:] = 1.0
        _iterate(T, basis, phase1, np.ones(width, dtype=bool), max_iter)
        if phase1[basis] @ T[:, -1] > 1e-9 * max(1.0, float(np.max(np.abs(b)))):
            raise Infeasible("no feasible point")
        # drive zero-valued artificials out of the basis
        for r in range(m):
            if basis[r] >= n + m:
                nz = np.flatnonzero(np.abs(T[r, :n + m]) > PIVOT_TOL)
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])

    cost = np.zeros(width)
    cost[:n] = c
    allowed = np.zeros(width, dtype=bool)
    allowed[:n + m] = True
    _iterate(T, basis, cost, allowed, max_iter)

    x = np.zeros(width)
    x[basis] = T[:, -1]
    sol = np.clip(x[:n], 0.0, None)
    return sol, float(c @ sol)
