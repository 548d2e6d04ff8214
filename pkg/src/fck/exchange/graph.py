"""The bipartite exchange graph in solver-ready form.

Every arc carries a unit cost and an upper bound; every capacity rule
(request quantities, mutual groups, portfolio constraints) is a row of
``A x <= b`` with non-negative coefficients. Exclusive arcs take either
zero or exactly their upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fck.exchange.types import ExchangeError

FLOW_TOL = 1e-9


@dataclass
class Arc:
    supplier: int
    request: int
    bid: int
    cost: float
    upper: float
    exclusive: bool = False
    preference: float = 1.0


@dataclass
class Row:
    coeffs: dict[int, float]
    rhs: float
    label: str = ""


@dataclass
class ExchangeGraph:
    arcs: list[Arc] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)

    def add_arc(self, supplier: int, request: int, bid: int, cost: float, upper: float,
                exclusive: bool = False, preference: float = 1.0) -> int:
        if not (cost > 0 and math.isfinite(cost)):
            raise ExchangeError(f"arc cost must be finite and > 0, got {cost!r}")
        if not (upper >= 0 and math.isfinite(upper)):
            raise ExchangeError(f"arc upper bound must be finite and >= 0, got {upper!r}")
        self.arcs.append(Arc(supplier, request, bid, cost, upper, exclusive, preference))
        return len(self.arcs) - 1

    def add_row(self, coeffs: dict[int, float], rhs: float, label: str = "") -> None:
        """Add ``sum a_k x_k <= rhs``; infinite rows and all-zero rows are dropped."""
        if math.isinf(rhs):
            return
        if rhs < 0:
            raise ExchangeError(f"row {label!r} has negative rhs {rhs!r}")
        clean = {}
        for k, a in coeffs.items():
            if a < 0:
                raise ExchangeError(f"row {label!r} has negative coefficient {a!r}")
            if a > 0:
                clean[k] = float(a)
        if clean:
            self.rows.append(Row(clean, float(rhs), label))

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @property
    def exclusive(self) -> bool:
        return any(a.exclusive for a in self.arcs)

    def costs(self) -> np.ndarray:
        return np.array([a.cost for a in self.arcs], dtype=float)

    def uppers(self) -> np.ndarray:
        return np.array([a.upper for a in self.arcs], dtype=float)

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.zeros((len(self.rows), self.n_arcs))
        for i, row in enumerate(self.rows):
            for k, a in row.coeffs.items():
                A[i, k] = a
        b = np.array([r.rhs for r in self.rows], dtype=float)
        return A, b

    @property
    def penalty(self) -> float:
        """Value of one unit of served demand: one more than the dearest arc."""
        return max((a.cost for a in self.arcs), default=0.0) + 1.0

    def objective_coeffs(self) -> np.ndarray:
        return self.costs() - self.penalty

    def cost(self, flows) -> float:
        return float(np.dot(self.costs(), flows)) if self.arcs else 0.0

    def objective(self, flows) -> float:
        return float(np.dot(self.objective_coeffs(), flows)) if self.arcs else 0.0

    def residual(self, flows) -> float:
        """Largest violation of rows, bounds or exclusivity (0 when feasible)."""
        x = np.asarray(flows, dtype=float)
        worst = 0.0
        if self.rows:
            A, b = self.matrix()
            worst = max(worst, float(np.max(A @ x - b)))
        if self.arcs:
            u = self.uppers()
            worst = max(worst, float(np.max(x - u)), float(np.max(-x)))
            for k, arc in enumerate(self.arcs):
                if arc.exclusive:
                    worst = max(worst, min(abs(x[k]), abs(x[k] - arc.upper)))
        return max(worst, 0.0)


@dataclass
class Solution:
    flows: np.ndarray
    cost: float
    objective: float
    solver: str

    @classmethod
    def of(cls, graph: ExchangeGraph, flows, solver: str) -> "Solution":
        x = np.asarray(flows, dtype=float).reshape(graph.n_arcs)
        return cls(x, graph.cost(x), graph.objective(x), solver)
