"""Linear decay chains solved analytically on mass fractions.

Every parent is expanded into the set of paths it can reach through the
branch graph, and each path contributes the classic Bateman term

    x_end(t) = x_0 * prod(branches) * prod(lam[:-1])
               * sum_i exp(-lam_i t) / prod_{j != i} (lam_j - lam_i)

Branch fractions carry mass unchanged from parent to daughter, so the total
of all fractions is conserved exactly in exact arithmetic.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Mapping

import numpy as np
from scipy.linalg import expm

from fck.resources.nuclides import DecayTable

EPSILON = 1e-6  # significance threshold on lam * dt
_DEGENERATE_GAP = 1e-9


class DecayError(ValueError):
    pass


class ChainSolver:
    """Decays fraction maps with a cached path expansion per parent nuclide."""

    def __init__(self, table: DecayTable):
        self.table = table
        self._paths: dict[int, list[tuple[tuple[int, ...], tuple[float, ...], float]]] = {}

    def paths(self, nuc: int):
        """All ``(nuclides, decay constants, branch product)`` paths starting at ``nuc``."""
        cached = self._paths.get(nuc)
        if cached is not None:
            return cached
        out = []
        stack = [((nuc,), (self.table.decay_const(nuc),), 1.0)]
        while stack:
            chain, lams, bprod = stack.pop()
            out.append((chain, lams, bprod))
            for daughter, frac in self.table.daughters(chain[-1]):
                if frac <= 0.0:
                    continue
                stack.append((chain + (daughter,),
                              lams + (self.table.decay_const(daughter),),
                              bprod * frac))
        out.sort(key=lambda p: p[0])
        self._paths[nuc] = out
        return out

    def is_significant(self, fractions: Mapping[int, float], dt: float) -> bool:
        return max((self.table.decay_const(n) * dt for n in fractions), default=0.0) >= EPSILON

    def decay(self, fractions: Mapping[int, float], dt: float) -> dict[int, float]:
        if dt < 0:
            raise DecayError(f"negative decay interval {dt!r}")
        if dt == 0:
            return dict(fractions)
        out: dict[int, float] = defaultdict(float)
        for nuc in sorted(fractions):
            x0 = fractions[nuc]
            for chain, lams, bprod in self.paths(nuc):
                coeff = bateman_coefficient(lams, dt)
                if coeff != 0.0:
                    out[chain[-1]] += x0 * bprod * coeff
        return {n: v for n, v in sorted(out.items()) if v > 0.0}


def bateman_coefficient(lams: tuple[float, ...], t: float) -> float:
    """Fraction of the first member found at the last member after ``t``."""
    k = len(lams)
    if k == 1:
        return math.exp(-lams[0] * t)
    if any(lam == 0.0 for lam in lams[:-1]):
        return 0.0
    if _near_degenerate(lams):
        return _bidiagonal_coefficient(lams, t)
    prefactor = math.prod(lams[:-1])
    total = 0.0
    for i, li in enumerate(lams):
        denom = 1.0
        for j, lj in enumerate(lams):
            if j != i:
                denom *= lj - li
        total += math.exp(-li * t) / denom
    return max(prefactor * total, 0.0)


def _near_degenerate(lams: tuple[float, ...]) -> bool:
    ordered = sorted(lams)
    for a, b in zip(ordered, ordered[1:]):
        if b - a <= _DEGENERATE_GAP * max(abs(a), abs(b)):
            return True
    return False


def _bidiagonal_coefficient(lams: tuple[float, ...], t: float) -> float:
    # repeated constants break the closed form; the matrix exponential of the
    # chain's bidiagonal generator is exact for that case
    k = len(lams)
    gen = np.zeros((k, k))
    for i, lam in enumerate(lams):
        gen[i, i] = -lam
        if i + 1 < k:
            gen[i + 1, i] = lam
    return float(max(expm(gen * t)[k - 1, 0], 0.0))
