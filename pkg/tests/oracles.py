"""Reference computations used as ground truth by the tests.

Each oracle reaches its answer by a different route than the library:
decay through a dense generator matrix, builds and LPs by exhaustive
enumeration, enrichment by direct formula evaluation.
"""

from __future__ import annotations

import csv
import itertools
import math
from pathlib import Path

import numpy as np
from scipy.linalg import expm

import fck

DECAY_TSV = Path(fck.__file__).parent / "data" / "decay_table.tsv"
LN2 = math.log(2.0)


def _zzaaam(name: str) -> int:
    symbols = {"H": 1, "O": 8, "Sr": 38, "Zr": 40, "Cs": 55, "Ba": 56, "Pb": 82, "Bi": 83,
               "Ra": 88, "Th": 90, "Pa": 91, "U": 92, "Np": 93, "Pu": 94, "Am": 95, "Cm": 96}
    sym = name.rstrip("0123456789")
    return symbols[sym] * 10000 + int(name[len(sym):]) * 10


def read_decay_rows(path: Path = DECAY_TSV) -> dict[int, tuple[float, list[tuple[int, float]]]]:
    """``{nuclide: (lambda per month, [(daughter, branch), ...])}`` straight from the TSV."""
    out: dict[int, tuple[float, list[tuple[int, float]]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh, delimiter="\t") if r and not r[0].startswith("#")]
    for row in rows[1:]:
        nuc = _zzaaam(row[0])
        lam = 0.0 if row[1] == "stable" else LN2 / float(row[1])
        _, branches = out.setdefault(nuc, (lam, []))
        if row[2] and row[2] != "-":
            branches.append((_zzaaam(row[2]), float(row[3])))
    return out


def decay_expm(fractions: dict[int, float], dt: float,
               rows: dict | None = None) -> dict[int, float]:
    """Decay a mass-fraction map with ``expm`` of the full generator matrix."""
    rows = read_decay_rows() if rows is None else rows
    nucs = set(fractions)
    frontier = list(nucs)
    while frontier:
        n = frontier.pop()
        for d, _ in rows.get(n, (0.0, []))[1]:
            if d not in nucs:
                nucs.add(d)
                frontier.append(d)
    order = sorted(nucs)
    pos = {n: i for i, n in enumerate(order)}
    G = np.zeros((len(order), len(order)))
    for n in order:
        lam, branches = rows.get(n, (0.0, []))
        G[pos[n], pos[n]] -= lam
        for d, b in branches:
            G[pos[d], pos[n]] += lam * b
    x0 = np.array([fractions.get(n, 0.0) for n in order])
    x = expm(G * dt) @ x0
    return {n: float(x[pos[n]]) for n in order}


def brute_force_build(demand: float, options: list[tuple[float, float]]) -> tuple[int, ...]:
    """Cheapest covering plan by enumeration; ties: fewer units, then earlier prototypes."""
    if demand <= 0:
        return tuple(0 for _ in options)
    ranges = [range(math.ceil(demand / cap) + 2) for cap, _ in options]
    best = None
    for y in itertools.product(*ranges):
        supplied = sum(cap * n for (cap, _), n in zip(options, y))
        if supplied < demand - 1e-9 * max(1.0, demand):
            continue
        key = (sum(cost * n for (_, cost), n in zip(options, y)), sum(y), tuple(-n for n in y))
        if best is None or key < best[0]:
            best = (key, y)
    if best is None:
        raise ValueError("infeasible")
    return best[1]


def lp_by_vertices(c, A, b) -> float:
    """Minimum of ``c x`` over ``A x <= b, x >= 0`` by enumerating basic solutions.

    Only usable for a handful of variables.
    """
    c = np.asarray(c, float)
    n = c.size
    A_all = np.vstack([np.asarray(A, float).reshape(-1, n), -np.eye(n)])
    b_all = np.concatenate([np.asarray(b, float).ravel(), np.zeros(n)])
    best = math.inf
    for rows in itertools.combinations(range(len(b_all)), n):
        M = A_all[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, b_all[list(rows)])
        if np.all(A_all @ x <= b_all + 1e-9):
            best = min(best, float(c @ x))
    return best


def separative_value(x: float) -> float:
    return (1.0 - 2.0 * x) * math.log((1.0 - x) / x)


def enrichment_oracle(xf: float, xp: float, xt: float, product: float) -> tuple[float, float]:
    """``(feed, swu)`` from the textbook two-stream mass balance."""
    feed = product * (xp - xt) / (xf - xt)
    tails = feed - product
    swu = (product * separative_value(xp) + tails * separative_value(xt)
           - feed * separative_value(xf))
    return feed, swu
