"""Immutable, interned compositions and the decay-line cache."""

from __future__ import annotations

import logging
import math
from types import MappingProxyType
from typing import Callable, Iterator, Mapping

from fck.resources.decay import ChainSolver
from fck.resources.nuclides import DecayTable, nucid, znum

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
WARN_TOL = 1e-6


class CompositionError(ValueError):
    pass


class Composition:
    """A normalized nuclide -> mass fraction map.

    Instances are only made by :class:`CompositionTable`, which guarantees
    that equal maps share one object (and one ``id``). The ``decay_edges``
    map is the only mutable part: ``{dt: Composition}`` links appended by the
    cache.
    """

    __slots__ = ("id", "fractions", "decay_edges", "_key")

    def __init__(self, comp_id: int, fractions: dict[int, float], key: tuple):
        self.id = comp_id
        self.fractions: Mapping[int, float] = MappingProxyType(fractions)
        self.decay_edges: dict[float, Composition] = {}
        self._key = key

    def __getitem__(self, nuc: int) -> float:
        return self.fractions.get(nuc, 0.0)

    def __iter__(self) -> Iterator[int]:
        return iter(self.fractions)

    def __len__(self) -> int:
        return len(self.fractions)

    def __repr__(self) -> str:
        return f"Composition(id={self.id}, n={len(self.fractions)})"

    def element_fraction(self, z: int) -> float:
        return sum(f for n, f in self.fractions.items() if znum(n) == z)


class CompositionTable:
    """Intern table for compositions of one simulation.

    ``on_new`` is called once for every newly interned composition; the
    recorder uses it to write Compositions rows, so cache hits never produce
    rows.
    """

    def __init__(self, table: DecayTable, on_new: Callable[[Composition], None] | None = None,
                 on_warning: Callable[[str], None] | None = None):
        self.decay_table = table
        self.solver = ChainSolver(table)
        self._by_key: dict[tuple, Composition] = {}
        self._by_id: list[Composition] = []
        self.on_new = on_new
        self.on_warning = on_warning
        self.decay_computations = 0

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[Composition]:
        return iter(self._by_id)

    def get(self, comp_id: int) -> Composition:
        return self._by_id[comp_id]

    def intern(self, fractions: Mapping, *, strict: bool = True) -> Composition:
        """Return the shared composition for ``fractions`` (mass basis).

        Keys may be nuclide names or ids. With ``strict`` the sum must be
        within 1e-6 of one (a warning is emitted beyond 1e-12); internal
        callers that build maps by arithmetic pass ``strict=False`` and get
        plain renormalization.
        """
        clean: dict[int, float] = {}
        for key, value in fractions.items():
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise CompositionError(f"invalid fraction {value!r} for {key!r}")
            if value > 0:
                nuc = nucid(key)
                clean[nuc] = clean.get(nuc, 0.0) + value
        if not clean:
            raise CompositionError("empty composition")
        total = math.fsum(clean.values())
        off = abs(total - 1.0)
        if strict and off > WARN_TOL:
            raise CompositionError(f"fractions sum to {total!r}; expected 1 within {WARN_TOL}")
        if strict and off > NORM_TOL:
            msg = f"composition renormalized from sum {total!r}"
            logger.warning(msg)
            if self.on_warning is not None:
                self.on_warning(msg)
        norm = {n: clean[n] / total for n in sorted(clean)}
        key = tuple(norm.items())
        comp = self._by_key.get(key)
        if comp is None:
            comp = Composition(len(self._by_id), norm, key)
            self._by_key[key] = comp
            self._by_id.append(comp)
            if self.on_new is not None:
                self.on_new(comp)
        return comp

    def from_atom_fractions(self, atoms: Mapping) -> Composition:
        mass = {nucid(k): float(v) * self.decay_table.atomic_mass(nucid(k)) for k, v in atoms.items()}
        total = sum(mass.values())
        if total <= 0:
            raise CompositionError("empty composition")
        return self.intern({n: m / total for n, m in mass.items()}, strict=False)

    def mix(self, parts: list[tuple[Composition, float]]) -> Composition:
        """Mass-weighted average of ``(composition, mass)`` pairs."""
        acc: dict[int, float] = {}
        total = 0.0
        for comp, mass in parts:
            if mass <= 0:
                continue
            total += mass
            for n, f in comp.fractions.items():
                acc[n] = acc.get(n, 0.0) + f * mass
        if total <= 0:
            raise CompositionError("cannot mix zero mass")
        return self.intern({n: v / total for n, v in acc.items()}, strict=False)

    def decay_direct(self, comp: Composition, dt: float) -> Composition:
        """Single-shot chain solution, bypassing (and not touching) the cache."""
        if dt == 0:
            return comp
        return self.intern(self.solver.decay(comp.fractions, dt), strict=False)

    def decay(self, comp: Composition, dt: float) -> Composition:
        """Decay through the cache: follow known edges, compute only the tail."""
        if dt < 0:
            raise CompositionError(f"negative decay interval {dt!r}")
        if dt == 0:
            return comp
        hit = comp.decay_edges.get(dt)
        if hit is not None:
            return hit
        cur, remaining = comp, dt
        while remaining > 0:
            usable = [d for d in cur.decay_edges if d <= remaining + 1e-12]
            if not usable:
                break
            step = max(usable)
            cur = cur.decay_edges[step]
            remaining -= step
            if abs(remaining) <= 1e-12:
                remaining = 0
        if remaining > 0:
            nxt = self.intern(self.solver.decay(cur.fractions, remaining), strict=False)
            self.decay_computations += 1
            cur.decay_edges.setdefault(remaining, nxt)
            cur = nxt
        if cur is not comp:
            comp.decay_edges.setdefault(dt, cur)
        return cur
