"""FIFO material store used by the reference archetypes."""

from __future__ import annotations

import math
from typing import Iterator

from fck.resources.materials import Material

QTY_TOL = 1e-9


class MaterialBuffer:
    def __init__(self, capacity: float = math.inf):
        self.capacity = capacity
        self.items: list[Material] = []

    def __iter__(self) -> Iterator[Material]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return self.quantity > QTY_TOL

    @property
    def quantity(self) -> float:
        return math.fsum(m.quantity for m in self.items)

    @property
    def space(self) -> float:
        return max(self.capacity - self.quantity, 0.0)

    def push(self, mat: Material) -> None:
        if mat.quantity > 0:
            self.items.append(mat)

    def consolidate(self, actor: int) -> Material | None:
        """Merge everything into one material (one row per merge)."""
        if not self.items:
            return None
        merged = self.items[0]
        for other in self.items[1:]:
            merged = merged.absorb(other, actor)
        self.items = [merged]
        return merged

    def pop(self, qty: float, actor: int) -> Material:
        """Remove ``qty`` kg, oldest first, as a single material."""
        have = self.quantity
        if not qty > 0 or qty > have + QTY_TOL * max(1.0, have):
            raise ValueError(f"cannot take {qty!r} kg from a buffer holding {have!r} kg")
        pieces: list[Material] = []
        need = qty
        while need > 0 and self.items:
            head = self.items[0]
            if head.quantity <= need:
                pieces.append(self.items.pop(0))
                need -= head.quantity
            else:
                take, rest = head.split(need, actor)
                pieces.append(take)
                self.items[0] = rest
                need = 0.0
        out = pieces[0]
        for p in pieces[1:]:
            out = out.absorb(p, actor)
        return out

    def pop_all(self) -> list[Material]:
        items, self.items = self.items, []
        return items
