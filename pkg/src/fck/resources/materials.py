"""Discrete resources: materials, products, and the tracker that numbers them.

Every state change of a resource (creation, split, absorb, decay,
transmutation, extraction) gets a fresh ``resource_id`` whose parents point
at the state(s) it came from. The Python object an agent holds may survive
a state change (decay and transmutation update in place), but ids are never
reused, so the parent links form an acyclic provenance graph.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Mapping

from fck.resources.compositions import Composition, CompositionTable
from fck.resources.decay import EPSILON
from fck.resources.nuclides import DecayTable, default_table

QTY_TOL = 1e-9


class DecayMode(enum.Enum):
    MANUAL = "manual"
    NEVER = "never"
    LAZY = "lazy"


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class ResourceEvent:
    """One provenance row: a resource state and where it came from."""

    resource_id: int
    time: int
    op: str
    kind: str  # "Material" | "Product"
    quantity: float
    comp_id: int | None
    quality: str
    parents: tuple[int, ...]
    creator: int | None


class ResourceTracker:
    """Owns resource ids, the composition table and provenance for one simulation."""

    def __init__(self, decay_table: DecayTable | None = None, *,
                 decay_mode: DecayMode = DecayMode.MANUAL,
                 clock: Callable[[], int] = lambda: 0,
                 on_event: Callable[[ResourceEvent], None] | None = None,
                 on_composition: Callable[[Composition], None] | None = None,
                 on_warning: Callable[[str], None] | None = None):
        self.decay_table = decay_table if decay_table is not None else default_table()
        self.comps = CompositionTable(self.decay_table, on_new=on_composition, on_warning=on_warning)
        self.decay_mode = decay_mode
        self.clock = clock
        self.on_event = on_event
        self._next_id = 0
        self.parents: dict[int, tuple[int, ...]] = {}
        self.creators: dict[int, int | None] = {}
        self.created_mass = 0.0  # kg introduced by create_material
        self.created_qty: dict[str, float] = {}  # product units by quality

    def _new_id(self) -> int:
        rid = self._next_id
        self._next_id += 1
        return rid

    def _emit(self, rid: int, op: str, res: "Resource", parents: tuple[int, ...],
              creator: int | None) -> None:
        self.parents[rid] = parents
        self.creators[rid] = creator
        if self.on_event is not None:
            comp_id = res._comp.id if isinstance(res, Material) else None
            quality = res.quality if isinstance(res, Product) else ""
            self.on_event(ResourceEvent(rid, self.clock(), op, res.kind, res.quantity,
                                        comp_id, quality, parents, creator))

    def create_material(self, creator: int | None, qty: float,
                        comp: Composition | Mapping, at: int | None = None) -> "Material":
        """New material from nothing; the only way mass enters a simulation."""
        qty = float(qty)
        if not math.isfinite(qty) or qty < 0:
            raise ResourceError(f"invalid material quantity {qty!r}")
        if not isinstance(comp, Composition):
            comp = self.comps.intern(comp)
        t = self.clock() if at is None else at
        mat = Material(self, self._new_id(), qty, comp, t, creator)
        self.created_mass += qty
        self._emit(mat.resource_id, "create", mat, (), creator)
        return mat

    def create_product(self, creator: int | None, qty: float, quality: str) -> "Product":
        qty = float(qty)
        if not math.isfinite(qty) or qty < 0:
            raise ResourceError(f"invalid product quantity {qty!r}")
        prod = Product(self, self._new_id(), qty, quality, creator)
        self.created_qty[quality] = self.created_qty.get(quality, 0.0) + qty
        self._emit(prod.resource_id, "create", prod, (), creator)
        return prod

    def ancestors(self, rid: int) -> set[int]:
        seen: set[int] = set()
        stack = list(self.parents.get(rid, ()))
        while stack:
            r = stack.pop()
            if r in seen:
                continue
            seen.add(r)
            stack.extend(self.parents.get(r, ()))
        return seen


class Resource:
    kind = "Resource"

    def __init__(self, tracker: ResourceTracker, rid: int, qty: float, creator: int | None):
        self.tracker = tracker
        self.resource_id = rid
        self.quantity = qty
        self.creator = creator
        self.alive = True

    @property
    def parents(self) -> tuple[int, ...]:
        return self.tracker.parents.get(self.resource_id, ())

    def _check_alive(self) -> None:
        if not self.alive:
            raise ResourceError(f"{self.kind} {self.resource_id} has been retired")

    def _retire(self) -> None:
        self.alive = False


class Material(Resource):
    kind = "Material"

    def __init__(self, tracker: ResourceTracker, rid: int, qty: float, comp: Composition,
                 last_decay: int, creator: int | None):
        super().__init__(tracker, rid, qty, creator)
        self._comp = comp
        self.last_decay = last_decay

    def __repr__(self) -> str:
        return f"Material(id={self.resource_id}, qty={self.quantity!r}, comp={self._comp.id})"

    @property
    def comp(self) -> Composition:
        """Current composition; in lazy mode, observing it decays to now."""
        if self.tracker.decay_mode is DecayMode.LAZY and self.alive:
            now = self.tracker.clock()
            if now > self.last_decay:
                self.decay(now)
        return self._comp

    @property
    def raw_comp(self) -> Composition:
        """Composition as stored, without triggering lazy decay."""
        return self._comp

    def split(self, qty: float, actor: int | None = None) -> tuple["Material", "Material"]:
        """Retire this material, returning ``(qty, remainder)`` children."""
        self._check_alive()
        qty = float(qty)
        if not 0 <= qty <= self.quantity:
            if qty > self.quantity and qty - self.quantity <= QTY_TOL * max(1.0, self.quantity):
                qty = self.quantity
            else:
                raise ResourceError(f"cannot split {qty!r} from {self.quantity!r}")
        tr = self.tracker
        actor = self.creator if actor is None else actor
        rest_qty = self.quantity - qty
        first = Material(tr, tr._new_id(), qty, self._comp, self.last_decay, actor)
        tr._emit(first.resource_id, "split", first, (self.resource_id,), actor)
        rest = Material(tr, tr._new_id(), rest_qty, self._comp, self.last_decay, actor)
        tr._emit(rest.resource_id, "split", rest, (self.resource_id,), actor)
        self._retire()
        return first, rest

    def absorb(self, other: "Material", actor: int | None = None) -> "Material":
        """Retire both materials, returning their mass-weighted mixture."""
        self._check_alive()
        other._check_alive()
        if other is self:
            raise ResourceError("a material cannot absorb itself")
        tr = self.tracker
        actor = self.creator if actor is None else actor
        qty = self.quantity + other.quantity
        if other.quantity <= 0:
            comp = self._comp
        elif self.quantity <= 0:
            comp = other._comp
        elif other._comp is self._comp:
            comp = self._comp
        else:
            comp = tr.comps.mix([(self._comp, self.quantity), (other._comp, other.quantity)])
        child = Material(tr, tr._new_id(), qty, comp, max(self.last_decay, other.last_decay), actor)
        tr._emit(child.resource_id, "absorb", child,
                 (self.resource_id, other.resource_id), actor)
        self._retire()
        other._retire()
        return child

    def extract(self, masses: Mapping[int, float], actor: int | None = None
                ) -> tuple["Material", "Material"]:
        """Pull given nuclide masses (kg) out, returning ``(extracted, remainder)``.

        This is how separations builds streams: both children are parented to
        this material and their masses sum to its mass.
        """
        self._check_alive()
        tr = self.tracker
        actor = self.creator if actor is None else actor
        have = {n: f * self.quantity for n, f in self._comp.fractions.items()}
        taken: dict[int, float] = {}
        for n, m in masses.items():
            if m < 0 or m > have.get(n, 0.0) * (1 + 1e-12) + 1e-15:
                raise ResourceError(f"cannot extract {m!r} kg of {n}")
            if m > 0:
                taken[n] = min(m, have[n])
        take_qty = math.fsum(taken.values())
        left = {n: have[n] - taken.get(n, 0.0) for n in have}
        left = {n: v for n, v in left.items() if v > 0}
        rest_qty = self.quantity - take_qty
        if take_qty > 0:
            out_comp = tr.comps.intern({n: v / take_qty for n, v in taken.items()}, strict=False)
        else:
            out_comp = self._comp
        if left and rest_qty > 0:
            rest_comp = tr.comps.intern({n: v / sum(left.values()) for n, v in left.items()},
                                        strict=False)
        else:
            rest_comp = self._comp
            rest_qty = max(rest_qty, 0.0)
        out = Material(tr, tr._new_id(), take_qty, out_comp, self.last_decay, actor)
        tr._emit(out.resource_id, "extract", out, (self.resource_id,), actor)
        rest = Material(tr, tr._new_id(), rest_qty, rest_comp, self.last_decay, actor)
        tr._emit(rest.resource_id, "extract", rest, (self.resource_id,), actor)
        self._retire()
        return out, rest

    def transmute(self, comp: Composition | Mapping, actor: int | None = None) -> "Material":
        """Replace the composition in place (mass kept), as a reactor does on discharge."""
        self._check_alive()
        tr = self.tracker
        if not isinstance(comp, Composition):
            comp = tr.comps.intern(comp)
        parent = self.resource_id
        self._comp = comp
        self.resource_id = tr._new_id()
        actor = self.creator if actor is None else actor
        self.creator = actor
        self.last_decay = tr.clock()
        tr._emit(self.resource_id, "transmute", self, (parent,), actor)
        return self

    def decay(self, to: int | None = None) -> "Material":
        """Decay in place up to month ``to`` (default: now).

        Sub-threshold intervals leave ``last_decay`` untouched, so the skipped
        time is picked up by the next call.
        """
        self._check_alive()
        tr = self.tracker
        to = tr.clock() if to is None else to
        if to < self.last_decay:
            raise ResourceError(f"cannot decay back to {to} from {self.last_decay}")
        if tr.decay_mode is DecayMode.NEVER:
            return self
        dt = to - self.last_decay
        if dt == 0 or not tr.comps.solver.is_significant(self._comp.fractions, dt):
            return self
        new = tr.comps.decay(self._comp, dt)
        self.last_decay = to
        if new is self._comp:
            return self
        parent = self.resource_id
        self._comp = new
        self.resource_id = tr._new_id()
        tr._emit(self.resource_id, "decay", self, (parent,), self.creator)
        return self

    def mass(self, nuc: int) -> float:
        return self.quantity * self.comp[nuc]


class Product(Resource):
    """A generic, composition-free resource measured in user units."""

    kind = "Product"

    def __init__(self, tracker: ResourceTracker, rid: int, qty: float, quality: str,
                 creator: int | None):
        super().__init__(tracker, rid, qty, creator)
        self.quality = quality

    def __repr__(self) -> str:
        return f"Product(id={self.resource_id}, qty={self.quantity!r}, quality={self.quality!r})"

    def split(self, qty: float, actor: int | None = None) -> tuple["Product", "Product"]:
        self._check_alive()
        if not 0 <= qty <= self.quantity:
            raise ResourceError(f"cannot split {qty!r} from {self.quantity!r}")
        tr = self.tracker
        actor = self.creator if actor is None else actor
        first = Product(tr, tr._new_id(), float(qty), self.quality, actor)
        tr._emit(first.resource_id, "split", first, (self.resource_id,), actor)
        rest = Product(tr, tr._new_id(), self.quantity - qty, self.quality, actor)
        tr._emit(rest.resource_id, "split", rest, (self.resource_id,), actor)
        self._retire()
        return first, rest

    def absorb(self, other: "Product", actor: int | None = None) -> "Product":
        self._check_alive()
        other._check_alive()
        if other.quality != self.quality:
            raise ResourceError(f"cannot absorb {other.quality!r} into {self.quality!r}")
        tr = self.tracker
        actor = self.creator if actor is None else actor
        child = Product(tr, tr._new_id(), self.quantity + other.quantity, self.quality, actor)
        tr._emit(child.resource_id, "absorb", child, (self.resource_id, other.resource_id), actor)
        self._retire()
        other._retire()
        return child


def split(m: Material, qty: float) -> tuple[Material, Material]:
    return m.split(qty)


def absorb(a: Material, b: Material) -> Material:
    return a.absorb(b)


__all__ = [
    "DecayMode", "EPSILON", "Material", "Product", "Resource", "ResourceError",
    "ResourceEvent", "ResourceTracker", "absorb", "split",
]
