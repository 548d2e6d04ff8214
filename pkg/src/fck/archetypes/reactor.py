"""Batch reactor with recipe-based burnup.

Each cycle the oldest batch is discharged: its composition is replaced by
the spent recipe of the fuel block it was loaded under, and it is offered
under that block's output commodity. A new batch is requested during the
refuel window; without fuel the reactor idles and keeps requesting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from fck.archetypes.buffer import QTY_TOL
from fck.exchange.types import BidPortfolio, RequestPortfolio
from fck.kernel.agents import Facility
from fck.kernel.registry import archetype
from fck.resources.materials import Material
from fck.scenario.schema import Field

FUEL = (
    Field("incommodity", "commodity"),
    Field("inrecipe", "recipe"),
    Field("outcommodity", "commodity"),
    Field("outrecipe", "recipe"),
    Field("preference", "float", 1.0),
)


@dataclass
class Batch:
    material: Material
    block: int


@dataclass
class SpentBatch:
    material: Material
    commodity: str


@dataclass
class PendingBatch:
    pieces: list[tuple[Material, int]] = field(default_factory=list)
    loaded: bool = False

    @property
    def quantity(self) -> float:
        return math.fsum(m.quantity for m, _ in self.pieces)


@archetype
class Reactor(Facility):
    schema = (
        Field("fuel", "nested", many=True, fields=FUEL,
              doc="accepted fuel types, each with its own spent-fuel route"),
        Field("n_batches", "int", 3, min=1),
        Field("batch_size", "float", 20000.0, units="mass", min=0.0),
        Field("cycle_time", "int", 18, units="time", min=1),
        Field("refuel_time", "int", 2, units="time", min=0),
        Field("power_cap", "float", 0.0, units="power", min=0.0),
        Field("power_commod", "commodity", "power"),
    )

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        cfg = self.config
        self.fuel = cfg["fuel"]
        self.n_batches = cfg["n_batches"]
        self.batch_size = cfg["batch_size"]
        self.cycle_time = cfg["cycle_time"]
        self.refuel_time = cfg["refuel_time"]
        self.power_cap = cfg["power_cap"]
        self.in_recipes = [sim.recipe(b["inrecipe"]) for b in self.fuel]
        self.out_recipes = [sim.recipe(b["outrecipe"]) for b in self.fuel]
        self.core: list[Batch] = []
        self.pending: list[PendingBatch] = []
        self.spent: list[SpentBatch] = []
        self.cycle_step = 0
        self.refueling = False
        self.refuel_step = 0
        self.discharges: list[int] = []  # months of each discharge
        self._slots: dict[int, tuple[int, int]] = {}  # id(request) -> (pending index, block)

    def on_enter(self):
        if self.power_cap > 0:
            self.sim.commodities.register(self.id, self.config["power_commod"], self.power_cap)

    def inventory(self):
        out = [b.material for b in self.core]
        out += [m for p in self.pending for m, _ in p.pieces]
        out += [s.material for s in self.spent]
        return out

    @property
    def core_full(self) -> bool:
        return len(self.core) >= self.n_batches

    def _discharge(self, batch: Batch) -> None:
        block = self.fuel[batch.block]
        mat = batch.material.transmute(self.out_recipes[batch.block], self.id)
        self.spent.append(SpentBatch(mat, block["outcommodity"]))

    def tick(self):
        if self.retiring:
            return
        if self.last_step == self.step:
            self._discharge_all()
            return
        if not self.refueling and self.core_full and self.cycle_step >= self.cycle_time:
            self._discharge(self.core.pop(0))
            self.discharges.append(self.step)
            self.refueling = True
            self.refuel_step = 0

    def _discharge_all(self) -> None:
        if self.core:
            self.discharges.append(self.step)
        while self.core:
            self._discharge(self.core.pop(0))
        for pend in self.pending:
            for mat, block in pend.pieces:
                # fresh fuel that never entered the core leaves unburned
                self.spent.append(SpentBatch(mat, self.fuel[block]["outcommodity"]))
        self.pending = []

    def pre_exit(self):
        self._discharge_all()

    def tock(self):
        if self.retiring or self.last_step == self.step:
            return
        if self.refueling:
            self.refuel_step += 1
            if self.refuel_step >= self.refuel_time and self.core_full:
                self.refueling = False
                self.cycle_step = 0
            self._report_power(0.0)
        elif self.core_full:
            self.cycle_step += 1
            self._report_power(self.power_cap)
        else:
            self._report_power(0.0)

    def _report_power(self, value: float) -> None:
        if self.power_cap > 0:
            self.sim.record_power(self, value)

    # trading
    def get_requests(self):
        self._slots = {}
        self.pending = [p for p in self.pending if not p.loaded]
        if self.retiring or self.last_step == self.step:
            return []
        missing = self.n_batches - len(self.core)
        while len(self.pending) < missing:
            self.pending.append(PendingBatch())
        ports = []
        for idx, pend in enumerate(self.pending[:missing]):
            remaining = self.batch_size - pend.quantity
            if remaining <= QTY_TOL:
                continue
            port = RequestPortfolio(self, quantity=remaining)
            for block, (spec, recipe) in enumerate(zip(self.fuel, self.in_recipes)):
                req = port.add_request(spec["incommodity"], remaining, target=recipe,
                                       preference=spec["preference"])
                self._slots[id(req)] = (idx, block)
            ports.append(port)
        return ports

    def accept(self, trade, resource):
        idx, block = self._slots[id(trade.request)]
        pend = self.pending[idx]
        pend.pieces.append((resource, block))
        if pend.quantity >= self.batch_size * (1 - QTY_TOL):
            self._load(pend)

    def _load(self, pend: PendingBatch) -> None:
        mats = [m for m, _ in pend.pieces]
        by_block: dict[int, float] = {}
        for m, b in pend.pieces:
            by_block[b] = by_block.get(b, 0.0) + m.quantity
        block = max(sorted(by_block), key=lambda b: by_block[b])
        merged = mats[0]
        for m in mats[1:]:
            merged = merged.absorb(m, self.id)
        self.core.append(Batch(merged, block))
        # the slot stays in place until the next request round so that the
        # indices held in ``_slots`` remain valid for the rest of this step
        pend.pieces = []
        pend.loaded = True

    def get_bids(self, requests):
        ports = []
        for entry in self.spent:
            reqs = requests.get(entry.commodity, ())
            if not reqs or entry.material.quantity <= 0:
                continue
            port = BidPortfolio(self)
            for req in reqs:
                port.add_bid(req, min(entry.material.quantity, req.quantity), offer=entry)
            port.add_constraint(entry.material.quantity,
                                label=f"spent batch {entry.material.resource_id}")
            ports.append(port)
        return ports

    def provide(self, bid, quantity):
        entry: SpentBatch = bid.offer
        if quantity >= entry.material.quantity * (1 - 1e-12):
            self.spent.remove(entry)
            return entry.material
        out, rest = entry.material.split(quantity, self.id)
        entry.material = rest
        return out
