"""Separations: splits plutonium out of spent fuel at a fixed efficiency."""

from __future__ import annotations

import math

from fck.archetypes.buffer import QTY_TOL, MaterialBuffer
from fck.exchange.types import BidPortfolio, RequestPortfolio
from fck.kernel.agents import Facility
from fck.kernel.registry import archetype
from fck.resources.materials import Material
from fck.resources.nuclides import znum
from fck.scenario.schema import Field

PU = 94


def stream_masses(mat: Material, efficiency: float, z: int = PU) -> dict[int, float]:
    """Nuclide masses routed to the fissile stream: ``efficiency`` of element ``z``."""
    return {n: efficiency * f * mat.quantity
            for n, f in mat.raw_comp.fractions.items() if znum(n) == z}


@archetype
class Separations(Facility):
    schema = (
        Field("feed_commods", "commodity", many=True),
        Field("feed_commod_prefs", "float", (), many=True,
              doc="one preference per feed commodity; defaults to 1"),
        Field("feedbuf_size", "float", math.inf, units="mass", min=0.0),
        Field("pu_capacity", "float", 6.0e4, units="mass", min=0.0,
              doc="kg of plutonium in feed processed per month"),
        Field("efficiency", "float", 0.99, min=0.0, max=1.0),
        Field("fissile_commod", "commodity"),
        Field("waste_commod", "commodity"),
    )

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        cfg = self.config
        self.feed_commods = cfg["feed_commods"]
        prefs = cfg["feed_commod_prefs"] or [1.0] * len(self.feed_commods)
        if len(prefs) != len(self.feed_commods):
            raise ValueError("feed_commod_prefs must match feed_commods in length")
        self.feed_prefs = prefs
        self.pu_capacity = cfg["pu_capacity"]
        self.efficiency = cfg["efficiency"]
        self.feed = MaterialBuffer(cfg["feedbuf_size"])
        self.fissile = MaterialBuffer()
        self.waste = MaterialBuffer()
        self.processed_pu: list[float] = []  # kg of Pu in feed handled each month

    def inventory(self):
        return [*self.feed, *self.fissile, *self.waste]

    def get_requests(self):
        room = self.feed.space
        if room <= QTY_TOL or not self.feed_commods:
            return []
        port = RequestPortfolio(self, quantity=room)
        for commod, pref in zip(self.feed_commods, self.feed_prefs):
            port.add_request(commod, room, preference=pref)
        return [port]

    def accept(self, trade, resource):
        self.feed.push(resource)

    def tock(self):
        budget = self.pu_capacity
        used = 0.0
        while self.feed.items:
            head = self.feed.items[0]
            pu = head.quantity * head.raw_comp.element_fraction(PU)
            if pu <= budget * (1 + 1e-12):
                self.feed.items.pop(0)
                self._separate(head)
                budget -= pu
                used += pu
                continue
            if budget > 0:
                part_qty = head.quantity * budget / pu
                part, rest = head.split(part_qty, self.id)
                self.feed.items[0] = rest
                self._separate(part)
                used += budget
            break
        self.processed_pu.append(used)

    def _separate(self, mat: Material) -> None:
        out, rest = mat.extract(stream_masses(mat, self.efficiency), self.id)
        if out.quantity > 0:
            self.fissile.push(out)
            self.fissile.consolidate(self.id)
        if rest.quantity > 0:
            self.waste.push(rest)
            self.waste.consolidate(self.id)

    def get_bids(self, requests):
        ports = []
        for buf, commod in ((self.fissile, self.config["fissile_commod"]),
                            (self.waste, self.config["waste_commod"])):
            have = buf.quantity
            reqs = requests.get(commod, ())
            if have <= QTY_TOL or not reqs:
                continue
            port = BidPortfolio(self)
            for req in reqs:
                port.add_bid(req, min(have, req.quantity), offer=buf)
            port.add_constraint(have, label=f"{commod} stock of {self.id}")
            ports.append(port)
        return ports

    def provide(self, bid, quantity):
        return bid.offer.pop(quantity, self.id)
