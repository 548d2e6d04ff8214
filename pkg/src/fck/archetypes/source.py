"""Source: makes material of a fixed recipe on demand."""

from __future__ import annotations

import math

from fck.exchange.types import BidPortfolio
from fck.kernel.agents import Facility
from fck.kernel.registry import archetype
from fck.scenario.schema import Field


@archetype
class Source(Facility):
    schema = (
        Field("outcommod", "commodity", doc="commodity offered"),
        Field("outrecipe", "recipe", doc="composition of everything produced"),
        Field("capacity", "float", math.inf, units="mass", min=0.0,
              doc="most material offered per month"),
    )

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        self.outcommod = self.config["outcommod"]
        self.capacity = self.config["capacity"]
        self.recipe = sim.recipe(self.config["outrecipe"])

    def get_bids(self, requests):
        if self.capacity <= 0:
            return []
        port = BidPortfolio(self)
        for req in requests.get(self.outcommod, ()):
            qty = min(req.quantity, self.capacity)
            if req.requester is self or math.isinf(qty):
                continue
            port.add_bid(req, qty, offer=self.recipe)
        if not port.bids:
            return []
        if math.isfinite(self.capacity):
            port.add_constraint(self.capacity, label=f"capacity of {self.id}")
        return [port]

    def provide(self, bid, quantity):
        return self.sim.tracker.create_material(self.id, quantity, self.recipe)
