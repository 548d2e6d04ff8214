"""Sink: accepts any of several commodities, finitely or without limit."""

from __future__ import annotations

import math

from fck.exchange.types import RequestPortfolio
from fck.kernel.agents import Facility
from fck.kernel.registry import archetype
from fck.scenario.schema import Field


@archetype
class Sink(Facility):
    is_sink = True
    schema = (
        Field("in_commods", "commodity", many=True),
        Field("capacity", "float", math.inf, units="mass", min=0.0,
              doc="most material accepted per month"),
        Field("max_inv_size", "float", math.inf, units="mass", min=0.0),
        Field("preference", "float", 1.0),
    )

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        self.in_commods = self.config["in_commods"]
        self.capacity = self.config["capacity"]
        self.max_inv_size = self.config["max_inv_size"]
        self.preference = self.config["preference"]
        self.stock: list = []
        self.held = 0.0

    def inventory(self):
        return self.stock

    def get_requests(self):
        room = min(self.capacity, self.max_inv_size - self.held)
        if not room > 0 or not self.in_commods:
            return []
        port = RequestPortfolio(self, quantity=room)
        for commod in self.in_commods:
            port.add_request(commod, room, preference=self.preference)
        return [port]

    def accept(self, trade, resource):
        self.stock.append(resource)
        self.held += resource.quantity
