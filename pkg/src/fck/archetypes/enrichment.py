"""Enrichment: turns natural uranium into enriched product under a SWU limit."""

from __future__ import annotations

import math

from fck.archetypes.buffer import QTY_TOL, MaterialBuffer
from fck.exchange.types import BidPortfolio, RequestPortfolio
from fck.kernel.agents import Facility
from fck.kernel.registry import archetype
from fck.resources.nuclides import nucid
from fck.scenario.schema import Field
from fck.toolkit.enrichment import AssayError, EnrichSpec, feed_per_product, swu_per_product

U235 = nucid("U235")
U238 = nucid("U238")


@archetype
class Enrichment(Facility):
    schema = (
        Field("feed_commod", "commodity"),
        Field("feed_recipe", "recipe"),
        Field("product_commod", "commodity"),
        Field("tails_commod", "commodity", None),
        Field("tails_assay", "float", 0.0025, min=0.0, max=1.0),
        Field("swu_capacity", "float", math.inf, min=0.0, doc="kg-SWU per month"),
        Field("max_feed_inventory", "float", 1.0e5, units="mass", min=0.0),
    )

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        cfg = self.config
        self.feed_recipe = sim.recipe(cfg["feed_recipe"])
        self.tails_assay = cfg["tails_assay"]
        self.swu_capacity = cfg["swu_capacity"]
        self.feed = MaterialBuffer(cfg["max_feed_inventory"])
        self.tails = MaterialBuffer()
        self.swu_used: dict[int, float] = {}

    def inventory(self):
        return [*self.feed, *self.tails]

    def _spec(self, product) -> EnrichSpec | None:
        if product is None:
            return None
        feed_assay = self.feed.items[0].raw_comp[U235] if self.feed.items else self.feed_recipe[U235]
        try:
            return EnrichSpec(feed_assay, product[U235], self.tails_assay)
        except AssayError:
            return None

    def get_requests(self):
        room = self.feed.space
        if room <= QTY_TOL or math.isinf(room):
            return []
        port = RequestPortfolio(self, quantity=room)
        port.add_request(self.config["feed_commod"], room, target=self.feed_recipe)
        return [port]

    def accept(self, trade, resource):
        self.feed.push(resource)
        self.feed.consolidate(self.id)

    def get_bids(self, requests):
        have = self.feed.quantity
        reqs = requests.get(self.config["product_commod"], ())
        ports = []
        if have > QTY_TOL and reqs:
            port = BidPortfolio(self)
            for req in reqs:
                spec = self._spec(req.target)
                if spec is None:
                    continue
                qty = min(req.quantity, have / feed_per_product(spec))
                if qty > QTY_TOL and math.isfinite(qty):
                    port.add_bid(req, qty, offer=spec)
            if port.bids:
                port.add_constraint(self.swu_capacity, lambda b: swu_per_product(b.offer), "swu")
                port.add_constraint(have, lambda b: feed_per_product(b.offer), "feed")
                ports.append(port)
        tails_commod = self.config["tails_commod"]
        if tails_commod and self.tails and requests.get(tails_commod):
            port = BidPortfolio(self)
            stock = self.tails.quantity
            for req in requests[tails_commod]:
                port.add_bid(req, min(stock, req.quantity), offer=self.tails)
            port.add_constraint(stock)
            ports.append(port)
        return ports

    def provide(self, bid, quantity):
        if bid.offer is self.tails:
            return self.tails.pop(quantity, self.id)
        spec: EnrichSpec = bid.offer
        feed_qty = min(quantity * feed_per_product(spec), self.feed.quantity)
        feed = self.feed.pop(feed_qty, self.id)
        take = {U235: spec.product * quantity, U238: (1 - spec.product) * quantity}
        product, tails = feed.extract(take, self.id)
        self.tails.push(tails)
        self.tails.consolidate(self.id)
        step = self.step
        self.swu_used[step] = self.swu_used.get(step, 0.0) + quantity * swu_per_product(spec)
        return product
