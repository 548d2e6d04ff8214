"""Fuel fabrication blending a fissile stream into a filler stream.

The blend fraction ``f`` of fissile material equalizes a linear
fissile-equivalence worth ``W(x) = sum_n w_n x_n``:

    f W(fissile) + (1 - f) W(filler) = W(target)
"""

from __future__ import annotations

import math

from fck.archetypes.buffer import QTY_TOL, MaterialBuffer
from fck.exchange.types import BidPortfolio, RequestPortfolio
from fck.kernel.agents import Facility
from fck.kernel.registry import archetype
from fck.resources.compositions import Composition
from fck.resources.nuclides import nucid
from fck.scenario.schema import Field

DEFAULT_WEIGHTS = {nucid("Pu239"): 1.0, nucid("Pu241"): 1.0, nucid("U235"): 1.0}

WEIGHT = (
    Field("nuclide", "nuclide"),
    Field("weight", "float"),
)


def worth(comp: Composition, weights) -> float:
    return math.fsum(w * comp[n] for n, w in weights.items())


def blend_fraction(fissile: Composition, filler: Composition, target: Composition,
                   weights=None) -> float | None:
    """Mass fraction of fissile stream in the blend, or None if unattainable."""
    weights = DEFAULT_WEIGHTS if weights is None else weights
    w_fiss, w_fill, w_target = (worth(c, weights) for c in (fissile, filler, target))
    span = w_fiss - w_fill
    if abs(span) <= 1e-15:
        return 0.0 if abs(w_target - w_fill) <= 1e-15 else None
    f = (w_target - w_fill) / span
    if -1e-12 <= f < 0:
        f = 0.0
    elif 1 < f <= 1 + 1e-12:
        f = 1.0
    if not 0.0 <= f <= 1.0:
        return None
    return f


@archetype
class FuelFab(Facility):
    archetype = "FuelFab"
    schema = (
        Field("fill_commod", "commodity"),
        Field("fill_recipe", "recipe"),
        Field("fill_size", "float", None, units="mass", min=0.0,
              doc="filler stock kept on hand; defaults to one batch"),
        Field("fill_preference", "float", 1.0),
        Field("fiss_commod", "commodity"),
        Field("fiss_size", "float", math.inf, units="mass", min=0.0),
        Field("fiss_preference", "float", 1.0),
        Field("outcommod", "commodity"),
        Field("target_recipe", "recipe"),
        Field("batch_size", "float", 20000.0, units="mass", min=0.0),
        Field("weights", "nested", (), many=True, fields=WEIGHT,
              doc="fissile worth per nuclide; defaults to 1 for U235, Pu239, Pu241"),
    )

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        cfg = self.config
        self.batch_size = cfg["batch_size"]
        self.fill_recipe = sim.recipe(cfg["fill_recipe"])
        self.target = sim.recipe(cfg["target_recipe"])
        fill_size = cfg["fill_size"] if cfg["fill_size"] is not None else self.batch_size
        self.fill = MaterialBuffer(fill_size)
        self.fiss = MaterialBuffer(cfg["fiss_size"])
        self.weights = ({w["nuclide"]: w["weight"] for w in cfg["weights"]}
                        if cfg["weights"] else DEFAULT_WEIGHTS)
        self.produced = 0

    def inventory(self):
        return [*self.fiss, *self.fill]

    def get_requests(self):
        ports = []
        for buf, commod, pref, target in (
                (self.fill, "fill_commod", "fill_preference", self.fill_recipe),
                (self.fiss, "fiss_commod", "fiss_preference", None)):
            room = buf.space
            if room > QTY_TOL * max(1.0, self.batch_size):
                port = RequestPortfolio(self, quantity=room)
                port.add_request(self.config[commod], room, target=target,
                                 preference=self.config[pref])
                ports.append(port)
        return ports

    def accept(self, trade, resource):
        if trade.request.commodity == self.config["fill_commod"]:
            self.fill.push(resource)
            self.fill.consolidate(self.id)
        else:
            self.fiss.push(resource)
            self.fiss.consolidate(self.id)

    def fraction(self) -> float | None:
        if not self.fiss.items:
            return None
        fill_comp = self.fill.items[0].raw_comp if self.fill.items else self.fill_recipe
        return blend_fraction(self.fiss.items[0].raw_comp, fill_comp, self.target, self.weights)

    def batches_available(self) -> int:
        f = self.fraction()
        if f is None:
            return 0
        need_fiss, need_fill = f * self.batch_size, (1 - f) * self.batch_size
        counts = []
        if need_fiss > 0:
            counts.append(self.fiss.quantity / need_fiss)
        if need_fill > 0:
            counts.append(self.fill.quantity / need_fill)
        return int(math.floor(min(counts) * (1 + 1e-12))) if counts else 0

    def get_bids(self, requests):
        reqs = [r for r in requests.get(self.config["outcommod"], ())
                if r.quantity >= self.batch_size * (1 - QTY_TOL)]
        if not reqs:
            return []
        if self.fiss.items and self.fraction() is None:
            self.sim.diagnostic(self, "blend-unsatisfiable",
                                f"target recipe out of reach of fissile stock "
                                f"{self.fiss.items[0].raw_comp.id}")
            return []
        n = self.batches_available()
        if n < 1:
            return []
        port = BidPortfolio(self)
        for req in reqs:
            port.add_bid(req, self.batch_size, offer=self.target)
        port.add_constraint(n * self.batch_size, label=f"full batches of {self.id}")
        return [port]

    def provide(self, bid, quantity):
        f = self.fraction()
        parts = []
        if f > 0:
            parts.append(self.fiss.pop(f * quantity, self.id))
        if f < 1:
            parts.append(self.fill.pop(quantity - f * quantity, self.id))
        out = parts[0]
        for p in parts[1:]:
            out = out.absorb(p, self.id)
        self.produced += 1
        return out
