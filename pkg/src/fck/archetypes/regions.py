"""Reference regions."""

from __future__ import annotations

from fck.kernel.agents import Region
from fck.kernel.registry import archetype
from fck.scenario.schema import Field
from fck.toolkit.symbolic import make_function, piecewise

PIECE = (
    Field("commodity", "commodity"),
    Field("start", "int", 0, min=0),
    Field("type", "str", "linear", choices=("linear", "exponential")),
    Field("params", "float", many=True),
)


@archetype
class NullRegion(Region):
    pass


@archetype
class GrowthRegion(Region):
    """Publishes a demand curve per commodity built from symbolic pieces."""

    schema = (Field("growth", "nested", many=True, fields=PIECE),)

    def __init__(self, sim, prototype):
        super().__init__(sim, prototype)
        pieces: dict[str, list] = {}
        for p in self.config["growth"]:
            pieces.setdefault(p["commodity"], []).append(
                (p["start"], make_function(p["type"], p["params"])))
        self.functions = {c: piecewise(ps) for c, ps in pieces.items()}

    def demand(self, commodity: str, step: int) -> float:
        fn = self.functions.get(commodity)
        return 0.0 if fn is None else fn(step)
