"""Agent base classes for the Region / Institution / Facility hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, ClassVar, Iterable

if TYPE_CHECKING:
    from fck.scenario.schema import Field
    from fck.exchange.types import Bid, BidPortfolio, Request, RequestPortfolio, Trade
    from fck.kernel.simulation import Simulation
    from fck.resources.materials import Resource


@dataclass
class Prototype:
    name: str
    archetype: type["Agent"]
    config: dict[str, Any] = field(default_factory=dict)
    lifetime: int | None = None


class Agent:
    """Common lifecycle of every agent.

    Subclasses read their validated settings from ``self.config`` in
    ``__init__`` and override the phase hooks they need.
    """

    kind: ClassVar[str] = "Agent"
    archetype: ClassVar[str] = ""
    schema: ClassVar[tuple[Field, ...]] = ()
    is_sink: ClassVar[bool] = False

    def __init__(self, sim: "Simulation", prototype: Prototype):
        self.sim = sim
        self.prototype = prototype.name
        self.config = prototype.config
        self.lifetime = prototype.lifetime
        self.id = -1
        self.parent: Agent | None = None
        self.children: list[Agent] = []
        self.enter_time: int | None = None
        self.exit_time: int | None = None
        self.alive = False
        self.retiring = False

    def __repr__(self) -> str:
        return f"{type(self).__name__}(id={self.id}, prototype={self.prototype!r})"

    @property
    def last_step(self) -> int | None:
        """Final step the agent is active in, or None when it lives forever."""
        if self.lifetime is None or self.enter_time is None:
            return None
        return self.enter_time + self.lifetime - 1

    @property
    def step(self) -> int:
        return self.sim.clock.step

    # lifecycle hooks
    def on_enter(self) -> None:
        pass

    def tick(self) -> None:
        pass

    def tock(self) -> None:
        pass

    def pre_exit(self) -> None:
        """Move or dispose of held inventory before the agent leaves."""

    def inventory(self) -> Iterable["Resource"]:
        return ()

    # preference adjustment, used by institutions and regions
    def adjust_preference(self, request: "Request", bid: "Bid", pref: float) -> float:
        return pref


class Region(Agent):
    kind = "Region"

    def on_build_phase(self, step: int) -> None:
        pass


class Institution(Agent):
    kind = "Institution"

    def on_build_phase(self, step: int) -> None:
        pass

    @property
    def facilities(self) -> list["Facility"]:
        return [c for c in self.children if c.alive]


class Facility(Agent):
    kind = "Facility"

    def get_requests(self) -> list["RequestPortfolio"]:
        return []

    def get_bids(self, requests: dict[str, list["Request"]]) -> list["BidPortfolio"]:
        return []

    def provide(self, bid: "Bid", quantity: float) -> "Resource":
        raise NotImplementedError(f"{type(self).__name__} does not supply resources")

    def accept(self, trade: "Trade", resource: "Resource") -> None:
        raise NotImplementedError(f"{type(self).__name__} does not accept resources")
