"""Bookkeeping of which agents can produce which commodity, and how much."""

from __future__ import annotations

from collections import defaultdict


class CommodityProducerManager:
    """Registry of producers and their per-commodity capacities.

    Producers are keyed by agent id; ``alive`` decides whether a registered
    producer still counts toward supply.
    """

    def __init__(self, alive=lambda agent_id: True):
        self._caps: dict[int, dict[str, float]] = defaultdict(dict)
        self._alive = alive

    def register(self, agent_id: int, commodity: str, capacity: float) -> None:
        if capacity < 0:
            raise ValueError(f"negative capacity {capacity!r}")
        self._caps[agent_id][commodity] = float(capacity)

    def unregister(self, agent_id: int) -> None:
        self._caps.pop(agent_id, None)

    def producers(self, commodity: str) -> list[int]:
        return sorted(a for a, caps in self._caps.items()
                      if commodity in caps and self._alive(a))

    def supply(self, commodity: str) -> float:
        return sum(self._caps[a][commodity] for a in self.producers(commodity))


def commodity_supply(manager: CommodityProducerManager, commodity: str) -> float:
    return manager.supply(commodity)
