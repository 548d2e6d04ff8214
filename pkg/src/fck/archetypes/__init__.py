"""Reference archetype library, registered on import."""

from fck.archetypes.enrichment import Enrichment
from fck.archetypes.fab import FuelFab, blend_fraction
from fck.archetypes.institutions import DeployInst, ManagerInst, NullInst
from fck.archetypes.reactor import Reactor
from fck.archetypes.regions import GrowthRegion, NullRegion
from fck.archetypes.separations import Separations
from fck.archetypes.sink import Sink
from fck.archetypes.source import Source

__all__ = [
    "DeployInst", "Enrichment", "FuelFab", "GrowthRegion", "ManagerInst", "NullInst",
    "NullRegion", "Reactor", "Separations", "Sink", "Source", "blend_fraction",
]
