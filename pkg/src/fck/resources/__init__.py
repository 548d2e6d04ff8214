from fck.resources.compositions import Composition, CompositionError, CompositionTable
from fck.resources.decay import EPSILON, ChainSolver, DecayError
from fck.resources.materials import (
    DecayMode, Material, Product, Resource, ResourceError, ResourceEvent, ResourceTracker,
    absorb, split,
)
from fck.resources.matquery import MatQuery
from fck.resources.nuclides import DecayTable, NuclideData, alias, default_table, nucid, znum

__all__ = [
    "ChainSolver", "Composition", "CompositionError", "CompositionTable", "DecayError",
    "DecayMode", "DecayTable", "EPSILON", "MatQuery", "Material", "NuclideData", "Product",
    "Resource", "ResourceError", "ResourceEvent", "ResourceTracker", "absorb", "alias",
    "default_table", "nucid", "split", "znum",
]
