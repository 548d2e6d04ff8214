from fck.kernel.agents import Agent, Facility, Institution, Prototype, Region
from fck.kernel.registry import ARCHETYPES, ArchetypeError, archetype, lookup
from fck.kernel.simulation import (
    PHASES, KernelError, MassBalance, PrototypeError, RifError, SimClock, Simulation,
    SimulationError,
)

__all__ = [
    "ARCHETYPES", "Agent", "ArchetypeError", "Facility", "Institution", "KernelError",
    "MassBalance", "PHASES", "Prototype", "PrototypeError", "Region", "RifError", "SimClock",
    "Simulation", "SimulationError", "archetype", "lookup",
]
