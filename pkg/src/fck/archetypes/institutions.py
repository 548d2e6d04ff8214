"""Reference institutions: fixed deployment plans and demand-driven building."""

from __future__ import annotations

from fck.kernel.agents import Institution
from fck.kernel.registry import archetype
from fck.scenario.schema import Field
from fck.toolkit.building import BuildOption, BuildProblem, solve_build

BUILD = (
    Field("prototype", "prototype"),
    Field("time", "int", min=0),
    Field("number", "int", 1, min=1),
    Field("lifetime", "int", None, units="time", min=1),
)

PRODUCER = (
    Field("prototype", "prototype"),
    Field("capacity", "float", min=0.0),
    Field("cost", "float", 1.0, min=0.0),
)


@archetype
class NullInst(Institution):
    pass


@archetype
class DeployInst(Institution):
    """Deploys facilities exactly as listed: prototype, month, count."""

    schema = (Field("build", "nested", (), many=True, fields=BUILD),)

    def on_build_phase(self, step):
        for entry in self.config["build"]:
            if entry["time"] == step:
                for _ in range(entry["number"]):
                    self.sim.deploy(entry["prototype"], self, lifetime=entry["lifetime"])


@archetype
class ManagerInst(Institution):
    """Builds the cheapest mix of producers covering the region's unmet demand."""

    schema = (
        Field("commodity", "commodity", "power"),
        Field("producers", "nested", many=True, fields=PRODUCER),
    )

    def on_build_phase(self, step):
        region = self.parent
        demand_fn = getattr(region, "demand", None)
        if demand_fn is None:
            return
        commodity = self.config["commodity"]
        demand = demand_fn(commodity, step)
        supply = self.sim.commodities.supply(commodity)
        deficit = demand - supply
        if deficit <= 1e-9 * max(1.0, abs(demand)):
            return
        producers = self.config["producers"]
        problem = BuildProblem(
            tuple(BuildOption(p["prototype"], p["capacity"], p["cost"]) for p in producers),
            deficit)
        plan = solve_build(problem)
        for spec, count in zip(producers, plan):
            for _ in range(count):
                agent = self.sim.deploy(spec["prototype"], self)
                self.sim.commodities.register(agent.id, commodity, spec["capacity"])
        if any(plan):
            self.sim.diagnostic(self, "build",
                                f"deficit {deficit!r} {commodity}: built {list(plan)}")
