"""Turn a validated scenario document into a ready-to-run simulation."""

from __future__ import annotations

import os

from fck.kernel.simulation import Simulation
from fck.resources.nuclides import DecayTable
from fck.scenario.document import ScenarioDoc


def build_simulation(doc: ScenarioDoc, outdir: str | os.PathLike | None = None,
                     decay_table: DecayTable | None = None) -> Simulation:
    ctl = doc.control
    sim = Simulation(ctl["duration"], seed=ctl["seed"], decay_mode=ctl["decay"],
                     solver=ctl["solver"], outdir=outdir, decay_table=decay_table)
    for recipe in doc.recipes:
        sim.add_recipe(recipe.name, recipe.fractions, recipe.basis)
    for proto in doc.prototypes:
        sim.register_prototype(proto.name, proto.archetype, proto.config, proto.lifetime)
    for region in doc.regions:
        sim.register_prototype(region.name, region.archetype, region.config, region.lifetime)
        for inst in region.institutions:
            sim.register_prototype(inst.name, inst.archetype, inst.config, inst.lifetime)
    for region in doc.regions:
        reg = sim.deploy(region.name)
        for inst in region.institutions:
            ins = sim.deploy(inst.name, reg)
            for proto, count in inst.initial:
                for _ in range(count):
                    sim.deploy(proto, ins)
    return sim


def run_scenario(doc: ScenarioDoc, outdir: str | os.PathLike | None = None,
                 decay_table: DecayTable | None = None) -> Simulation:
    sim = build_simulation(doc, outdir, decay_table)
    sim.run()
    return sim
