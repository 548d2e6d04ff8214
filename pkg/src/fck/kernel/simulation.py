"""Simulation time, the agent registry and the per-step phase schedule.

Every step runs Build -> Tick -> Exchange -> Tock -> Decommission. Agents
are visited in id order in every phase, so a run is fully determined by
its inputs and seed.
"""

from __future__ import annotations

import logging
import math
import os
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from fck.exchange.market import ExchangeResult, run_exchange
from fck.exchange.types import Trade
from fck.kernel.agents import Agent, Facility, Institution, Prototype, Region
from fck.kernel.registry import lookup
from fck.resources.compositions import Composition
from fck.resources.materials import DecayMode, Material, ResourceEvent, ResourceTracker
from fck.resources.nuclides import DecayTable, alias
from fck.scenario.recorder import Recorder
from fck.scenario.schema import coerce
from fck.toolkit.commodity import CommodityProducerManager

logger = logging.getLogger(__name__)

PHASES = ("build", "tick", "exchange", "tock", "decommission")
EMPTY_TOL = 1e-9  # kg left in an inventory that still counts as empty
# phases in which agents may enter ("idle" is between two steps)
_BUILD_PHASES = ("init", "idle", "build")


class KernelError(RuntimeError):
    pass


class RifError(KernelError):
    pass


class PrototypeError(KernelError):
    pass


class SimulationError(KernelError):
    """An archetype or exchange failure, with step and agent context."""


@dataclass
class SimClock:
    duration: int
    step: int = 0
    months_per_step: int = 1

    def __post_init__(self):
        if self.duration < 0:
            raise KernelError(f"negative duration {self.duration}")

    @property
    def done(self) -> bool:
        return self.step >= self.duration

    def advance(self) -> None:
        self.step += 1


@dataclass(frozen=True)
class MassBalance:
    step: int
    created: float
    live: float
    sunk: float

    @property
    def residual(self) -> float:
        return self.created - (self.live + self.sunk)


_PARENT_KIND = {"Region": None, "Institution": "Region", "Facility": "Institution"}


class _OfferOnly:
    """Exchange view of a retiring facility: it may hand over stock but not take more."""

    def __init__(self, agent: Facility):
        self.agent = agent
        self.id = agent.id

    def get_requests(self):
        return []

    def get_bids(self, requests):
        return self.agent.get_bids(requests)


class Simulation:
    def __init__(self, duration: int, *, seed: int = 0, decay_mode: str | DecayMode = "manual",
                 solver: str = "greedy", outdir: str | os.PathLike | None = None,
                 decay_table: DecayTable | None = None, recorder: Recorder | None = None):
        self.clock = SimClock(int(duration))
        self.seed = seed
        self.rng = random.Random(seed)
        self.solver = solver
        self.recorder = recorder if recorder is not None else Recorder(outdir)
        mode = decay_mode if isinstance(decay_mode, DecayMode) else DecayMode(decay_mode)
        self.tracker = ResourceTracker(decay_table, decay_mode=mode, clock=lambda: self.clock.step,
                                       on_event=self._on_resource,
                                       on_composition=self._on_composition,
                                       on_warning=lambda msg: self.diagnostic(None, "warning", msg))
        self.comps = self.tracker.comps
        self.recipes: dict[str, Composition] = {}
        self.prototypes: dict[str, Prototype] = {}
        self.agents: dict[int, Agent] = {}  # alive
        self.all_agents: dict[int, Agent] = {}
        self.commodities = CommodityProducerManager(alive=lambda aid: aid in self.agents)
        self.phase = "init"
        self.last_exchange: ExchangeResult | None = None
        self.pu_inventory: list[float] = []
        self.mass_balance: list[MassBalance] = []
        self.trade_count = 0
        self._next_agent = 0
        self._scheduled: dict[int, list[Agent]] = defaultdict(list)
        self._end_of_step: list[Agent] = []
        self._retiring: list[Agent] = []
        self.recorder.add("Info", "duration", self.clock.duration)
        self.recorder.add("Info", "seed", seed)
        self.recorder.add("Info", "decay", mode.value)
        self.recorder.add("Info", "solver", solver)

    # records
    def _on_resource(self, ev: ResourceEvent) -> None:
        p1 = ev.parents[0] if ev.parents else None
        p2 = ev.parents[1] if len(ev.parents) > 1 else None
        self.recorder.add("Resources", ev.resource_id, ev.time, ev.op, ev.kind, ev.quantity,
                          ev.comp_id, ev.quality, p1, p2, ev.creator)

    def _on_composition(self, comp: Composition) -> None:
        for nuc, frac in comp.fractions.items():
            self.recorder.add("Compositions", comp.id, nuc, alias(nuc), frac)

    def diagnostic(self, agent: Agent | None, kind: str, message: str) -> None:
        logger.info("step %s agent %s %s: %s", self.clock.step,
                    None if agent is None else agent.id, kind, message)
        self.recorder.add("Diagnostics", self.clock.step, None if agent is None else agent.id,
                          kind, message)

    def record_power(self, agent: Agent, value: float) -> None:
        self.recorder.add("Power", self.clock.step, agent.id, float(value))

    # definitions
    def add_recipe(self, name: str, fractions: Mapping, basis: str = "mass") -> Composition:
        if name in self.recipes:
            raise KernelError(f"recipe {name!r} already defined")
        if basis == "mass":
            comp = self.comps.intern(fractions)
        elif basis == "atom":
            comp = self.comps.from_atom_fractions(fractions)
        else:
            raise KernelError(f"recipe {name!r}: unknown basis {basis!r}")
        self.recipes[name] = comp
        return comp

    def recipe(self, name: str) -> Composition:
        try:
            return self.recipes[name]
        except KeyError:
            raise KernelError(f"undefined recipe {name!r}") from None

    def register_prototype(self, name: str, archetype: str | type[Agent],
                           config: Mapping[str, Any] | None = None,
                           lifetime: int | None = None) -> Prototype:
        if name in self.prototypes:
            raise PrototypeError(f"prototype {name!r} already registered")
        cls = lookup(archetype) if isinstance(archetype, str) else archetype
        validated = coerce(cls.schema, config or {}, path=f"prototype[{name}]/{cls.archetype}")
        if lifetime is not None and lifetime <= 0:
            raise PrototypeError(f"prototype {name!r}: lifetime must be > 0")
        proto = Prototype(name, cls, validated, lifetime)
        self.prototypes[name] = proto
        return proto

    # lifecycle
    def deploy(self, prototype: str, parent: Agent | int | None = None, at: int | None = None,
               lifetime: int | None = None) -> Agent:
        """Enter a new agent now; only allowed before the run or in a Build phase."""
        if self.phase not in _BUILD_PHASES:
            raise KernelError(f"deploy is only allowed in the Build phase, not {self.phase!r}")
        at = self.clock.step if at is None else at
        if at != self.clock.step:
            raise KernelError(f"deploy at month {at} requested during month {self.clock.step}")
        try:
            proto = self.prototypes[prototype]
        except KeyError:
            raise PrototypeError(f"unknown prototype {prototype!r}") from None
        if isinstance(parent, int):
            parent = self._alive(parent)
        want = _PARENT_KIND[proto.archetype.kind]
        if want is None and parent is not None:
            raise RifError(f"{proto.archetype.kind} {prototype!r} cannot have a parent")
        if want is not None:
            if parent is None or parent.kind != want:
                got = "none" if parent is None else parent.kind
                raise RifError(f"{proto.archetype.kind} {prototype!r} needs a {want} parent, "
                               f"got {got}")
            if not parent.alive:
                raise RifError(f"parent {parent.id} is not alive")
        agent = proto.archetype(self, proto)
        if lifetime is not None:
            if lifetime <= 0:
                raise KernelError("lifetime must be > 0")
            agent.lifetime = lifetime
        agent.id = self._next_agent
        self._next_agent += 1
        agent.parent = parent
        agent.enter_time = self.clock.step
        agent.alive = True
        if parent is not None:
            parent.children.append(agent)
        self.agents[agent.id] = agent
        self.all_agents[agent.id] = agent
        self.recorder.add("AgentEntry", agent.id, agent.kind, agent.archetype, agent.prototype,
                          None if parent is None else parent.id, agent.enter_time, agent.lifetime)
        self._guard(agent, "entering", agent.on_enter)
        return agent

    def _alive(self, agent_id: int) -> Agent:
        agent = self.agents.get(agent_id)
        if agent is None:
            state = "exited" if agent_id in self.all_agents else "unknown"
            raise KernelError(f"agent {agent_id} is {state}")
        return agent

    def decommission(self, agent: Agent | int, at: int | None = None) -> None:
        """Retire ``agent`` at month ``at`` (default now).

        Retiring now during Build removes the agent before this step's
        exchange. An agent still holding inventory after its pre-exit hook
        stays on, offering its stock, until it is empty.
        """
        agent = self._alive(agent if isinstance(agent, int) else agent.id)
        pending = [a for v in self._scheduled.values() for a in v] + self._end_of_step
        if agent.retiring or agent in pending:
            raise KernelError(f"agent {agent.id} is already being decommissioned")
        at = self.clock.step if at is None else at
        if at < self.clock.step:
            raise KernelError(f"cannot decommission in the past (month {at})")
        if at == self.clock.step and self.phase in _BUILD_PHASES + ("decommission",):
            self._retire(agent)
        elif at == self.clock.step:
            self._end_of_step.append(agent)
        else:
            self._scheduled[at].append(agent)

    def _retire(self, agent: Agent) -> None:
        for child in sorted((c for c in agent.children if c.alive), key=lambda c: -c.id):
            if not child.retiring:
                self._retire(child)
        agent.retiring = True
        self._guard(agent, "pre-exit", agent.pre_exit)
        if not self._try_exit(agent):
            self.diagnostic(agent, "exit-postponed",
                            f"{self._held(agent)!r} held after pre-exit; staying until empty")
            self._retiring.append(agent)

    def _held(self, agent: Agent) -> float:
        return math.fsum(r.quantity for r in agent.inventory())

    def _try_exit(self, agent: Agent) -> bool:
        if any(c.alive for c in agent.children) or self._held(agent) > EMPTY_TOL:
            return False
        agent.alive = False
        agent.exit_time = self.clock.step
        del self.agents[agent.id]
        self.commodities.unregister(agent.id)
        self.recorder.add("AgentExit", agent.id, agent.exit_time)
        return True

    # phases
    def _guard(self, agent: Agent, what: str, fn: Callable, *args):
        try:
            return fn(*args)
        except KernelError:
            raise
        except Exception as exc:
            raise SimulationError(f"step {self.clock.step}, agent {agent.id} "
                                  f"({agent.prototype}) while {what}: {exc}") from exc

    def _ordered(self, kind: type[Agent] | None = None) -> list[Agent]:
        return [a for _, a in sorted(self.agents.items())
                if kind is None or isinstance(a, kind)]

    def _adjust(self, request, bid, pref: float) -> float:
        requester = request.requester
        inst = requester.parent
        if inst is not None:
            pref = inst.adjust_preference(request, bid, pref)
            region = inst.parent
            if region is not None:
                pref = region.adjust_preference(request, bid, pref)
        return pref

    def _on_trade(self, trade: Trade, resource) -> None:
        self.recorder.add("Transactions", self.trade_count, trade.step, trade.supplier,
                          trade.requester, trade.resource_id, trade.commodity, trade.quantity,
                          trade.request.id, trade.bid.id)
        self.trade_count += 1

    def _exchange(self) -> None:
        traders = [_OfferOnly(a) if a.retiring else a for a in self._ordered(Facility)]
        step = self.clock.step
        try:
            result = run_exchange(traders, step, self.solver, self._adjust, self._on_trade)
        except KernelError:
            raise
        except Exception as exc:
            raise SimulationError(f"step {step}, exchange: {exc}") from exc
        self.last_exchange = result
        for k, arc in enumerate(result.graph.arcs):
            ref = result.refs[k]
            self.recorder.add("ExchangeArcs", step, arc.request, arc.bid, arc.supplier,
                              ref.request.requester.id, ref.request.commodity, arc.preference,
                              arc.cost, arc.upper, arc.exclusive, float(result.solution.flows[k]))

    def step(self) -> None:
        t = self.clock.step
        if self.clock.done:
            raise KernelError("simulation already finished")
        self.phase = "build"
        for agent in self._scheduled.pop(t, []):
            if agent.alive and not agent.retiring:
                self._retire(agent)
        for agent in self._ordered(Region):
            self._guard(agent, "building", agent.on_build_phase, t)
        for agent in self._ordered(Institution):
            self._guard(agent, "building", agent.on_build_phase, t)

        self.phase = "tick"
        for agent in self._ordered():
            self._guard(agent, "ticking", agent.tick)
        self.phase = "exchange"
        self._exchange()
        self.phase = "tock"
        for agent in self._ordered():
            self._guard(agent, "tocking", agent.tock)

        self.phase = "decommission"
        due = [a for a in self._ordered() if a.last_step == t and not a.retiring]
        due += self._end_of_step
        self._end_of_step = []
        for agent in due:
            if agent.alive and not agent.retiring:
                self._retire(agent)
        for agent in list(self._retiring):
            if self._try_exit(agent):
                self._retiring.remove(agent)

        self._record_inventories(t)
        self.recorder.end_step(t)
        self.clock.advance()
        self.phase = "idle"

    def _record_inventories(self, t: int) -> None:
        live = sunk = pu = 0.0
        for agent in self._ordered():
            by_comp: dict[int, list] = {}
            for res in agent.inventory():
                if not isinstance(res, Material) or res.quantity <= 0:
                    continue
                entry = by_comp.setdefault(res.raw_comp.id, [res.raw_comp, 0.0])
                entry[1] += res.quantity
                if agent.is_sink:
                    sunk += res.quantity
                else:
                    live += res.quantity
                pu += res.quantity * res.raw_comp.element_fraction(94)
            masses: dict[int, float] = defaultdict(float)
            for comp, qty in by_comp.values():
                for nuc, frac in comp.fractions.items():
                    masses[nuc] += frac * qty
            for nuc in sorted(masses):
                if masses[nuc] > 0:
                    self.recorder.add("TimeSeries", t, agent.id, nuc, alias(nuc), masses[nuc])
        self.pu_inventory.append(pu)
        self.mass_balance.append(MassBalance(t, self.tracker.created_mass, live, sunk))

    def run(self) -> Recorder:
        while not self.clock.done:
            self.step()
        self.phase = "done"
        self.recorder.close()
        return self.recorder

