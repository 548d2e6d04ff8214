import pytest

from fck.exchange import BidPortfolio, RequestPortfolio
from fck.kernel import (
    Facility, Institution, KernelError, PrototypeError, Region, RifError, Simulation,
    SimulationError,
)
from fck.scenario.audit import audit
from fck.scenario.schema import Field, SchemaError


class Log(Facility):
    """Records every hook it sees in a shared log."""

    schema = (Field("tag", "str", "f"),)
    log: list = []

    def tick(self):
        Log.log.append((self.step, "tick", self.id))

    def tock(self):
        Log.log.append((self.step, "tock", self.id))

    def get_requests(self):
        Log.log.append((self.step, "exchange", self.id))
        return []


class Plant(Facility):
    """Offers one kilogram of a fixed material each step."""

    schema = (Field("commod", "commodity", "x"),)

    def get_bids(self, requests):
        port = BidPortfolio(self)
        for r in requests.get(self.config["commod"], ()):
            port.add_bid(r, 1.0)
        return [port] if port.bids else []

    def provide(self, bid, qty):
        return self.sim.tracker.create_material(self.id, qty, {"U238": 1.0})


class Store(Facility):
    """Takes material and refuses to give it back."""

    schema = (Field("commod", "commodity", "x"),)
    is_sink = False

    def __init__(self, sim, proto):
        super().__init__(sim, proto)
        self.stock = []

    def inventory(self):
        return self.stock

    def get_requests(self):
        port = RequestPortfolio(self)
        port.add_request(self.config["commod"], 1.0)
        return [port]

    def accept(self, trade, res):
        self.stock.append(res)


class Broken(Facility):
    def tick(self):
        raise ZeroDivisionError("boom")


class Builder(Institution):
    schema = (Field("at", "int", 3),)

    def on_build_phase(self, step):
        if step == self.config["at"]:
            self.sim.deploy("plant", self)


def make_sim(duration=10, **kw):
    sim = Simulation(duration, decay_mode="never", **kw)
    sim.register_prototype("region", Region)
    sim.register_prototype("inst", Institution)
    for name, cls in (("log", Log), ("plant", Plant), ("store", Store), ("broken", Broken)):
        sim.register_prototype(name, cls)
    reg = sim.deploy("region")
    inst = sim.deploy("inst", reg)
    return sim, reg, inst


def test_register_prototype_rules():
    sim, _, _ = make_sim()
    with pytest.raises(PrototypeError):
        sim.register_prototype("plant", Plant)
    with pytest.raises(SchemaError, match="commod"):
        sim.register_prototype("p2", Plant, {"commod": ""})
    with pytest.raises(SchemaError, match="bogus"):
        sim.register_prototype("p3", Plant, {"bogus": 1})
    reactor = sim.register_prototype("lwr", "Reactor", {
        "fuel": [{"incommodity": "uox", "inrecipe": "a", "outcommodity": "w",
                  "outrecipe": "b"}], "n_batches": 3})
    assert reactor.config["n_batches"] == 3 and reactor.config["cycle_time"] == 18
    src = sim.register_prototype("src", "Source", {"outcommod": "uox", "outrecipe": "a"})
    assert src.config["capacity"] == float("inf")


def test_deploy_rules():
    sim, reg, inst = make_sim()
    f = sim.deploy("plant", inst)
    assert f.parent is inst and f in inst.facilities and f.enter_time == 0
    with pytest.raises(RifError):
        sim.deploy("plant", reg)
    with pytest.raises(RifError):
        sim.deploy("inst")
    with pytest.raises(RifError):
        sim.deploy("region", reg)
    with pytest.raises(PrototypeError):
        sim.deploy("nope", inst)
    with pytest.raises(KernelError):
        sim.deploy("plant", inst, at=5)
    ids = [a.id for a in sim.all_agents.values()]
    assert ids == sorted(ids) == list(range(len(ids)))


def test_deploy_only_in_build_phase():
    sim, _, inst = make_sim()

    class Sneaky(Facility):
        def tick(self):
            self.sim.deploy("plant", inst)

    sim.register_prototype("sneaky", Sneaky)
    sim.deploy("sneaky", inst)
    with pytest.raises(KernelError, match="Build phase"):
        sim.step()


def test_staggered_deploys():
    sim, _, inst = make_sim(duration=20)
    sim.register_prototype("deployer", "DeployInst", {"build": [
        {"prototype": "plant", "time": t, "number": 1} for t in range(0, 20, 2)]})
    dep = sim.deploy("deployer", sim.agents[0])
    sim.run()
    plants = [a for a in sim.all_agents.values() if a.parent is dep]
    assert [p.enter_time for p in plants] == list(range(0, 20, 2))
    assert len({p.id for p in plants}) == 10


def test_phase_order_and_new_agents_trade_in_entry_month():
    Log.log = []
    sim, _, inst = make_sim(duration=2)
    sim.deploy("log", inst)
    sim.deploy("log", inst)
    sim.run()
    month0 = [(what, aid) for t, what, aid in Log.log if t == 0]
    assert month0 == [("tick", 2), ("tick", 3), ("exchange", 2), ("exchange", 3),
                      ("tock", 2), ("tock", 3)]

    sim, _, inst = make_sim(duration=5)
    sim.register_prototype("builder", Builder)
    sim.deploy("builder", sim.agents[0])
    sim.deploy("store", inst)
    sim.run()
    tx = sim.recorder.table("Transactions")
    assert tx and int(tx[0]["Time"]) == 3


def test_decommission_scheduled_and_twice():
    sim, _, inst = make_sim(duration=15)
    src = sim.deploy("plant", inst)
    sim.deploy("store", inst)
    sim.decommission(src, at=12)
    with pytest.raises(KernelError):
        sim.decommission(src, at=13)
    sim.run()
    arcs = sim.recorder.table("ExchangeArcs")
    suppliers_by_month = {int(r["Time"]) for r in arcs if int(r["SupplierId"]) == src.id}
    assert max(suppliers_by_month) == 11
    assert sim.recorder.table("AgentExit") == [{"AgentId": str(src.id), "ExitTime": "12"}]
    with pytest.raises(KernelError, match="exited"):
        sim.decommission(src.id)
    with pytest.raises(KernelError, match="unknown"):
        sim.decommission(999)


def test_lifetime_and_cascade():
    sim, reg, inst = make_sim(duration=10)
    p = sim.deploy("plant", inst, lifetime=4)
    assert p.last_step == 3
    sim.step()
    sim.decommission(inst)
    assert not inst.alive and not p.alive and p.exit_time == 1
    assert reg.alive


def test_nonempty_agent_exit_is_postponed():
    sim, _, inst = make_sim(duration=6)
    sim.deploy("plant", inst)
    store = sim.deploy("store", inst, lifetime=2)
    sim.run()
    diags = sim.recorder.table("Diagnostics")
    assert [d["Kind"] for d in diags] == ["exit-postponed"]
    assert store.alive and store.retiring
    months = {int(r["Time"]) for r in sim.recorder.table("Transactions")}
    assert months == {0, 1}  # a retiring store no longer asks for material


def test_archetype_errors_carry_context():
    sim, _, inst = make_sim()
    sim.deploy("broken", inst)
    with pytest.raises(SimulationError, match=r"step 0, agent 2 \(broken\) while ticking: boom"):
        sim.run()


def test_empty_simulation():
    sim = Simulation(10)
    rec = sim.run()
    assert rec.table("Transactions") == [] and len(sim.pu_inventory) == 10
    assert sim.pu_inventory == [0.0] * 10
    with pytest.raises(KernelError):
        sim.step()


def test_mass_balance_and_audit_on_trading_run():
    sim, _, inst = make_sim(duration=8)
    sim.deploy("plant", inst)
    sim.deploy("store", inst)
    sim.run()
    assert [m.live for m in sim.mass_balance] == [float(t + 1) for t in range(8)]
    assert all(m.residual == 0 for m in sim.mass_balance)
    assert audit(sim.recorder) == []


def test_preference_adjustment_runs_institution_then_region():
    calls = []

    class Reg(Region):
        def adjust_preference(self, req, bid, pref):
            calls.append(("region", pref))
            return pref * 3

    class Inst(Institution):
        def adjust_preference(self, req, bid, pref):
            calls.append(("inst", pref))
            return pref + 1

    sim = Simulation(1)
    for name, cls in (("r", Reg), ("i", Inst), ("plant", Plant), ("store", Store)):
        sim.register_prototype(name, cls)
    inst = sim.deploy("i", sim.deploy("r"))
    sim.deploy("plant", inst)
    sim.deploy("store", inst)
    sim.run()
    assert calls == [("inst", 1.0), ("region", 2.0)]
    assert sim.recorder.table("ExchangeArcs")[0]["Preference"] == "6.0"
