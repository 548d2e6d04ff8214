"""One pass of the resource exchange over a set of traders.

Traders are duck-typed objects with an integer ``id`` and the methods

* ``get_requests() -> list[RequestPortfolio]``
* ``get_bids(requests: dict[str, list[Request]]) -> list[BidPortfolio]``
* ``provide(bid, quantity) -> Resource``
* ``accept(trade, resource) -> None``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from fck.exchange.graph import FLOW_TOL, ExchangeGraph, Solution
from fck.exchange.solvers import SOLVERS
from fck.exchange.types import BidPortfolio, ExchangeError, Request, RequestPortfolio, Trade

PROVIDE_TOL = 1e-9

PrefAdjuster = Callable[[Request, "object", float], float]


@dataclass
class ArcRef:
    request: Request
    bid: object
    preference: float


@dataclass
class ExchangeResult:
    step: int
    requests: list[RequestPortfolio]
    bids: list[BidPortfolio]
    graph: ExchangeGraph
    refs: list[ArcRef]
    solution: Solution
    trades: list[Trade] = field(default_factory=list)


def gather(traders: Sequence) -> tuple[list[RequestPortfolio], list[BidPortfolio]]:
    """Poll every consumer, then show suppliers the full request set."""
    req_ports: list[RequestPortfolio] = []
    by_commodity: dict[str, list[Request]] = {}
    next_id = 0
    for trader in traders:
        for port in trader.get_requests() or ():
            if not port.requests:
                continue
            for req in port.requests:
                req.id = next_id
                next_id += 1
                by_commodity.setdefault(req.commodity, []).append(req)
            req_ports.append(port)
    bid_ports: list[BidPortfolio] = []
    next_bid = 0
    known = {id(r) for rs in by_commodity.values() for r in rs}
    for trader in traders:
        for port in trader.get_bids(by_commodity) or ():
            for bid in port.bids:
                if id(bid.request) not in known:
                    raise ExchangeError(f"agent {trader.id} bid on a request from another round")
                bid.id = next_bid
                next_bid += 1
            if port.bids:
                bid_ports.append(port)
    return req_ports, bid_ports


def build_graph(req_ports: Sequence[RequestPortfolio], bid_ports: Sequence[BidPortfolio],
                adjust: PrefAdjuster | None = None) -> tuple[ExchangeGraph, list[ArcRef]]:
    graph = ExchangeGraph()
    refs: list[ArcRef] = []
    arcs_of_request: dict[int, list[int]] = {}
    arcs_of_bid: dict[int, int] = {}
    for port in bid_ports:
        for bid in port.bids:
            req = bid.request
            if bid.bidder is req.requester:
                continue
            pref = float(req.preference)
            if adjust is not None:
                pref = float(adjust(req, bid, pref))
            if not pref > 0 or math.isinf(pref):
                continue
            upper = min(req.quantity, bid.quantity)
            exclusive = bid.exclusive or req.exclusive
            if exclusive:
                amount = bid.quantity if bid.exclusive else req.quantity
                if amount > upper * (1 + 1e-12) or math.isinf(amount):
                    continue
                upper = amount
            k = graph.add_arc(bid.bidder.id, req.id, bid.id, 1.0 / pref, upper, exclusive, pref)
            refs.append(ArcRef(req, bid, pref))
            arcs_of_request.setdefault(req.id, []).append(k)
            arcs_of_bid[id(bid)] = k

    for port in req_ports:
        members = [k for r in port.requests for k in arcs_of_request.get(r.id, ())]
        for r in port.requests:
            ks = arcs_of_request.get(r.id, ())
            graph.add_row({k: 1.0 for k in ks}, r.quantity, f"request {r.id}")
        if len(port.requests) > 1:
            graph.add_row({k: 1.0 for k in members}, port.group_quantity,
                          f"group of request {port.requests[0].id}")
        for con in port.constraints:
            coeffs = {}
            for r in port.requests:
                a = con.coefficient(r)
                for k in arcs_of_request.get(r.id, ()):
                    coeffs[k] = a
            graph.add_row(coeffs, con.rhs, con.label or "demand")
    for port in bid_ports:
        for con in port.constraints:
            coeffs = {arcs_of_bid[id(b)]: con.coefficient(b)
                      for b in port.bids if id(b) in arcs_of_bid}
            graph.add_row(coeffs, con.rhs, con.label or "supply")
    return graph, refs


def execute(refs: Sequence[ArcRef], solution: Solution, step: int,
            on_trade: Callable[[Trade, object], None] | None = None) -> list[Trade]:
    """Collect every supplier's resource first, then deliver them."""
    matched = [(k, float(x)) for k, x in enumerate(solution.flows) if x > FLOW_TOL]
    shipments = []
    for k, qty in matched:
        ref = refs[k]
        bid, req = ref.bid, ref.request
        trade = Trade(bid.bidder.id, req.requester.id, req.commodity, qty, req, bid, step)
        res = bid.bidder.provide(bid, qty)
        if res is None or abs(res.quantity - qty) > PROVIDE_TOL:
            got = None if res is None else res.quantity
            raise ExchangeError(
                f"agent {bid.bidder.id} ({type(bid.bidder).__name__}) provided {got!r} "
                f"for a matched quantity of {qty!r} on {req.commodity!r}")
        trade.resource_id = res.resource_id
        shipments.append((trade, res))
    for trade, res in shipments:
        trade.request.requester.accept(trade, res)
        if on_trade is not None:
            on_trade(trade, res)
    return [t for t, _ in shipments]


def run_exchange(traders: Sequence, step: int, solver: str = "greedy",
                 adjust: PrefAdjuster | None = None,
                 on_trade: Callable[[Trade, object], None] | None = None) -> ExchangeResult:
    try:
        solve = SOLVERS[solver]
    except KeyError:
        raise ExchangeError(f"unknown solver {solver!r}") from None
    req_ports, bid_ports = gather(traders)
    graph, refs = build_graph(req_ports, bid_ports, adjust)
    solution = solve(graph)
    result = ExchangeResult(step, req_ports, bid_ports, graph, refs, solution)
    result.trades = execute(refs, solution, step, on_trade)
    return result
