"""Small trader doubles and random market generators for exchange tests."""

from __future__ import annotations

import random

from fck.exchange import BidPortfolio, RequestPortfolio
from fck.resources import DecayMode, ResourceTracker


class Trader:
    """A scripted trader: fixed request/bid builders, records what it gets."""

    tracker = ResourceTracker(decay_mode=DecayMode.NEVER)

    def __init__(self, tid: int, requests=None, bids=None, short: float = 0.0):
        self.id = tid
        self._requests = requests or (lambda: [])
        self._bids = bids or (lambda reqs: [])
        self.short = short  # deliberately under-provide by this much
        self.received: list = []
        self.provided: list = []

    def get_requests(self):
        return self._requests()

    def get_bids(self, requests):
        return self._bids(requests)

    def provide(self, bid, quantity):
        mat = self.tracker.create_material(self.id, quantity - self.short, {"U238": 1.0})
        self.provided.append(mat)
        return mat

    def accept(self, trade, resource):
        self.received.append((trade, resource))


def requester(tid, commodity, qty, pref=1.0, exclusive=False):
    def build():
        port = RequestPortfolio(t)
        port.add_request(commodity, qty, preference=pref, exclusive=exclusive)
        return [port]
    t = Trader(tid, requests=build)
    return t


def supplier(tid, commodities, qty=None, cap=None, exclusive=False):
    """Bids ``qty`` (default: the request quantity) on every matching request."""
    def bids(reqs):
        port = BidPortfolio(t)
        for c in commodities:
            for r in reqs.get(c, ()):
                port.add_bid(r, r.quantity if qty is None else qty, exclusive=exclusive)
        if cap is not None and port.bids:
            port.add_constraint(cap)
        return [port] if port.bids else []
    t = Trader(tid, bids=bids)
    return t


def random_market(rng: random.Random, max_side: int = 4, max_cons: int = 2,
                  p_exclusive: float = 0.0, max_items: int = 1):
    """Random traders: up to ``max_side`` suppliers and requesters with integer data.

    Requesters post up to ``max_items`` mutual requests. Each side gets up
    to ``max_cons`` portfolio constraints with random non-negative
    coefficients.
    """
    n_sup = rng.randint(1, max_side)
    n_req = rng.randint(1, max_side)
    commodities = ["a", "b"]
    traders = []

    for j in range(n_req):
        n_items = rng.randint(1, max_items)
        spec = [(rng.choice(commodities), rng.randint(1, 10), rng.randint(1, 5),
                 rng.random() < p_exclusive) for _ in range(n_items)]
        cons = [(rng.randint(1, 15), [rng.randint(0, 3) for _ in spec])
                for _ in range(rng.randint(0, max_cons))]
        group = rng.choice([None, rng.randint(1, 12)])

        def build(spec=spec, cons=cons, group=group, j=j):
            port = RequestPortfolio(traders[j], quantity=group)
            reqs = [port.add_request(c, q, preference=p, exclusive=e) for c, q, p, e in spec]
            for rhs, coefs in cons:
                table = {id(r): a for r, a in zip(reqs, coefs)}
                port.add_constraint(rhs, lambda r, table=table: table[id(r)])
            return [port]

        traders.append(Trader(j, requests=build))

    for i in range(n_sup):
        sells = rng.sample(commodities, rng.randint(1, 2))
        cons = [(rng.randint(1, 20), rng.randint(1, 3)) for _ in range(rng.randint(0, max_cons))]
        draws = [rng.randint(1, 10) for _ in range(2 * max_side)]
        excl = [rng.random() < p_exclusive for _ in range(2 * max_side)]

        def bids(reqs, sells=sells, cons=cons, draws=draws, excl=excl, i=i):
            port = BidPortfolio(traders[n_req + i])
            k = 0
            for c in sells:
                for r in reqs.get(c, ()):
                    port.add_bid(r, draws[k % len(draws)], exclusive=excl[k % len(excl)])
                    k += 1
            for rhs, a in cons:
                port.add_constraint(rhs, lambda b, a=a: a)
            return [port] if port.bids else []

        traders.append(Trader(n_req + i, bids=bids))
    return traders
