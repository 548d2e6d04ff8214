"""Requests, bids, portfolios and trades exchanged during one market pass."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable


class ExchangeError(RuntimeError):
    pass


@dataclass(eq=False)
class Constraint:
    """A capacity row ``sum_k coef(item_k) * x_k <= rhs`` over one portfolio.

    ``coef`` receives a :class:`Request` (demand side) or :class:`Bid`
    (supply side); ``None`` means a plain quantity constraint.
    """

    rhs: float
    coef: Callable[[Any], float] | None = None
    label: str = ""

    def __post_init__(self):
        if math.isnan(self.rhs) or self.rhs < 0:
            raise ExchangeError(f"constraint rhs must be >= 0, got {self.rhs!r}")

    def coefficient(self, item) -> float:
        return 1.0 if self.coef is None else float(self.coef(item))


@dataclass(eq=False)
class Request:
    requester: Any
    commodity: str
    quantity: float
    target: Any = None
    preference: float = 1.0
    exclusive: bool = False
    portfolio: "RequestPortfolio | None" = None
    id: int = -1

    def __post_init__(self):
        if not self.quantity > 0:
            raise ExchangeError(f"request quantity must be > 0, got {self.quantity!r}")

    def __repr__(self) -> str:
        return (f"Request(id={self.id}, requester={getattr(self.requester, 'id', self.requester)}, "
                f"{self.commodity!r}, qty={self.quantity!r}, pref={self.preference!r})")


@dataclass(eq=False)
class RequestPortfolio:
    """Mutual requests: any member satisfies the common ``quantity``."""

    requester: Any
    quantity: float | None = None
    requests: list[Request] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    def add_request(self, commodity: str, quantity: float, target=None,
                    preference: float = 1.0, exclusive: bool = False) -> Request:
        req = Request(self.requester, commodity, quantity, target, preference, exclusive, self)
        self.requests.append(req)
        return req

    def add_constraint(self, rhs: float, coef=None, label: str = "") -> Constraint:
        con = Constraint(rhs, coef, label)
        self.constraints.append(con)
        return con

    @property
    def group_quantity(self) -> float:
        if self.quantity is not None:
            return self.quantity
        return max((r.quantity for r in self.requests), default=0.0)


@dataclass(eq=False)
class Bid:
    bidder: Any
    request: Request
    quantity: float
    offer: Any = None
    exclusive: bool = False
    portfolio: "BidPortfolio | None" = None
    id: int = -1

    def __post_init__(self):
        if not self.quantity > 0 or math.isinf(self.quantity):
            raise ExchangeError(f"bid quantity must be finite and > 0, got {self.quantity!r}")

    def __repr__(self) -> str:
        return (f"Bid(id={self.id}, bidder={getattr(self.bidder, 'id', self.bidder)}, "
                f"request={self.request.id}, qty={self.quantity!r})")


@dataclass(eq=False)
class BidPortfolio:
    bidder: Any
    bids: list[Bid] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    def add_bid(self, request: Request, quantity: float, offer=None,
                exclusive: bool = False) -> Bid:
        bid = Bid(self.bidder, request, quantity, offer, exclusive, self)
        self.bids.append(bid)
        return bid

    def add_constraint(self, rhs: float, coef=None, label: str = "") -> Constraint:
        con = Constraint(rhs, coef, label)
        self.constraints.append(con)
        return con


@dataclass
class Trade:
    supplier: int
    requester: int
    commodity: str
    quantity: float
    request: Request
    bid: Bid
    step: int
    resource_id: int | None = None
