from fck.exchange.graph import FLOW_TOL, Arc, ExchangeGraph, Row, Solution
from fck.exchange.market import ExchangeResult, build_graph, execute, gather, run_exchange
from fck.exchange.simplex import Infeasible, LPError, Unbounded, simplex
from fck.exchange.solvers import SOLVERS, arc_order, solve_exact_small, solve_greedy, solve_lp
from fck.exchange.types import (
    Bid, BidPortfolio, Constraint, ExchangeError, Request, RequestPortfolio, Trade,
)

__all__ = [
    "FLOW_TOL", "Arc", "Bid", "BidPortfolio", "Constraint", "ExchangeError", "ExchangeGraph",
    "ExchangeResult", "Infeasible", "LPError", "Request", "RequestPortfolio", "Row", "SOLVERS",
    "Solution", "Trade", "Unbounded", "arc_order", "build_graph", "execute", "gather",
    "run_exchange", "simplex", "solve_exact_small", "solve_greedy", "solve_lp",
]
