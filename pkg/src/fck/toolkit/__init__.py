from fck.toolkit.building import (
    BuildError, BuildOption, BuildProblem, brute_force_build, plan_cost, solve_build,
)
from fck.toolkit.commodity import CommodityProducerManager, commodity_supply
from fck.toolkit.enrichment import (
    AssayError, EnrichResult, EnrichSpec, swu_required, value_function,
)
from fck.toolkit.symbolic import (
    Exponential, Linear, Piecewise, SymbFunction, evaluate, make_function, piecewise,
)

__all__ = [
    "AssayError", "BuildError", "BuildOption", "BuildProblem", "CommodityProducerManager",
    "EnrichResult", "EnrichSpec", "Exponential", "Linear", "Piecewise", "SymbFunction",
    "brute_force_build", "commodity_supply", "evaluate", "make_function", "piecewise",
    "plan_cost", "solve_build", "swu_required", "value_function",
]
