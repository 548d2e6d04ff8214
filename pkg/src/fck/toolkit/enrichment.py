"""Separative work and feed requirements for uranium enrichment."""

from __future__ import annotations

import math
from dataclasses import dataclass


class AssayError(ValueError):
    pass


def value_function(x: float) -> float:
    """Separation potential ``V(x) = (2x - 1) ln(x / (1 - x))``."""
    if not 0.0 < x < 1.0:
        raise AssayError(f"assay {x!r} outside (0, 1)")
    return (2.0 * x - 1.0) * math.log(x / (1.0 - x))


@dataclass(frozen=True)
class EnrichSpec:
    feed: float
    product: float
    tails: float

    def __post_init__(self):
        for name in ("feed", "product", "tails"):
            x = getattr(self, name)
            if not 0.0 < x < 1.0:
                raise AssayError(f"{name} assay {x!r} outside (0, 1)")
        # product == feed is the degenerate no-enrichment case
        if not self.tails < self.feed <= self.product:
            raise AssayError(
                f"need tails < feed <= product, got {self.tails}, {self.feed}, {self.product}"
            )


@dataclass(frozen=True)
class EnrichResult:
    swu: float
    feed: float
    tails: float


def feed_per_product(spec: EnrichSpec) -> float:
    return (spec.product - spec.tails) / (spec.feed - spec.tails)


def swu_per_product(spec: EnrichSpec) -> float:
    f = feed_per_product(spec)
    w = f - 1.0
    swu = (value_function(spec.product) + w * value_function(spec.tails)
           - f * value_function(spec.feed))
    return max(swu, 0.0)


def swu_required(spec: EnrichSpec, product_qty: float) -> EnrichResult:
    """SWU (kg-SWU), natural feed and tails (kg) to make ``product_qty`` kg."""
    if product_qty < 0:
        raise ValueError(f"negative product quantity {product_qty!r}")
    feed = product_qty * feed_per_product(spec)
    return EnrichResult(swu=product_qty * swu_per_product(spec), feed=feed,
                        tails=feed - product_qty)
