"""Post-processing of recorded output tables."""

from __future__ import annotations

import os
from collections import defaultdict
from typing import Mapping, Sequence

from fck.resources.nuclides import znum
from fck.scenario.recorder import Recorder, read_table

Rows = Sequence[Mapping[str, str]]


def _tables(source, *names: str) -> list[Rows]:
    if isinstance(source, Recorder):
        return [source.table(n) for n in names]
    return [read_table(source, n) for n in names]


def duration_of(info: Rows) -> int:
    for row in info:
        if row["Key"] == "duration":
            return int(row["Value"])
    raise ValueError("Info table has no duration")


def element_inventory(source: Recorder | str | os.PathLike, z: int) -> list[tuple[int, float]]:
    """``(month, kg)`` of element ``z`` summed over every agent, for each month."""
    info, series = _tables(source, "Info", "TimeSeries")
    totals: dict[int, float] = defaultdict(float)
    for row in series:
        if znum(int(row["Nuclide"])) == z:
            totals[int(row["Time"])] += float(row["Mass"])
    return [(t, totals.get(t, 0.0)) for t in range(duration_of(info))]


def pu_inventory(source: Recorder | str | os.PathLike) -> list[tuple[int, float]]:
    return element_inventory(source, 94)


METRICS = {"pu_inventory": pu_inventory}


def commodity_receipts(source, commodity: str, receiver: int | None = None
                       ) -> list[tuple[int, int, float]]:
    """``(month, receiver, kg)`` for every transfer of ``commodity``."""
    (tx,) = _tables(source, "Transactions")
    out = []
    for row in tx:
        if row["Commodity"] != commodity:
            continue
        rid = int(row["ReceiverId"])
        if receiver is None or rid == receiver:
            out.append((int(row["Time"]), rid, float(row["Quantity"])))
    return out


def drop_months(series: Sequence[tuple[int, float]], rel_tol: float = 1e-9) -> list[int]:
    """Months at which the inventory falls."""
    out = []
    for (_, a), (t, b) in zip(series, series[1:]):
        if b < a - rel_tol * max(1.0, abs(a)):
            out.append(t)
    return out
