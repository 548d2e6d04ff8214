"""Append-only output tables, kept in memory and mirrored to CSV files.

Each table is one ``<Name>.csv`` file: header row, UTF-8, ``\\n`` line
endings, floats written with ``repr`` so files are bit-exact across runs.
"""

from __future__ import annotations

import csv
import os
from pathlib import Path

TABLES: dict[str, tuple[str, ...]] = {
    "Info": ("Key", "Value"),
    "AgentEntry": ("AgentId", "Kind", "Archetype", "Prototype", "ParentId", "EnterTime",
                   "Lifetime"),
    "AgentExit": ("AgentId", "ExitTime"),
    "Resources": ("ResourceId", "Time", "Op", "Type", "Quantity", "CompId", "Quality",
                  "Parent1", "Parent2", "Creator"),
    "Compositions": ("CompId", "Nuclide", "Alias", "MassFrac"),
    "Transactions": ("TransactionId", "Time", "SenderId", "ReceiverId", "ResourceId",
                     "Commodity", "Quantity", "RequestId", "BidId"),
    "TimeSeries": ("Time", "AgentId", "Nuclide", "Alias", "Mass"),
    "Power": ("Time", "AgentId", "Value"),
    "ExchangeArcs": ("Time", "RequestId", "BidId", "SupplierId", "RequesterId", "Commodity",
                     "Preference", "Cost", "Upper", "Exclusive", "Flow"),
    "Diagnostics": ("Time", "AgentId", "Kind", "Message"),
}

FLUSH_EVERY = 100


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class Recorder:
    """Collects rows per table; with ``outdir`` also streams them to CSV."""

    def __init__(self, outdir: str | os.PathLike | None = None, flush_every: int = FLUSH_EVERY):
        self.rows: dict[str, list[tuple[str, ...]]] = {name: [] for name in TABLES}
        self.outdir = Path(outdir) if outdir is not None else None
        self.flush_every = flush_every
        self._written = {name: 0 for name in TABLES}
        self._closed = False
        if self.outdir is not None:
            self.outdir.mkdir(parents=True, exist_ok=True)
            for name, cols in TABLES.items():
                with self._path(name).open("w", encoding="utf-8", newline="") as fh:
                    csv.writer(fh, lineterminator="\n").writerow(cols)

    def _path(self, name: str) -> Path:
        return self.outdir / f"{name}.csv"

    def add(self, table: str, *values) -> None:
        if self._closed:
            raise RuntimeError("recorder is closed")
        cols = TABLES[table]
        if len(values) != len(cols):
            raise ValueError(f"{table}: expected {len(cols)} values, got {len(values)}")
        self.rows[table].append(tuple(fmt(v) for v in values))

    def end_step(self, step: int) -> None:
        if (step + 1) % self.flush_every == 0:
            self.flush()

    def flush(self) -> None:
        if self.outdir is None:
            return
        for name, rows in self.rows.items():
            start = self._written[name]
            if start == len(rows):
                continue
            with self._path(name).open("a", encoding="utf-8", newline="") as fh:
                csv.writer(fh, lineterminator="\n").writerows(rows[start:])
            self._written[name] = len(rows)

    def close(self) -> None:
        if not self._closed:
            self.flush()
            self._closed = True

    def table(self, name: str) -> list[dict[str, str]]:
        cols = TABLES[name]
        return [dict(zip(cols, row)) for row in self.rows[name]]


def read_table(outdir: str | os.PathLike, name: str) -> list[dict[str, str]]:
    path = Path(outdir) / f"{name}.csv"
    with path.open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
