"""Referential-integrity and provenance checks over recorded output tables."""

from __future__ import annotations

import os
from collections import defaultdict

from fck.scenario.recorder import TABLES, Recorder, read_table


def load_all(source: Recorder | str | os.PathLike) -> dict[str, list[dict[str, str]]]:
    if isinstance(source, Recorder):
        return {name: source.table(name) for name in TABLES}
    return {name: read_table(source, name) for name in TABLES}


def audit(source: Recorder | str | os.PathLike) -> list[str]:
    """Return a list of integrity problems (empty when the tables are sound)."""
    t = load_all(source)
    problems: list[str] = []
    agents = {}
    for row in t["AgentEntry"]:
        aid = int(row["AgentId"])
        if aid in agents:
            problems.append(f"AgentEntry: duplicate agent {aid}")
        if agents and aid <= max(agents):
            problems.append(f"AgentEntry: agent id {aid} not increasing")
        agents[aid] = row
    for aid, row in agents.items():
        parent = row["ParentId"]
        kind = row["Kind"]
        want = {"Region": None, "Institution": "Region", "Facility": "Institution"}[kind]
        if want is None:
            if parent:
                problems.append(f"AgentEntry: region {aid} has parent {parent}")
        elif not parent or int(parent) not in agents:
            problems.append(f"AgentEntry: {kind} {aid} has unknown parent {parent!r}")
        elif agents[int(parent)]["Kind"] != want:
            problems.append(f"AgentEntry: {kind} {aid} parent {parent} is not a {want}")
    for row in t["AgentExit"]:
        if int(row["AgentId"]) not in agents:
            problems.append(f"AgentExit: unknown agent {row['AgentId']}")

    comps = defaultdict(float)
    for row in t["Compositions"]:
        comps[int(row["CompId"])] += float(row["MassFrac"])
    for cid, total in comps.items():
        if abs(total - 1.0) > 1e-9:
            problems.append(f"Compositions: comp {cid} sums to {total!r}")

    resources = {}
    for row in t["Resources"]:
        rid = int(row["ResourceId"])
        if rid in resources:
            problems.append(f"Resources: duplicate id {rid}")
        for key in ("Parent1", "Parent2"):
            if row[key] and int(row[key]) not in resources:
                problems.append(f"Resources: {rid} parent {row[key]} unknown or later")
        if row["Type"] == "Material" and int(row["CompId"]) not in comps:
            problems.append(f"Resources: {rid} references unknown comp {row['CompId']}")
        if row["Creator"] and int(row["Creator"]) not in agents:
            problems.append(f"Resources: {rid} created by unknown agent {row['Creator']}")
        resources[rid] = row

    for row in t["Transactions"]:
        if int(row["ResourceId"]) not in resources:
            problems.append(f"Transactions: {row['TransactionId']} moves unknown resource")
        for key in ("SenderId", "ReceiverId"):
            if int(row[key]) not in agents:
                problems.append(f"Transactions: {row['TransactionId']} unknown {key}")
    for row in t["TimeSeries"]:
        if int(row["AgentId"]) not in agents:
            problems.append(f"TimeSeries: unknown agent {row['AgentId']}")
    return problems


def ancestors(resources: dict[int, tuple[int, ...]], rid: int) -> set[int]:
    seen: set[int] = set()
    stack = list(resources.get(rid, ()))
    while stack:
        r = stack.pop()
        if r not in seen:
            seen.add(r)
            stack.extend(resources.get(r, ()))
    return seen


def parent_map(source: Recorder | str | os.PathLike) -> dict[int, tuple[int, ...]]:
    rows = source.table("Resources") if isinstance(source, Recorder) else \
        read_table(source, "Resources")
    return {int(r["ResourceId"]): tuple(int(r[k]) for k in ("Parent1", "Parent2") if r[k])
            for r in rows}


def creators(source: Recorder | str | os.PathLike) -> dict[int, int | None]:
    rows = source.table("Resources") if isinstance(source, Recorder) else \
        read_table(source, "Resources")
    return {int(r["ResourceId"]): int(r["Creator"]) if r["Creator"] else None for r in rows}
