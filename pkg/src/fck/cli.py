"""Command-line entry point.

Exit codes: 0 success, 1 user error (bad input, failed audit), 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from fck.kernel.simulation import KernelError
from fck.scenario import metrics
from fck.scenario.audit import audit
from fck.scenario.bundled import bundled_names, resolve
from fck.scenario.document import load_scenario
from fck.scenario.loader import run_scenario
from fck.scenario.recorder import TABLES, read_table
from fck.scenario.schema import SchemaError

OK, USER_ERROR, INTERNAL_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; here 2 is reserved for internal errors
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(spec: str):
    try:
        path = resolve(spec)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    return load_scenario(path)


def _outdir(path: str) -> Path:
    out = Path(path)
    if not (out / "Info.csv").is_file():
        raise UsageError(f"{out} is not an output directory (no Info.csv)")
    return out


def cmd_run(args) -> int:
    doc = _load(args.scenario)
    if args.solver:
        doc.control["solver"] = args.solver
    sim = run_scenario(doc, args.output)
    pu = metrics.pu_inventory(sim.recorder)
    print(f"steps={sim.clock.duration} agents={len(sim.all_agents)} trades={sim.trade_count} "
          f"final_pu_kg={pu[-1][1] if pu else 0.0!r}")
    if args.output:
        print(f"tables written to {args.output}")
    return OK


def cmd_validate(args) -> int:
    try:
        doc = _load(args.scenario)
    except SchemaError as exc:
        for err in exc.errors:
            print(err, file=sys.stderr)
        return USER_ERROR
    print(f"ok: {len(doc.recipes)} recipes, {len(doc.prototypes)} prototypes, "
          f"{len(doc.regions)} regions")
    return OK


def cmd_metrics(args) -> int:
    series = metrics.METRICS[args.metric](_outdir(args.dir))
    if args.out == "json":
        json.dump([{"month": t, "kg": v} for t, v in series], sys.stdout)
        sys.stdout.write("\n")
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["month", "kg"])
        w.writerows((t, repr(v)) for t, v in series)
    return OK


def cmd_dump_exchange(args) -> int:
    rows = [r for r in read_table(_outdir(args.dir), "ExchangeArcs")
            if int(r["Time"]) == args.step]
    cols = TABLES["ExchangeArcs"]
    w = csv.DictWriter(sys.stdout, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return OK


def cmd_audit(args) -> int:
    problems = audit(_outdir(args.dir))
    for p in problems:
        print(p)
    if problems:
        print(f"{len(problems)} problem(s)", file=sys.stderr)
        return USER_ERROR
    print("ok")
    return OK


def cmd_list(args) -> int:
    for name in bundled_names():
        print(name)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fck", description="Agent-based fuel cycle simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a scenario file or bundled scenario name")
    run.add_argument("scenario")
    run.add_argument("-o", "--output", help="directory for the output tables")
    run.add_argument("--solver", choices=("greedy", "lp", "exact"),
                     help="override the scenario's exchange solver")
    run.set_defaults(fn=cmd_run)

    val = sub.add_parser("validate", help="check a scenario without running it")
    val.add_argument("scenario")
    val.set_defaults(fn=cmd_validate)

    met = sub.add_parser("metrics", help="compute a metric from an output directory")
    met.add_argument("dir")
    met.add_argument("--metric", choices=sorted(metrics.METRICS), default="pu_inventory")
    met.add_argument("--out", choices=("csv", "json"), default="csv")
    met.set_defaults(fn=cmd_metrics)

    dump = sub.add_parser("dump-exchange", help="print the exchange graph of one step")
    dump.add_argument("dir")
    dump.add_argument("--step", type=int, required=True)
    dump.set_defaults(fn=cmd_dump_exchange)

    aud = sub.add_parser("audit", help="check referential integrity of output tables")
    aud.add_argument("dir")
    aud.set_defaults(fn=cmd_audit)

    lst = sub.add_parser("list", help="list bundled scenarios")
    lst.set_defaults(fn=cmd_list)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return USER_ERROR
    except SchemaError as exc:
        for err in exc.errors:
            print(err, file=sys.stderr)
        return USER_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USER_ERROR
    except KernelError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
