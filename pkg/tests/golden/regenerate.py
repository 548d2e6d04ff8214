"""Rewrite the golden outputs from the current code.

Run only after a deliberate behavior change, then review the diff::

    python3 tests/golden/regenerate.py
"""

import hashlib
import json
import shutil
import tempfile
from pathlib import Path

from fck.scenario.bundled import bundled_names, bundled_path
from fck.scenario.document import load_scenario
from fck.scenario.loader import run_scenario

HERE = Path(__file__).parent
FULL = ("reactor_lifetime",)


def digests(outdir: Path) -> dict[str, str]:
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(outdir.glob("*.csv"))}


def main() -> None:
    table = {}
    with tempfile.TemporaryDirectory() as tmp:
        for name in bundled_names():
            out = Path(tmp) / name
            run_scenario(load_scenario(bundled_path(name)), out)
            table[name] = digests(out)
            if name in FULL:
                dest = HERE / name
                shutil.rmtree(dest, ignore_errors=True)
                shutil.copytree(out, dest)
    (HERE / "digests.json").write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
