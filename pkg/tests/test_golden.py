import json
from pathlib import Path

import pytest

from fck.scenario.bundled import bundled_names, bundled_path
from fck.scenario.document import load_scenario
from fck.scenario.loader import run_scenario

from golden.regenerate import FULL, digests

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("golden")
    out = {}
    for name in bundled_names():
        run_scenario(load_scenario(bundled_path(name)), base / name)
        out[name] = base / name
    return out


@pytest.mark.parametrize("name", bundled_names())
def test_two_runs_are_byte_identical(name, runs, tmp_path):
    run_scenario(load_scenario(bundled_path(name)), tmp_path)
    first = runs[name]
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(p.name for p in first.iterdir())
    for p in sorted(first.glob("*.csv")):
        assert (tmp_path / p.name).read_bytes() == p.read_bytes(), p.name


@pytest.mark.parametrize("name", bundled_names())
def test_digests_match_golden(name, runs):
    want = json.loads((GOLDEN / "digests.json").read_text())
    assert digests(runs[name]) == want[name]


@pytest.mark.parametrize("name", FULL)
def test_full_golden_tables(name, runs):
    for p in sorted((GOLDEN / name).glob("*.csv")):
        assert (runs[name] / p.name).read_text() == p.read_text(), p.name
