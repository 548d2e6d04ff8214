import csv
import io
import json
import subprocess
import sys

import pytest

from fck import cli
from fck.scenario import metrics
from fck.scenario.bundled import bundled_path
from fck.scenario.recorder import TABLES


def short_scenario(tmp_path, name="one_pass", months=320):
    text = bundled_path(name).read_text()
    path = tmp_path / f"{name}.xml"
    path.write_text(text.replace("<duration>1100</duration>", f"<duration>{months}</duration>"))
    return path


@pytest.fixture(scope="module")
def outdir(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("cli")
    out = tmp / "out"
    assert cli.main(["run", str(short_scenario(tmp)), "-o", str(out)]) == 0
    return out


def test_run_writes_every_table(outdir, capsys):
    assert {p.stem for p in outdir.glob("*.csv")} == set(TABLES)
    code = cli.main(["run", "reactor_lifetime"])
    assert code == 0
    assert capsys.readouterr().out.startswith("steps=60 ")


def test_metrics_csv_matches_metric_op(outdir, capsys):
    assert cli.main(["metrics", str(outdir), "--metric", "pu_inventory", "--out", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["month", "kg"]
    assert [(int(t), float(v)) for t, v in rows[1:]] == metrics.pu_inventory(outdir)

    assert cli.main(["metrics", str(outdir), "--out", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [(d["month"], d["kg"]) for d in data] == metrics.pu_inventory(outdir)


def test_dump_exchange(outdir, capsys):
    assert cli.main(["dump-exchange", str(outdir), "--step", "298"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows and all(r["Time"] == "298" for r in rows)
    assert any(r["Commodity"] == "mox" and float(r["Flow"]) > 0 for r in rows)


def test_audit_and_validate(outdir, tmp_path, capsys):
    assert cli.main(["audit", str(outdir)]) == 0
    assert capsys.readouterr().out.strip() == "ok"
    assert cli.main(["validate", "once_through"]) == 0
    assert capsys.readouterr().out.startswith("ok: 5 recipes")

    bad = tmp_path / "bad.xml"
    bad.write_text(bundled_path("once_through").read_text().replace(
        "<inrecipe>fresh_uox</inrecipe>", "<inrecipe>missing_one</inrecipe>"))
    assert cli.main(["validate", str(bad)]) == 1
    assert "missing_one" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["run", "no_such_scenario"], ["metrics", "/nonexistent"],
    ["dump-exchange", "/nonexistent", "--step", "1"], ["dump-exchange", ".", "--step", "x"],
])
def test_user_errors_exit_one(argv, capsys):
    assert cli.main(argv) == 1
    assert capsys.readouterr().err


def test_internal_errors_exit_two(monkeypatch, capsys):
    def boom(*a, **k):
        raise AssertionError("kaboom")
    monkeypatch.setattr(cli, "run_scenario", boom)
    assert cli.main(["run", "once_through"]) == 2
    assert "kaboom" in capsys.readouterr().err


def test_list(capsys):
    assert cli.main(["list"]) == 0
    assert "inf_pass" in capsys.readouterr().out.split()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fck", "validate", "inf_pass"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("ok:")
    proc = subprocess.run([sys.executable, "-m", "fck", "audit", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "Info.csv" in proc.stderr
