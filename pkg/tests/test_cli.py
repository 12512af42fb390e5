"""CLI subcommands exercised in-process; exit-code contract."""

import dataclasses
import json

import pytest

from conftest import desk_scenario
from fcuc.cli import main
from fcuc.mps import parse_mps
from fcuc.scenario import save_scenario


@pytest.fixture(scope="module")
def desk_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "desk.json"
    save_scenario(desk_scenario(), str(path))
    return str(path)


@pytest.fixture(scope="module")
def overload_path(tmp_path_factory):
    s = desk_scenario()
    bad = dataclasses.replace(s, demand=tuple(3.0 * d for d in s.demand))
    path = tmp_path_factory.mktemp("cli") / "overload.json"
    save_scenario(bad, str(path))
    return str(path)


def test_simulate(desk_path, capsys, tmp_path):
    trace = tmp_path / "trace.tsv"
    rc = main([
        "simulate", "--scenario", desk_path, "--hour", "12",
        "--trace-out", str(trace), "--decimate", "100",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "nadir_hz" in out and "compliant" in out
    assert trace.exists() and trace.read_text().startswith("time_s")


def test_simulate_override_changes_metrics(desk_path, capsys):
    assert main(["simulate", "--scenario", desk_path]) == 0
    base = capsys.readouterr().out
    assert main([
        "simulate", "--scenario", desk_path, "--override", "combined_cycle=2000",
    ]) == 0
    boosted = capsys.readouterr().out

    def nadir(text):
        return float([l for l in text.splitlines() if l.startswith("nadir_hz")][0].split("\t")[1])

    assert nadir(boosted) > nadir(base)


def test_boundary(desk_path, capsys, tmp_path):
    grid = tmp_path / "grid.tsv"
    cut = tmp_path / "cut.json"
    rc = main([
        "boundary", "--scenario", desk_path, "--hour", "1",
        "--axis", "combined_cycle:0:1200:200",
        "--grid-out", str(grid), "--cut-out", str(cut),
    ])
    assert rc == 0
    lines = grid.read_text().strip().splitlines()
    assert lines[0].startswith("combined_cycle\tpass")
    assert len(lines) == 1 + 7  # inclusive lattice 0..1200 step 200
    doc = json.loads(cut.read_text())
    assert doc["coeffs"] and doc["intercept"] > 0


def test_boundary_bad_axis_format(desk_path, capsys):
    assert main(["boundary", "--scenario", desk_path, "--axis", "steam-0-100"]) == 1


def test_solve_proposed(desk_path, capsys, tmp_path):
    report = tmp_path / "prop.json"
    dispatch = tmp_path / "dispatch.tsv"
    rc = main([
        "solve", "--model", "proposed", "--scenario", desk_path,
        "--max-iter", "12", "--report-out", str(report),
        "--dispatch-out", str(dispatch),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "status\tconverged" in out and "cuts_added" in out
    assert json.loads(report.read_text())["model"] == "proposed"
    assert dispatch.read_text().startswith("hour\t")


def test_solve_industry_and_compare(desk_path, capsys, tmp_path):
    rep_i = tmp_path / "ind.json"
    rep_p = tmp_path / "prop.json"
    rc = main([
        "solve", "--model", "industry", "--scenario", desk_path,
        "--escalation", "1.1", "--max-iter", "40", "--report-out", str(rep_i),
    ])
    assert rc == 0
    assert "final_reserve_mw" in capsys.readouterr().out
    assert main([
        "solve", "--model", "proposed", "--scenario", desk_path,
        "--max-iter", "12", "--report-out", str(rep_p),
    ]) == 0
    capsys.readouterr()
    assert main(["compare", str(rep_p), str(rep_i)]) == 0
    assert "gap_percent" in capsys.readouterr().out


def test_solve_non_convergence_exit_2(desk_path, capsys):
    rc = main([
        "solve", "--model", "proposed", "--scenario", desk_path, "--max-iter", "1",
    ])
    assert rc == 2


def test_solve_infeasible_exit_3(overload_path, capsys):
    rc = main(["solve", "--model", "proposed", "--scenario", overload_path])
    assert rc == 3


def test_plan_npv(capsys):
    rc = main(["plan", "npv", "--savings", "100", "--capex", "1000"])
    out = capsys.readouterr().out
    assert rc == 0
    annuity = float([l for l in out.splitlines() if l.startswith("annuity")][0].split("\t")[1])
    assert annuity == pytest.approx(11.4699, abs=1e-4)
    assert main(["plan", "npv", "--savings", "1", "--capex", "1", "--rate", "0"]) == 1


def test_study_equivalence(desk_path, capsys):
    rc = main([
        "study", "equivalence", "--scenario", desk_path,
        "--tech-a", "combined_cycle", "--tech-b", "steam",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "edge_combined_cycle_mw" in out


def test_study_gfm_sensitivity(desk_path, capsys):
    # SCs cannot reach the nadir target in an empty context: infeasible study
    rc = main(["study", "gfm-sensitivity", "--scenario", desk_path])
    assert rc == 3
    capsys.readouterr()
    rc = main([
        "study", "gfm-sensitivity", "--scenario", desk_path,
        "--backdrop", "combined_cycle=400",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("time_constant_s") and len(out.strip().splitlines()) == 4


def test_export_mps(desk_path, capsys, tmp_path):
    out_path = tmp_path / "model.mps"
    rc = main(["export-mps", "--scenario", desk_path, "--out", str(out_path)])
    assert rc == 0
    p = parse_mps(str(out_path))
    assert p.ncols > 0 and p.nrows > 0


def test_usage_errors(desk_path, capsys, tmp_path):
    assert main(["no-such-command"]) == 1
    assert main(["solve", "--scenario", desk_path]) == 1  # --model missing
    assert main(["simulate", "--scenario", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert main(["simulate", "--scenario", str(bad)]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
