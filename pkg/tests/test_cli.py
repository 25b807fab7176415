import csv
import json

import pytest

from fr3net.cli import main

pytestmark = pytest.mark.property

TINY = {"scenario": "4G UMa + 5G UMi + 6G HS", "n_drops": 1, "seed": 3,
        "geometry": {"n_tiers": 1, "per_sector_counts": {"center": 3, "tier1": 3}, "n_hotspots": 1,
                     "ues_per_hotspot": 5, "hotspot_region_radius": 150.0}}


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "tiny.json"
    p.write_text(json.dumps(TINY))
    return p


def test_simulate_then_compare(tmp_path, cfg_path, capsys):
    assert main(["simulate", "--scenario", str(cfg_path), "--out", str(tmp_path / "a")]) == 0
    assert main(["simulate", "--scenario", str(cfg_path), "--no-reselection", "--mode", "orthogonal",
                 "--out", str(tmp_path / "b")]) == 0
    for name in ("per_ue.csv", "cdf.csv", "power.json", "manifest.json"):
        assert (tmp_path / "a" / name).exists()
    m = json.loads((tmp_path / "b" / "manifest.json").read_text())
    assert m["scheduling_mode"] == "orthogonal" and m["config"]["reselection"]["enabled"] is False
    capsys.readouterr()
    assert main(["compare", str(tmp_path / "a"), str(tmp_path / "b")]) == 0
    table = capsys.readouterr().out
    assert "median Mbps" in table and table.count("4G UMa + 5G UMi + 6G HS") == 2


def test_seed_override_changes_output(tmp_path, cfg_path):
    main(["simulate", "--scenario", str(cfg_path), "--seed", "4", "--out", str(tmp_path / "a")])
    main(["simulate", "--scenario", str(cfg_path), "--seed", "5", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "per_ue.csv").read_bytes() != (tmp_path / "b" / "per_ue.csv").read_bytes()


def test_beams(tmp_path):
    out = tmp_path / "beams.csv"
    assert main(["beams", "--radio", "4G/5G macro", "--step", "30", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert {(r["technology"], r["kind"]) for r in rows} == {("4G", "SSB"), ("4G", "CSI-RS"), ("5G", "SSB"),
                                                            ("5G", "CSI-RS")}


@pytest.mark.parametrize("argv", [["simulate", "--scenario", "7G UMa", "--out", "x"],
                                  ["beams", "--radio", "nope", "--out", "x"]])
def test_usage_errors_exit_2(argv, tmp_path, capsys):
    assert main(argv[:-1] + [str(tmp_path / argv[-1])]) == 2
    assert "usage error" in capsys.readouterr().err


def test_argparse_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["simulate"])
    assert e.value.code == 2


def test_bad_parameter_exits_1(tmp_path, capsys):
    assert main(["beams", "--radio", "4G macro", "--step", "0", "--out", str(tmp_path / "b.csv")]) == 1
    assert "error" in capsys.readouterr().err
