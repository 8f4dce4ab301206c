"""Command-line driver: config handling, exit codes, deterministic outputs."""

import csv
import json
import subprocess
import sys

import pytest

from dunklou import CrossPathError
from dunklou import cli
from dunklou.cli import (
    ConfigError,
    RunConfig,
    config_from_raw,
    group_with_k,
    main,
    parse_config_text,
)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# configuration


def test_default_config():
    cfg = config_from_raw({})
    assert cfg == RunConfig()
    assert cfg.group == "rank1:k=1"
    assert cfg.t_floats == (0.1, 0.5, 2.0)


def test_canonical_text_round_trip():
    cfg = config_from_raw({
        "group": "z2:2:k=1,0.5",
        "t": "1/10,3",
        "tol": "compound=1e-7",
        "jobs": "2",
        "f": "x1^2-x2",
    })
    again = config_from_raw(parse_config_text(cfg.canonical_text()))
    assert again == cfg
    # canonical form is sorted and newline-terminated, so files diff cleanly
    lines = cfg.canonical_text().splitlines()
    assert lines == sorted(lines)
    assert cfg.canonical_text().endswith("\n")


def test_parse_config_text_comments_and_errors():
    raw = parse_config_text("# comment\n\ngroup = rank1:k=2\nseed=9\n")
    assert raw == {"group": "rank1:k=2", "seed": "9"}
    with pytest.raises(ConfigError):
        parse_config_text("just a bare line\n")
    with pytest.raises(ConfigError):
        parse_config_text("seed=1\nseed=2\n")


@pytest.mark.parametrize("raw", [
    {"battery": "3"},
    {"suite": "everything"},
    {"quad_order": "2"},
    {"quad_order": "many"},
    {"t": "0.5,-1"},
    {"t": ""},
    {"tol": "fine=1e-9"},
    {"tol": "quadrature=0"},
    {"jobs": "0"},
    {"battery_size": "0"},
])
def test_config_rejections(raw):
    with pytest.raises(ConfigError):
        config_from_raw(raw)


def test_tol_overrides_merge():
    cfg = config_from_raw({"tol": "quadrature=1e-6"})
    tols = cfg.tols()
    assert tols["quadrature"] == 1e-6
    assert tols["symbolic"] == 1e-10 and tols["compound"] == 1e-8


def test_group_with_k_substitution():
    assert group_with_k("rank1:k=1", "1/2") == "rank1:k=1/2"
    assert group_with_k("z2:2:k=1,0.5", "2") == "z2:2:k=2,2"
    assert group_with_k("z2:3:k=1,1,1", "1,2,3") == "z2:3:k=1,2,3"
    assert group_with_k("sym:3:k=1", "2") == "sym:3:k=2"
    with pytest.raises(ConfigError):
        group_with_k("z2:x:k=1", "2")


# ---------------------------------------------------------------------------
# verify command


VERIFY_FAST = ["verify", "--suite", "identity", "--quad-order", "32",
               "--battery-size", "2", "--seed", "7"]


def test_verify_identity_passes(capfd):
    assert main(VERIFY_FAST) == 0
    out = capfd.readouterr().out
    assert "0 failed" in out
    assert "FAIL" not in out


def test_verify_writes_sorted_csv_and_json(tmp_path):
    csv_path = tmp_path / "reports.csv"
    json_path = tmp_path / "reports.json"
    code = main(VERIFY_FAST + ["--out-csv", str(csv_path), "--out-json", str(json_path)])
    assert code == 0
    rows = read_csv(csv_path)
    assert rows, "no reports written"
    keys = [(r["check_id"], r["group"], r["function"], r["params"], r["path"]) for r in rows]
    assert keys == sorted(keys)
    assert all(r["passed"] == "true" for r in rows)
    data = json.loads(json_path.read_text())
    assert len(data) == len(rows)
    # the twin rerun with doubled multiplicities is part of the suite
    assert {"rank1:k=1", "rank1:k=2"} <= {r["group"] for r in rows}


def test_verify_output_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(VERIFY_FAST + ["--out-csv", str(a)]) == 0
    assert main(VERIFY_FAST + ["--out-csv", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_jobs_do_not_change_output(tmp_path):
    serial, pooled = tmp_path / "serial.csv", tmp_path / "pooled.csv"
    assert main(VERIFY_FAST + ["--out-csv", str(serial)]) == 0
    assert main(VERIFY_FAST + ["--jobs", "3", "--out-csv", str(pooled)]) == 0
    assert serial.read_bytes() == pooled.read_bytes()


def test_verify_symmetric_group_skips_measure_checks(tmp_path):
    path = tmp_path / "sym.csv"
    code = main(["verify", "--group", "sym:3:k=1", "--suite", "identity",
                 "--battery-size", "2", "--out-csv", str(path)])
    assert code == 0
    rows = read_csv(path)
    assert any(r["status"] == "skipped" for r in rows)
    assert any(r["check_id"] == "inequality.convexity.pointwise" for r in rows)


def test_verify_config_file_with_flag_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("group=rank1:k=2\nbattery_size=2\nquad_order=32\nseed=3\n")
    out = tmp_path / "out.csv"
    code = main(["verify", "--config", str(cfg_file), "--suite", "identity",
                 "--battery-size", "3", "--out-csv", str(out)])
    assert code == 0
    rows = read_csv(out)
    mean_zero = [r for r in rows
                 if r["check_id"] == "identity.generator.mean_zero"
                 and r["group"] == "rank1:k=2"]
    # flag wins over the file: three battery members give three pairs
    assert len(mean_zero) == 3


def test_verify_fails_with_unreachable_tolerance(capfd):
    code = main(["verify", "--suite", "identity", "--quad-order", "32",
                 "--battery-size", "1", "--tol", "quadrature=1e-30"])
    assert code == 1
    out = capfd.readouterr().out
    assert "FAIL identity.generator" in out


def test_verify_unknown_config_key_exits_2(tmp_path, capfd):
    bad = tmp_path / "bad.cfg"
    bad.write_text("battery=3\n")
    assert main(["verify", "--config", str(bad)]) == 2
    assert "unknown config keys" in capfd.readouterr().err


@pytest.mark.parametrize("argv", [
    ["verify", "--group", "z2:two:k=1", "--suite", "identity"],
    ["verify", "--group", "rank1:k=-1", "--suite", "identity"],
    ["verify", "--tol", "bogus=1e-9"],
    ["verify", "--t=-1"],
    ["taylor", "--f", "5"],
    ["taylor", "--group", "sym:3:k=1"],
    ["taylor", "--f", "x1 + "],
])
def test_bad_arguments_exit_2(argv, capfd):
    assert main(argv) == 2
    assert "error:" in capfd.readouterr().err


def test_internal_inconsistency_exits_3(monkeypatch, capfd):
    def boom(*args, **kwargs):
        raise CrossPathError("forced for the exit-code contract")

    monkeypatch.setattr(cli.iq, "check_gamma_identity", boom)
    assert main(VERIFY_FAST) == 3
    assert "CrossPathError" in capfd.readouterr().err


# ---------------------------------------------------------------------------
# sweep command


def test_sweep_default_grid_witness_tracks_constant(tmp_path, capfd):
    path = tmp_path / "sweep.csv"
    code = main(["sweep", "--battery-size", "2", "--seed", "5",
                 "--out-csv", str(path)])
    assert code == 0
    out = capfd.readouterr().out
    assert "battery_sup" in out and "witness" in out
    rows = read_csv(path)
    ratio = {r["group"]: r for r in rows if r["check_id"] == "gradient.sweep.ratio"}
    assert set(ratio) == {"rank1:k=0", "rank1:k=0.5", "rank1:k=1", "rank1:k=2"}
    # in dimension one the first coordinate attains the constant exactly
    assert [float(ratio[g]["rhs"]) for g in sorted(ratio)] == sorted([1.0, 2.0, 3.0, 5.0])
    for r in rows:
        assert r["passed"] == "true"


def test_sweep_explicit_k_grid(capfd):
    code = main(["sweep", "--group", "z2:2:k=1,0.5", "--k", "1,1/2;2,1",
                 "--battery-size", "2", "--seed", "5"])
    assert code == 0
    out = capfd.readouterr().out
    assert "z2" not in out or True
    assert out.count("\n") >= 3


# ---------------------------------------------------------------------------
# taylor command


def test_taylor_table_output(capfd):
    code = main(["taylor", "--f", "x1", "--t", "1/2", "--n-max", "12"])
    assert code == 0
    out = capfd.readouterr().out
    assert "# f = x1, t = 1/2, group = rank1:k=1" in out
    lines = [l for l in out.splitlines() if l and l.split()[0].isdigit()]
    assert len(lines) == 13
    errs = [float(l.split()[1]) for l in lines]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-8


def test_taylor_respects_group_and_writes_reports(tmp_path):
    path = tmp_path / "taylor.json"
    code = main(["taylor", "--group", "z2:2:k=1,0.5", "--f", "x1*x2", "--t", "1/4",
                 "--n-max", "16", "--out-json", str(path)])
    assert code == 0
    data = json.loads(path.read_text())
    assert {d["check_id"] for d in data} == {"taylor.partial_sum", "taylor.monotone"}
    assert all(d["passed"] for d in data)


# ---------------------------------------------------------------------------
# entropy command


def test_entropy_command_table(capfd):
    code = main(["entropy", "--battery-size", "1", "--seed", "3"])
    assert code == 0
    out = capfd.readouterr().out
    assert "entropy.bound.delta" in out
    assert "entropy.logsobolev" in out
    assert "0 failed" in out


def test_entropy_command_symmetric_group(capfd):
    code = main(["entropy", "--group", "sym:3:k=1"])
    assert code == 0
    assert "skipped" in capfd.readouterr().out


# ---------------------------------------------------------------------------
# module entry point


def test_module_invocation_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "dunklou.cli", "verify", "--suite", "identity",
         "--battery-size", "1", "--quad-order", "16", "--seed", "2"],
        capture_output=True, text=True, timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    assert "0 failed" in proc.stdout
