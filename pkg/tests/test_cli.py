"""End-to-end checks of the command-line interface.

Each test drives main() with an explicit argv and a temporary output
directory, then inspects exit codes, emitted files, and the manifest.
"""

import csv
import hashlib
import json
import math

import numpy as np
import pytest

from lzcross.cli import main, parse_range, ConfigError
from lzcross.indexsets import Anisotropy, as_fraction, hyperbolic_cross
from lzcross.norms import GridFunction
from lzcross.spectral import SpectralFunction


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


# -- range parsing -------------------------------------------------------------


def test_parse_range_modes():
    assert parse_range("3:6") == [3, 4, 5, 6]
    assert parse_range("3:6:linear") == [3, 4, 5, 6]
    assert parse_range("4:64:dyadic") == [4, 8, 16, 32, 64]
    # dyadic stops before overshooting the upper bound
    assert parse_range("3:10:dyadic") == [3, 6]


@pytest.mark.parametrize("bad", ["6:3", "0:4", "a:b", "1:2:3:4", "1:2:weird"])
def test_parse_range_rejects(bad):
    with pytest.raises(ConfigError):
        parse_range(bad)


# -- exit codes ----------------------------------------------------------------


def test_lemma_check_passes_with_defaults(tmp_path, capsys):
    rc = main(["--out", str(tmp_path), "lemma", "check", "--id", "1", "--case", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out

    header, rows = read_csv(tmp_path / "lemma1_report.csv")
    assert header == ["n", "lhs", "rhs", "ratio"]
    assert [int(r[0]) for r in rows] == [16 * 2**k for k in range(9)]

    summary = read_json(tmp_path / "lemma1_report.summary.json")
    assert set(summary) == {"spread", "min_ratio", "max_ratio", "verdict"}
    assert summary["verdict"] == "within"
    assert summary["spread"] >= 1.0


def test_exit_one_when_threshold_is_tightened(tmp_path, capsys):
    # case-1 ratios drift by ~13% over the default range, so a spread
    # budget of 1.0 must fail without raising
    rc = main(
        ["--out", str(tmp_path), "lemma", "check", "--id", "1",
         "--spread-threshold", "1.0"]
    )
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out
    summary = read_json(tmp_path / "lemma1_report.summary.json")
    assert summary["verdict"] == "exceeded"


def test_exit_two_on_bad_lemma_case(tmp_path, capsys):
    rc = main(["--out", str(tmp_path), "lemma", "check", "--id", "1", "--case", "9"])
    assert rc == 2
    assert capsys.readouterr().err.startswith("error:")


def test_exit_two_on_missing_config(tmp_path):
    rc = main(
        ["--config", str(tmp_path / "nope.json"), "--out", str(tmp_path),
         "lemma", "check", "--id", "1"]
    )
    assert rc == 2


def test_exit_two_on_malformed_config(tmp_path):
    bad = tmp_path / "cfg.json"
    bad.write_text("[1, 2, 3]")
    rc = main(["--config", str(bad), "--out", str(tmp_path),
               "lemma", "check", "--id", "1"])
    assert rc == 2


# -- cross generation ----------------------------------------------------------


def test_cross_gen_writes_indices_and_manifest(tmp_path):
    rc = main(["--out", str(tmp_path), "cross", "gen", "--n", "2", "--gamma", "1,1"])
    assert rc == 0

    doc = read_json(tmp_path / "cross.json")
    assert doc["m"] == 2
    got = {tuple(row) for row in doc["indices"]}
    assert got == {(0, 0), (0, 1), (0, -1), (1, 0), (-1, 0)}

    manifest = read_json(tmp_path / "manifest.json")
    assert manifest["kind"] == "cross-gen"
    assert manifest["summary"]["count"] == 5
    for entry in manifest["outputs"]:
        digest = hashlib.sha256((tmp_path / entry["path"]).read_bytes()).hexdigest()
        assert digest == entry["sha256"]


def test_cross_gen_accepts_rational_level_and_weights(tmp_path):
    rc = main(
        ["--out", str(tmp_path), "cross", "gen", "--n", "3/2", "--gamma", "1,2/3"]
    )
    assert rc == 0
    doc = read_json(tmp_path / "cross.json")
    expected = hyperbolic_cross(as_fraction("3/2"), Anisotropy.of(["1", "2/3"]))
    assert {tuple(row) for row in doc["indices"]} == set(expected)


def test_reruns_are_byte_identical(tmp_path):
    argv = ["lemma", "check", "--id", "2", "--case", "growth"]
    for d in ("a", "b"):
        assert main(["--out", str(tmp_path / d)] + argv) == 0
    for name in ("lemma2_report.csv", "lemma2_report.summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_out_dir_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("LZCROSS_OUT", str(tmp_path / "envdir"))
    rc = main(["cross", "gen", "--n", "1", "--gamma", "1"])
    assert rc == 0
    assert (tmp_path / "envdir" / "cross.json").exists()
    assert (tmp_path / "envdir" / "manifest.json").exists()


# -- norm command --------------------------------------------------------------


def test_norm_prints_unit_value_for_constant_one(tmp_path, capsys):
    grid_file = tmp_path / "grid.json"
    g = GridFunction(np.ones((8, 8)))
    grid_file.write_text(json.dumps(g.to_json_dict()))
    rc = main(
        ["--out", str(tmp_path), "norm", "--grid", str(grid_file),
         "--p", "2,2", "--alpha", "0,0", "--tau", "2,2"]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "1.000000000000"
    manifest = read_json(tmp_path / "manifest.json")
    assert manifest["summary"]["shape"] == [8, 8]
    assert abs(manifest["summary"]["norm"] - 1.0) < 1e-12


# -- config file layering ------------------------------------------------------


def test_config_file_sets_range(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"range": "16:32:dyadic"}))
    rc = main(["--config", str(cfg), "--out", str(tmp_path),
               "lemma", "check", "--id", "1"])
    assert rc == 0
    _, rows = read_csv(tmp_path / "lemma1_report.csv")
    assert [int(r[0]) for r in rows] == [16, 32]


def test_explicit_flag_beats_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"range": "16:32:dyadic"}))
    rc = main(["--config", str(cfg), "--out", str(tmp_path),
               "lemma", "check", "--id", "1", "--range", "16:64:dyadic"])
    assert rc == 0
    _, rows = read_csv(tmp_path / "lemma1_report.csv")
    assert [int(r[0]) for r in rows] == [16, 32, 64]


# -- approximation scan --------------------------------------------------------


def test_approx_scan_two_harmonics(tmp_path):
    """Errors drop exactly when the cross finally swallows each frequency."""
    f = SpectralFunction(1, {(3,): 1.0, (9,): 1.0})
    spectral_file = tmp_path / "f.json"
    spectral_file.write_text(json.dumps(f.to_json_dict()))
    rc = main(
        ["--out", str(tmp_path), "approx", "--spectral", str(spectral_file),
         "--gamma", "1", "--range", "1:5"]
    )
    assert rc == 0
    header, rows = read_csv(tmp_path / "approx.csv")
    assert header == ["n", "error", "card"]
    table = {int(n): (float(err), int(card)) for n, err, card in rows}
    root2 = math.sqrt(2.0)
    for n, expected_err in [(1, root2), (2, root2), (3, 1.0), (4, 1.0), (5, 0.0)]:
        err, card = table[n]
        assert err == pytest.approx(expected_err, rel=1e-12, abs=1e-15)
        assert card == 2**n - 1


# -- extremal builder ----------------------------------------------------------


def make_params_file(tmp_path, doc):
    p = tmp_path / "params.json"
    p.write_text(json.dumps(doc))
    return p


def test_extremal_sidecar_contract(tmp_path):
    params = make_params_file(
        tmp_path,
        {"p": ["3/2", "3/2"], "q": ["2", "2"], "r": ["1", "1"],
         "thetas": ["inf", "inf"], "gamma_prime": ["1", "1"]},
    )
    rc = main(
        ["--out", str(tmp_path), "extremal", "--which", "2", "--n", "3",
         "--params", str(params)]
    )
    assert rc == 0
    sidecar = read_json(tmp_path / "extremal.sidecar.json")
    assert set(sidecar) == {"besov", "support_size"}
    assert sidecar["support_size"] == 8
    assert sidecar["besov"] > 0

    f = SpectralFunction.from_json_dict(read_json(tmp_path / "extremal.json"))
    assert f.m == 2 and f.n_terms == 8


# -- rate experiment -----------------------------------------------------------


def test_theorem1_rate_univariate_defaults(tmp_path, capsys):
    params = make_params_file(tmp_path, {"p": ["3/2"], "q": ["2"], "r": ["1"]})
    rc = main(
        ["--out", str(tmp_path), "theorem1", "rate", "--params", str(params)]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 2

    summary = read_json(tmp_path / "theorem1_rate.summary.json")
    assert summary["rho_star"] == pytest.approx(5.0 / 6.0, rel=1e-12)
    assert abs(summary["slope_free"] - 5.0 / 6.0) < 0.1
    assert summary["normalizer_exact"] is True

    header, rows = read_csv(tmp_path / "theorem1_rate.csv")
    assert header == ["n", "error", "reference"]
    assert [int(r[0]) for r in rows] == list(range(6, 17))
