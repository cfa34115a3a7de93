import csv
import io
import json

import numpy as np
import pytest

from qinfogeo import __version__
from qinfogeo.cli import CSV_COLUMNS, UsageError, format_report, main, parse_args, parse_dims
from qinfogeo.funlib import catalog_hash
from qinfogeo.io import save_matrix
from qinfogeo.propcheck import check_pinsker


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, M in {
        "r1": np.eye(2) / 2,
        "r2": np.diag([0.25, 0.75]),
        "a": np.diag([1.0, -1.0]),
        "big": np.eye(3) / 3,
    }.items():
        paths[name] = str(tmp_path / f"{name}.json")
        save_matrix(paths[name], M)
    return paths


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_compute_and_verify(files):
    args = parse_args(["compute", "divergence", "--f", "xlogx", "--rho1", files["r1"], "--rho2", files["r2"]])
    assert args.subcommand == "compute" and args.function.name == "xlogx"
    args = parse_args(["verify", "--suite", "all", "--dims", "2..4", "--seed", "7"])
    assert args.dims == (2, 3, 4) and args.seed == 7 and args.functions == "all"


def test_parse_rejections(files):
    with pytest.raises(UsageError, match="outside"):
        parse_args(["compute", "divergence", "--f", "k_alpha_inv:alpha=1.5", "--rho1", files["r1"], "--rho2", files["r2"]])
    with pytest.raises(UsageError, match="no such file"):
        parse_args(["compute", "divergence", "--f", "xlogx", "--rho1", "missing.json", "--rho2", files["r2"]])
    with pytest.raises(UsageError):
        parse_args(["verify", "--bogus"])
    with pytest.raises(UsageError):
        parse_args(["verify", "--f", "nope"])
    with pytest.raises(UsageError):
        parse_args(["verify", "--suite", "nope"])
    with pytest.raises(UsageError):
        parse_args([])


def test_parse_dims():
    assert parse_dims("2..4") == (2, 3, 4)
    assert parse_dims("3,5") == (3, 5)
    for bad in ("1..3", "2..17", "a", "4..2"):
        with pytest.raises(UsageError):
            parse_dims(bad)


def test_usage_errors_exit_one(capsys, files):
    code, _, err = run(capsys, ["verify", "--dims", "2..40"])
    assert code == 1 and "usage error" in err
    code, _, _ = run(capsys, ["compute", "chi2", "--alpha", "0.5", "--rho", files["r1"], "--sigma", files["big"]])
    assert code == 1


def test_version(capsys):
    code, out, _ = run(capsys, ["--version"])
    assert code == 0 and __version__ in out and catalog_hash() in out


def test_compute_divergence(capsys, files):
    code, out, _ = run(capsys, ["compute", "divergence", "--f", "xlogx", "--rho1", files["r1"], "--rho2", files["r2"]])
    doc = json.loads(out)
    assert code == 0
    assert doc["value"] == pytest.approx(0.143841, abs=1e-6)
    assert doc["dims"] == [2, 2] and doc["f"] == "xlogx" and doc["residual_imag"] == 0
    assert doc["paths"]["delta"] <= 1e-12


def test_compute_metric(capsys, files):
    code, out, _ = run(capsys, ["compute", "metric", "--f", "bkm", "--d", files["r2"], "--a", files["a"]])
    doc = json.loads(out)
    assert code == 0 and doc["value"] == pytest.approx(16 / 3)
    assert doc["paths"]["delta"] <= 1e-12
    code, out, _ = run(
        capsys, ["compute", "metric", "--f", "power_t:t=0.3", "--d", files["r2"], "--d2", files["r1"], "--a", files["a"]]
    )
    doc = json.loads(out)
    assert code == 0 and doc["paths"]["delta"] <= 1e-12


def test_compute_chi2(capsys, files):
    for flag in (["--alpha", "0.3"], ["--k", "bures"]):
        code, out, _ = run(capsys, ["compute", "chi2", *flag, "--rho", files["r1"], "--sigma", files["r2"]])
        doc = json.loads(out)
        assert code == 0 and doc["value"] == pytest.approx(1 / 3)
        assert set(doc["paths"]) == {"primary", "crosscheck", "delta"}


def test_catalog(capsys):
    code, out, _ = run(capsys, ["catalog"])
    assert code == 0
    for name in ("bures", "bkm", "k_alpha_inv"):
        assert name in out
    assert out == run(capsys, ["catalog"])[1]
    code, out, _ = run(capsys, ["catalog", "--format", "json"])
    rows = json.loads(out)
    assert {r["name"]: r["standard"] for r in rows}["bures"] is True


def test_emit_report_formats():
    empty = json.loads(format_report([]))
    assert empty["reports"] == [] and empty["version"] == __version__
    reports = [check_pinsker(trials=2, dims=(2,), seed=s) for s in (1, 2)]
    doc = json.loads(format_report(reports, "json", {"seed": 1}))
    assert [r["seed"] for r in doc["reports"]] == [1, 2]
    assert format_report(reports) == format_report(reports)
    rows = list(csv.reader(io.StringIO(format_report(reports, "csv"))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert all(len(r) == len(CSV_COLUMNS) for r in rows) and len(rows) == 3
    assert len(list(csv.reader(io.StringIO(format_report([], "csv"))))) == 1


def test_verify_exit_codes_and_outputs(capsys, tmp_path):
    out = tmp_path / "report.json"
    cx = tmp_path / "cx"
    base = ["verify", "--suite", "pinsker", "--trials", "3", "--dims", "2", "--counterexamples", str(cx)]
    code, _, _ = run(capsys, base + ["--out", str(out)])
    assert code == 0 and json.loads(out.read_text())["reports"][0]["violations"] == 0
    assert not cx.exists()
    code, _, err = run(capsys, base + ["--flip", "--out", str(out)])
    assert code == 2 and "violation" in err
    assert len(list(cx.iterdir())) == 3


def test_verify_is_byte_identical(capsys, tmp_path):
    argv = ["verify", "--suite", "block_doubling", "--f", "bures", "--f", "bkm", "--trials", "3", "--seed", "7"]
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, argv + ["--out", str(p)])[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert len(json.loads(paths[0].read_text())["reports"]) == 2


def test_verify_nothing_selected(capsys):
    code, _, err = run(capsys, ["verify", "--suite", "hessian_relation", "--f", "bures"])
    assert code == 1 and "no (property, function)" in err
