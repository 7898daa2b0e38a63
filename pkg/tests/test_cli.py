import filecmp
import json
import math

import pytest

from lpconvexity.cli import RunConfig, main
from lpconvexity.domain import PreconditionError


def _read_csv(path):
    meta, header, rows, trailer = {}, None, [], {}
    for line in path.read_text().splitlines():
        if line.startswith("# ") and header is None:
            for part in line[2:].split():
                k, _, v = part.partition("=")
                meta[k] = v
        elif line.startswith("# "):
            k, _, v = line[2:].partition("=")
            trailer[k] = float(v)
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    return meta, header, rows, trailer


def test_eval_axis_point(capsys):
    assert main(["eval", "--p", "3", "1", "1", "8"]) == 0
    assert capsys.readouterr().out.strip() == "0 FOLIATION"


def test_eval_linear_point(capsys):
    assert main(["eval", "--p", "2", "1", "1", "1"]) == 0
    assert capsys.readouterr().out.strip() == "3 EXACT_LINEAR"


def test_eval_outside_cone(capsys):
    assert main(["eval", "--p", "3", "1", "1", "9"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err and "x3" in err


def test_usage_errors_exit_one(capsys):
    assert main(["eval", "--p", "3", "1", "1"]) == 1
    assert main(["no-such-command"]) == 1
    assert main([]) == 1
    capsys.readouterr()


def test_run_config_validation():
    with pytest.raises(PreconditionError):
        RunConfig("surface", 2.0, n=8)
    with pytest.raises(PreconditionError):
        RunConfig("modulus-curve", 2.0, grid=1)
    with pytest.raises(PreconditionError):
        RunConfig("modulus-curve", 2.0, fmt="xml")


def test_modulus_csv_contents(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["modulus-curve", "--p", "2", "--grid", "4", "--out", str(out)]) == 0
    meta, header, rows, trailer = _read_csv(out)
    assert meta["command"] == "modulus-curve" and meta["p"] == "2"
    assert header == ["eps", "delta_closed", "delta_bellman", "discrepancy"]
    assert [r[0] for r in rows] == [0.5, 1.0, 1.5, 2.0]
    assert rows[1][1] == pytest.approx(1.0 - math.sqrt(3.0) / 2.0, abs=1e-15)
    assert rows[-1][1] == 1.0 and rows[-1][2] == 1.0
    assert trailer["max_discrepancy"] <= 1e-9
    assert str(out) in capsys.readouterr().out


def test_modulus_curve_cross_validation_below_two(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["modulus-curve", "--p", "1.5", "--grid", "32", "--out", str(out)]) == 0
    _, _, rows, trailer = _read_csv(out)
    assert len(rows) == 32
    assert trailer["max_discrepancy"] <= 1e-9
    capsys.readouterr()


def test_modulus_json_format(tmp_path, capsys):
    out = tmp_path / "m.json"
    assert main(["modulus-curve", "--p", "3", "--grid", "8", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["columns"][0] == "eps"
    assert len(payload["rows"]) == 8
    assert payload["max_discrepancy"] <= 1e-9
    capsys.readouterr()


def test_verify_passes_and_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "--p", "1.5", "3", "--trials", "500", "--seed", "3"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert filecmp.cmp(a, b, shallow=False)
    report = json.loads(a.read_text())
    assert report["passed"] is True
    assert {entry["p"] for entry in report["results"]} == {1.5, 3.0}
    out = capsys.readouterr().out
    assert "all contracts hold" in out


def test_verify_skips_clarkson_at_p_one(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--p", "1", "--trials", "200", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["results"][0]["clarkson"]["skipped"] is True
    assert "clarkson=skipped" in capsys.readouterr().out


def test_foliate_below_two(tmp_path, capsys):
    out = tmp_path / "f.csv"
    assert main(["foliate", "--p", "1.5", "--count", "10", "--out", str(out)]) == 0
    meta, header, rows, _ = _read_csv(out)
    assert meta["count"] == "10"
    assert header == ["t", "arc_a", "s_a", "arc_b", "s_b", "value"]
    assert len(rows) == 10
    # chords pair the first two arcs, or the third arc with itself
    assert {(r[1], r[3]) for r in rows} <= {(1.0, 2.0), (3.0, 3.0)}
    capsys.readouterr()


def test_foliate_linear_regime_refuses(capsys):
    assert main(["foliate", "--p", "2"]) == 2
    assert "linear regime" in capsys.readouterr().err


def test_foliate_above_two_single_chord(tmp_path, capsys):
    out = tmp_path / "f.csv"
    assert main(["foliate", "--p", "3", "--out", str(out)]) == 0
    _, _, rows, _ = _read_csv(out)
    assert len(rows) == 1
    assert "symmetry-axis chord" in capsys.readouterr().err


def test_surface_linear_regime_single_facet(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["surface", "--p", "2", "--n", "64", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert len(payload["facets"]) == 1
    assert payload["n"] == 64 and payload["p"] == 2.0
    capsys.readouterr()


def test_torsion_signs_agree(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["torsion", "--p", "3", "--n", "40", "--out", str(out)]) == 0
    _, header, rows, _ = _read_csv(out)
    assert header == ["arc", "s", "closed", "numeric", "sign_match"]
    assert all(r[4] == 1.0 for r in rows)
    assert "0 sign mismatches" in capsys.readouterr().out


def test_report_bundle(tmp_path, capsys):
    outdir = tmp_path / "bundle"
    argv = [
        "report", "--p", "1.5", "--out", str(outdir), "--grid", "8", "--n", "20",
        "--count", "5", "--n-surface", "64", "--trials", "2000",
    ]
    assert main(argv) == 0
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["verify_passed"] is True
    expected = {
        "modulus.csv", "modulus.png", "torsion.csv", "torsion.png",
        "foliation.csv", "foliation.png", "surface.json", "surface.png",
        "verify.json",
    }
    assert set(summary["files"]) == expected
    for name in expected | {"summary.json"}:
        assert (outdir / name).stat().st_size > 0
    capsys.readouterr()


def test_outdir_environment_variable(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LPCONVEXITY_OUTDIR", str(tmp_path))
    assert main(["modulus-curve", "--p", "2", "--grid", "4"]) == 0
    assert (tmp_path / "modulus.csv").exists()
    capsys.readouterr()


def test_io_error_exit_code(tmp_path, capsys):
    missing = tmp_path / "no" / "such" / "dir" / "m.csv"
    assert main(["modulus-curve", "--p", "2", "--grid", "4", "--out", str(missing)]) == 3
    assert "io error" in capsys.readouterr().err
