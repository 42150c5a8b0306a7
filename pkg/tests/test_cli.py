import json

import numpy as np
import pytest

from centroflow import Polygon, compute_signature
from centroflow.cli import main
from centroflow.io import load_polygon, save_polygon
from centroflow.tables import TABLE1_POINTS, TABLE2_POINTS


def write(tmp_path, name, points, closed=True):
    path = tmp_path / name
    save_polygon(Polygon(points, closed), path)
    return str(path)


def test_invariants_prints_table_and_csv(tmp_path, capsys):
    src = write(tmp_path, "t1.json", TABLE1_POINTS)
    out_csv = tmp_path / "sig.csv"
    assert main(["invariants", src, "--csv", str(out_csv)]) == 0
    text = capsys.readouterr().out
    assert "0.3529" in text and "6.7931" in text and "-0.1822" in text
    assert out_csv.read_text().startswith("vertex,kappa,kappa_bar,tau\n0,")


def test_invariants_of_square_have_zero_second_curvature(tmp_path, capsys):
    assert main(["invariants", write(tmp_path, "sq.json", [(0, 0), (1, 0), (1, 1), (0, 1)])]) == 0
    kbar_row = [l for l in capsys.readouterr().out.splitlines() if l.startswith("kappa_bar")][0]
    assert kbar_row.split()[1:] == ["0.0000"] * 4


def test_degenerate_input_exits_with_error(tmp_path, capsys):
    assert main(["invariants", write(tmp_path, "d.json", [(0, 0), (1, 0), (2, 0), (1, 1)])]) == 2
    assert "DegenerateDeterminant" in capsys.readouterr().err


def test_missing_file_and_bad_usage(tmp_path):
    assert main(["invariants", str(tmp_path / "nope.json")]) == 2
    assert main(["frobnicate"]) == 2


def test_flow_writes_trace_and_is_deterministic(tmp_path, capsys):
    src = write(tmp_path, "t2.json", TABLE2_POINTS)
    for out in ("a", "b"):
        args = ["flow", "--kind", "proportional", "--param", "alpha=0.8", "--gens", "80",
                "--input", src, "--out", str(tmp_path / out), "--svg"]
        assert main(args) == 0
    last = sorted((tmp_path / "a").glob("gen_*.csv"))[-1]
    assert last.read_bytes() == (tmp_path / "b" / last.name).read_bytes()
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["flow"] == "proportional" and summary["max_cross_check"] < 1e-8
    final = load_polygon(sorted((tmp_path / "a").glob("gen_*.json"))[-1])
    sig = compute_signature(final)
    assert np.allclose(sig.kappa, 1, atol=1e-3)
    assert np.allclose(sig.kappa_bar, 2 * np.cos(2 * np.pi / 7), atol=1e-3)
    assert (tmp_path / "a" / "gen_0000.svg").exists()


def test_flow_from_seed_is_deterministic(tmp_path):
    for out in ("a", "b"):
        assert main(["flow", "--kind", "endpoint", "--param", "c=0.2", "--gens", "30", "--seed", "7",
                     "--out", str(tmp_path / out)]) == 0
    assert (tmp_path / "a" / "gen_0030.csv").read_bytes() == (tmp_path / "b" / "gen_0030.csv").read_bytes()


def test_pentagram_on_regular_pentagon_reports_stability(tmp_path, capsys):
    assert main(["generate", "--p", "5", "--out", str(tmp_path / "r5.json")]) == 0
    assert main(["flow", "--kind", "pentagram", "--input", str(tmp_path / "r5.json"),
                 "--out", str(tmp_path / "run")]) == 0
    assert "stable at generation 0" in capsys.readouterr().out


def test_flow_domain_error_exits_nonzero(tmp_path):
    star = tmp_path / "star.json"
    assert main(["generate", "--p", "5", "--l", "2", "--out", str(star)]) == 0
    assert main(["flow", "--kind", "pentagram", "--input", str(star), "--out", str(tmp_path / "x")]) == 2
    assert main(["flow", "--kind", "proportional", "--param", "alpha=2", "--out", str(tmp_path / "y")]) == 2
    assert main(["flow", "--kind", "proportional", "--param", "alpha", "--out", str(tmp_path / "z")]) == 2


def test_match_exit_codes(tmp_path, capsys, rng):
    P = Polygon(rng.uniform(-5, 5, (6, 2)))
    A = np.array([[2.0, 1.0], [0.5, 1.5]])
    p = write(tmp_path, "p.json", P.vertices)
    q = write(tmp_path, "q.json", P.transformed(A, (3, 4)).vertices)
    r = write(tmp_path, "r.json", rng.uniform(-5, 5, (6, 2)))
    s = write(tmp_path, "s.json", rng.uniform(-5, 5, (7, 2)))
    assert main(["match", p, q, "--mode", "affine2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert np.allclose(report["transform"]["linear"], A, atol=1e-6)
    assert main(["match", p, r]) == 1
    assert main(["match", p, s]) == 2


def test_match_respects_tolerance_variable(tmp_path, monkeypatch, rng):
    P = Polygon(rng.uniform(-5, 5, (6, 2)))
    p = write(tmp_path, "p.json", P.vertices)
    q = write(tmp_path, "q.json", P.transformed([[1.3, 0.4], [-0.2, 0.9]], (1, 1)).vertices)
    assert main(["match", p, q]) == 0
    monkeypatch.setenv("CENTROFLOW_TOLERANCE", "1e-30")
    assert main(["match", p, q]) == 1


def test_generate_regular_and_constant_space(tmp_path, capsys):
    assert main(["generate", "--kind", "regular", "--p", "7"]) == 0
    P = Polygon(json.loads(capsys.readouterr().out)["vertices"])
    sig = compute_signature(P)
    assert np.allclose(sig.kappa, 1) and np.allclose(sig.kappa_bar, 1.2469796, atol=1e-6)
    assert main(["generate", "--kind", "constant-space", "--p", "8", "--l", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["dimension"] == 3
    assert main(["generate", "--p", "6", "--l", "2"]) == 2


@pytest.mark.parametrize("table", ["1", "4"])
def test_reproduce_passes(table, capsys):
    assert main(["reproduce", "--table", table]) == 0
    assert f"table {table}: PASS" in capsys.readouterr().out


def test_reproduce_flags_convex_endpoint_variant(capsys):
    assert main(["reproduce", "--table", "5", "--variant", "convex"]) == 1
    assert "does not reproduce" in capsys.readouterr().out


def test_check_reports_closure_and_convexity(tmp_path, capsys):
    assert main(["check", write(tmp_path, "sq.json", [(0, 0), (1, 0), (1, 1), (0, 1)])]) == 0
    out = capsys.readouterr().out
    assert "chain closes: True" in out and "convex: True" in out and "centrosymmetric" in out
