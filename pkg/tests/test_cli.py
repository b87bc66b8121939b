import csv
import io
import json
import os
import subprocess
import sys

import pytest

from fractal_coherence.cli import main
from fractal_coherence.generators import tree_like
from fractal_coherence.graph import parse_edgelist
from fractal_coherence.pipeline import eigen_report
from fractal_coherence.spectral import spectrum


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _strip_manifest(text):
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("# manifest"))


def test_generate_vicsek_header(capsys):
    code, out, _ = run(capsys, "generate", "--family", "vicsek", "--v", "4", "--g", "2")
    assert code == 0
    assert out.splitlines()[0] == "25 24"
    assert len(out.splitlines()) == 25


def test_generate_with_manifest_still_parses(capsys, tmp_path):
    dest = tmp_path / "g.txt"
    code, _, _ = run(capsys, "generate", "--family", "tree", "--m", "1", "--g", "2", "--manifest", "--output", str(dest))
    assert code == 0
    text = dest.read_text()
    assert text.splitlines()[-1].startswith("# manifest ")
    assert parse_edgelist(text).num_nodes == 10


def test_round_trip_matches_in_process_pipeline(capsys, tmp_path):
    dest = tmp_path / "t.txt"
    assert run(capsys, "generate", "--family", "tree", "--m", "2", "--g", "3", "--output", str(dest))[0] == 0
    code, out, _ = run(capsys, "spectrum", "--input", str(dest))
    assert code == 0
    spec_json = json.loads(out)
    direct = spectrum(tree_like(2, 3))
    assert spec_json["S"] == direct.S and spec_json["S2"] == direct.S2
    assert spec_json["eigenvalues"] == [float(x) for x in direct.eigenvalues]

    code, out, _ = run(capsys, "coherence", "--input", str(dest), "--beta", "1.5")
    rep = json.loads(out)["reports"][0]
    ref = eigen_report(tree_like(2, 3), 1.5)
    assert rep["H_FO"] == ref.H_FO and rep["H_SO"] == ref.H_SO


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "path", "--n", "2", "--csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(_strip_manifest(out))))
    assert [float(r["eigenvalue"]) for r in rows] == pytest.approx([0.0, 2.0], abs=1e-14)


def test_coherence_all_routes(capsys):
    code, out, _ = run(capsys, "coherence", "--family", "tree", "--m", "2", "--g", "3",
                       "--beta", "1", "--order", "both", "--route", "all")
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    routes = {r["route"] for r in data["reports"]}
    assert routes == {"eigen", "tree_recursion", "lyapunov"}
    rec = next(r for r in data["reports"] if r["route"] == "tree_recursion")
    assert rec["exact"]["S"] == "11584/65"
    assert "simulate" in data["skipped"]
    assert data["manifest"]["subcommand"] == "coherence"


def test_coherence_csv_has_fixed_columns(capsys):
    code, out, _ = run(capsys, "coherence", "--family", "vicsek", "--v", "4", "--g", "2",
                       "--route", "recursion", "--csv")
    assert code == 0
    body = _strip_manifest(out).splitlines()
    assert body[0] == "label,route,N,M,beta,S,S2,H_FO,H_SO,R_total,F_gmfpt,wiener"
    row = next(csv.DictReader(io.StringIO("\n".join(body))))
    assert row["label"] == "vicsek(v=4,g=2)" and row["S"] == "59.2"


def test_recursion_route_at_large_n_without_eigensolve(capsys):
    code, out, _ = run(capsys, "coherence", "--family", "vicsek", "--v", "4", "--g", "9", "--route", "recursion")
    assert code == 0
    assert json.loads(out)["reports"][0]["N"] == 5**9


def test_simulate_output_and_reproducibility(capsys):
    args = ("simulate", "--family", "ring", "--n", "4", "--order", "first",
            "--replicates", "4", "--seed", "9")
    code, out1, _ = run(capsys, *args)
    assert code == 0
    _, out2, _ = run(capsys, *args)
    e1, e2 = json.loads(out1)["estimates"]["first"], json.loads(out2)["estimates"]["first"]
    assert e1["h_hat"] == e2["h_hat"]
    assert e1["analytic"] == pytest.approx(5 / 4 / 8)
    assert set(e1) >= {"h_hat", "stderr", "analytic", "z_score"}


def test_sweep_csv_and_fit(capsys, tmp_path):
    fit_path = tmp_path / "fit.json"
    code, out, _ = run(capsys, "sweep", "--family", "tree", "--param", "2", "--g-min", "2", "--g-max", "7",
                       "--fit-output", str(fit_path), "--jobs", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(_strip_manifest(out))))
    assert [int(r["g"]) for r in rows] == list(range(2, 8))
    assert list(rows[0]) == ["family", "param", "g", "N", "S", "S2", "H_FO", "H_SO", "route"]
    fit = json.loads(fit_path.read_text())
    assert fit["fits"]["H_FO"]["exponent"] == pytest.approx(0.5, rel=0.05)
    assert fit["predicted"]["H_SO"] == pytest.approx(2.0)


def test_dimension(capsys):
    code, out, _ = run(capsys, "dimension", "--family", "ring", "--n", "256")
    assert code == 0
    data = json.loads(out)
    assert data["ball_growth"]["d_f"] == pytest.approx(1.0, rel=0.1)
    assert data["analytic"]["d_s"] == 1.0


def test_verify_vicsek(capsys):
    code, out, _ = run(capsys, "verify", "vicsek", "--v", "4", "--g-max", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# manifest")
    assert all(ln.startswith(("[PASS]", "[INFO]")) for ln in lines[1:-1])
    assert lines[-1].startswith("ALL PASSED")


def test_verify_tree(capsys):
    code, out, _ = run(capsys, "verify", "tree", "--m", "1", "--g-max", "6")
    assert code == 0 and "[FAIL]" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["coherence", "--family", "tree", "--m", "2", "--bogus"],
        ["coherence", "--family", "tree", "--m", "2"],
        ["generate", "--family", "torus", "--n", "2"],
        ["coherence", "--family", "ring", "--n", "5", "--beta", "-1"],
        ["coherence", "--family", "ring", "--n", "5", "--route", "recursion"],
        ["sweep", "--family", "tree", "--g-min", "1", "--g-max", "3"],
        ["spectrum", "--input", "/nonexistent/file.txt"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_malformed_edgelist_exit_1(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("3 2\n0 1\n")
    code, _, err = run(capsys, "spectrum", "--input", str(p))
    assert code == 1 and "declares 2 edges" in err


def test_cap_flag_override(capsys, monkeypatch):
    monkeypatch.delenv("FRACTAL_COHERENCE_MAX_EIGEN_NODES", raising=False)
    code, _, err = run(capsys, "--max-eigen-nodes", "10", "spectrum", "--family", "ring", "--n", "20")
    assert code == 1 and "cap" in err
    assert "FRACTAL_COHERENCE_MAX_EIGEN_NODES" not in os.environ


def test_cap_flag_restores_existing_value(capsys, monkeypatch):
    monkeypatch.setenv("FRACTAL_COHERENCE_MAX_NODES", "123456")
    code, _, _ = run(capsys, "--max-nodes", "50", "generate", "--family", "ring", "--n", "40")
    assert code == 0
    assert os.environ["FRACTAL_COHERENCE_MAX_NODES"] == "123456"


def test_route_mismatch_exits_2(capsys, monkeypatch):
    import fractal_coherence.pipeline as pipeline

    monkeypatch.setattr(pipeline, "LYAPUNOV_RTOL", -1.0)
    code, _, err = run(capsys, "coherence", "--family", "ring", "--n", "6", "--route", "all")
    assert code == 2
    assert "route mismatch" in err


def test_identical_manifest_identical_numbers(capsys):
    args = ("coherence", "--family", "vicsek", "--v", "3", "--g", "3", "--route", "all")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    da, db = json.loads(a), json.loads(b)
    for d in (da, db):
        d["manifest"].pop("timestamp")
    assert da == db


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "fractal_coherence", "generate", "--family", "path", "--n", "3"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert res.stdout == "3 2\n0 1\n1 2\n"
