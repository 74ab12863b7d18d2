import json
import shutil

import pytest

from templexkit.cli import main
from templexkit.fixtures import fixture_path, write_fixtures


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_rossler(capsys):
    code, out, _ = run(capsys, "analyze", fixture_path("rossler"), "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["homology"]["betti"] == [1, 1, 0]
    assert [c["orientation"] for c in rep["classes"]] == ["preserving", "reversing"]
    assert [(b["label"], b["valence"]) for b in rep["bonds"]] == [("B12", 2)]


def test_analyze_gyre_text(capsys):
    code, out, _ = run(capsys, "analyze", fixture_path("gyre"))
    assert code == 0
    assert "generatex classes: 6" in out and "valence 6" in out and "valence 5" in out
    assert "⟨4|1⟩" in out and "⟨16|1⟩" in out


def test_text_and_json_share_the_report(capsys):
    _, js, _ = run(capsys, "analyze", fixture_path("lorenz"), "--json")
    _, text, _ = run(capsys, "analyze", fixture_path("lorenz"))
    rep = json.loads(js)
    assert json.loads(json.dumps(rep)) == rep
    for g in rep["classes"]:
        assert g["signature"] in text
    from templexkit.report import render_text
    assert render_text(rep) == text.rstrip("\n")


def test_output_is_deterministic(capsys):
    outs = {run(capsys, "analyze", fixture_path("speech"), "--json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_empty_digraph(tmp_path, capsys):
    p = tmp_path / "e.json"
    p.write_text('{"nodes": [], "edges": []}')
    code, out, _ = run(capsys, "analyze", p, "--json")
    assert code == 0 and json.loads(out)["classes"] == []


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "tipping", fixture_path("rossler"), "x.csv")[0] == 1
    assert run(capsys, "export", fixture_path("rossler"))[0] == 1
    assert run(capsys)[0] == 1


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": [1], "edges": [[1]]}')
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and "edges[0]" in err and "bad.json" in err
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 2
    code, _, err = run(capsys, "homology", fixture_path("speech"))
    assert code == 2 and "no complex" in err


def test_cap_exit_3(capsys, monkeypatch):
    assert run(capsys, "genex", fixture_path("gyre"), "--cap", "2")[0] == 3
    monkeypatch.setenv("TEMPLEXKIT_CYCLE_CAP", "2")
    code, _, err = run(capsys, "analyze", fixture_path("gyre"))
    assert code == 3 and "TEMPLEXKIT_CYCLE_CAP" in err


def test_homology_and_templex_info(capsys):
    code, out, _ = run(capsys, "homology", fixture_path("klein"), "--json")
    rep = json.loads(out)
    assert code == 0 and rep["torsion"][1] == [2] and rep["orientable"] is False
    code, out, _ = run(capsys, "homology", fixture_path("lorenz"))
    assert "H1 = ℤ^2" in out
    code, out, _ = run(capsys, "templex", "info", fixture_path("lorenz"), "--json")
    rep = json.loads(out)
    assert [L["kind"] for L in rep["loci"]] == ["joining", "joining"]
    assert rep["poincare_edges"] == ["⟨3|1⟩", "⟨4|5⟩", "⟨7|5⟩", "⟨8|1⟩"]


def test_genex_dot_and_pushouts(capsys):
    code, out, _ = run(capsys, "genex", fixture_path("rossler"), "--dot")
    assert code == 0 and out.startswith('digraph "rossler"') and out.count('"1" -> "2"') == 2
    code, out, _ = run(capsys, "genex", fixture_path("speech"), "--json", "--pushouts")
    rep = json.loads(out)
    assert rep["pushouts"][0]["full"]["classes"] == [1, 2, 3]


def test_export(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    assert run(capsys, "export", fixture_path("gyre"), "--dot", "-o", dot)[0] == 0
    assert dot.read_text().count("->") == sum(len(c) for c in
                                              [[1, 2, 3, 4], [1, 2, 3, 5, 6, 17, 18, 19, 20, 21, 22],
                                               [1, 2, 3, 5, 6, 12, 13], [1, 2, 3, 5, 6, 7, 8],
                                               [1, 2, 3, 5, 6, 9, 10, 11], [1, 2, 3, 5, 6, 14, 15, 16]])
    code, out, _ = run(capsys, "export", fixture_path("gyre"), "--json")
    assert len(json.loads(out)["classes"]) == 6


def test_fixture_checks(tmp_path, capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == 0 and "25/25 checks passed" in out
    code, out, _ = run(capsys, "fixtures", "--filter", "speech", "--json")
    res = json.loads(out)
    assert code == 0 and {r["fixture"] for r in res} == {"speech"}


def test_corrupted_fixture_fails_with_diff(tmp_path, capsys):
    write_fixtures(tmp_path)
    doc = json.loads((tmp_path / "lorenz.json").read_text())
    doc["edges"].remove(["6", "8"])
    (tmp_path / "lorenz.json").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "fixtures", "--dir", tmp_path, "--filter", "lorenz")
    assert code == 2
    assert "FAIL lorenz: class count" in out and "expected: 3" in out


def test_simulate_embed_tmv_tipping(tmp_path, capsys):
    traj, it = tmp_path / "r.csv", tmp_path / "it.csv"
    code, _, _ = run(capsys, "simulate", "rossler", "-o", traj, "--t-span", 300, "--strip-itinerary", it)
    assert code == 0
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["settings"]["dt"] == 0.01 and "created" in meta
    code, out, _ = run(capsys, "tmv", fixture_path("rossler"), it, "--json")
    rep = json.loads(out)["tmv"]
    assert code == 0 and set(rep["counts"]) == {"1", "2"}
    code, out, _ = run(capsys, "tipping", fixture_path("rossler"), it, "--window", 50, "--stride", 25)
    assert code == 0 and "windows" in out
    assert run(capsys, "tipping", fixture_path("rossler"), it, "--window", 1e6, "--stride", 1)[0] == 2
    emb = tmp_path / "e.csv"
    code, out, _ = run(capsys, "embed", traj, "-o", emb, "--tau", 10, "--dim", 3, "--column", 1)
    assert code == 0 and "dimension 3" in out
    assert run(capsys, "embed", traj, "-o", emb, "--tau", 10, "--column", 9)[0] == 1
    assert run(capsys, "simulate", "rossler", "-o", traj, "--param", "a")[0] == 1


def test_tmv_step_series(tmp_path, capsys):
    it = tmp_path / "it.csv"
    run(capsys, "simulate", "lorenz", "-o", tmp_path / "l.csv", "--t-span", 40, "--strip-itinerary", it)
    out = tmp_path / "chi.csv"
    assert run(capsys, "tmv", fixture_path("lorenz"), it, "--plot", out)[0] == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "time,label"
    times = [float(r.split(",")[0]) for r in rows[1:]]
    assert len(rows) > 3 and times == sorted(times)
    assert {int(r.split(",")[1]) for r in rows[1:]} <= {1, 2, 3}


def test_tmv_plot(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    it = tmp_path / "it.csv"
    run(capsys, "simulate", "lorenz", "-o", tmp_path / "l.csv", "--t-span", 40, "--strip-itinerary", it)
    png = tmp_path / "chi.png"
    assert run(capsys, "tmv", fixture_path("lorenz"), it, "--plot", png)[0] == 0
    assert png.stat().st_size > 0


def test_build(tmp_path, capsys):
    import numpy as np
    from templexkit.ingest import Trajectory, write_trajectory_csv
    rng = np.random.default_rng(0)
    n = 4000
    th, r = np.linspace(0, 40 * np.pi, n), 1 + 0.5 * rng.random(n)
    write_trajectory_csv(Trajectory(np.arange(float(n)), np.c_[r * np.cos(th), r * np.sin(th),
                                                              0.01 * rng.standard_normal(n)]), tmp_path / "a.csv")
    out = tmp_path / "a.json"
    code, _, _ = run(capsys, "build", tmp_path / "a.csv", "-o", out, "--cells", 4, "--landmarks", 200,
                     "--charts", tmp_path / "c.json", "--itinerary", tmp_path / "i.csv")
    assert code == 0
    code, txt, _ = run(capsys, "homology", out)
    assert "betti: (1, 1, 0)" in txt
    assert (tmp_path / "c.json").exists() and (tmp_path / "i.csv").exists()


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "templexkit", "fixtures", "--filter", "klein"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS klein: H1 torsion" in proc.stdout
    exe = shutil.which("templexkit")
    if exe:
        assert subprocess.run([exe, "--version"], capture_output=True).returncode == 0
