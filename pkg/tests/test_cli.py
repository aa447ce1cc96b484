import json

import numpy as np
import pytest

from kposi import generators
from kposi.cli import main
from kposi.generators import fixture, gen_contractive_tp
from kposi.io import parse_matrix, write_matrix


@pytest.fixture
def files(tmp_path):
    def put(name, value, fmt="csv"):
        p = tmp_path / name
        if isinstance(value, str):
            p.write_text(value)
        else:
            write_matrix(np.atleast_2d(value), p, fmt)
        return str(p)
    return put


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(out):
    return json.loads(out)


def test_classify_intro(capsys, files):
    code, out, _ = run(capsys, "classify", files("a.csv", fixture("intro4")))
    r = report(out)
    assert code == 1  # not SSR overall
    verdicts = [c["verdict"] for c in r["results"]["classifications"]]
    assert verdicts == ["SR_not_SSR", "not_SR", "SSR", "SSR"]
    assert r["tolerance_profile"]["tau_zero"] == 1e-9
    assert r["inputs"] and all(v.startswith("sha256:") for v in r["inputs"].values())
    code, out, _ = run(capsys, "classify", files("a.csv", fixture("intro4")), "--k", "3")
    assert code == 0 and report(out)["results"]["classification"]["signature"] == 1


def test_classify_scalar_and_errors(capsys, files):
    code, out, _ = run(capsys, "classify", files("s.csv", "5\n"))
    c = report(out)["results"]["classifications"][0]
    assert code == 0 and c["verdict"] == "SSR" and c["signature"] == 1
    code, _, err = run(capsys, "classify", files("r.csv", "1,2\n3\n"))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "classify", files("r.csv", "1,2\n3,abc\n"))
    assert code == 2 and "column 2" in err
    code, _, _ = run(capsys, "classify")
    assert code == 2
    code, _, _ = run(capsys, "nosuchcommand")
    assert code == 2


def test_tolerance_flags(capsys, files, tmp_path, monkeypatch):
    prof = tmp_path / "tol.txt"
    prof.write_text("tau_zero=1e-3\ntau_rate=0.2\n")
    A = files("a.csv", [[1.0, 1.0], [1.0, 1.0001]])
    code, out, _ = run(capsys, "classify", A, "--tol-profile", str(prof))
    r = report(out)
    assert code == 1 and r["tolerance_profile"]["tau_zero"] == 1e-3
    code, out, _ = run(capsys, "classify", A, "--tol-profile", str(prof), "--tau-zero", "1e-9")
    assert code == 0 and report(out)["tolerance_profile"]["tau_rate"] == 0.2
    monkeypatch.setenv("KPOSI_TOL_PROFILE", str(prof))
    code, out, _ = run(capsys, "classify", A)
    assert code == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("tau_zero=-1\n")
    code, _, _ = run(capsys, "classify", A, "--tol-profile", str(bad))
    assert code == 2


def test_signvar(capsys, files):
    code, out, _ = run(capsys, "signvar", files("y.csv", "1,-1,0,-3.14159\n"), "--k", "2")
    r = report(out)["results"]
    assert code == 0 and (r["s_minus"], r["s_plus"]) == (1, 3)
    assert r["cone"]["in_P_minus"] and not r["cone"]["in_P_plus"]


def test_simulate(capsys, files, tmp_path):
    csv_out = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "simulate", files("a.csv", fixture("example1")), files("x.csv", "1,1,-1,1\n"),
                       "--steps", "20", "--k", "3", "--csv-out", str(csv_out))
    r = report(out)
    assert code == 0
    assert r["results"]["s_minus_x0"] == 2 and r["results"]["max_s_plus_after_step0"] <= 2
    lines = csv_out.read_text().strip().splitlines()
    assert len(lines) == 22 and lines[0].startswith("j,x_1")
    assert all(int(l.split(",")[-1]) <= 2 for l in lines[1:])


def test_simulate_trivial_and_mismatch(capsys, files):
    code, out, _ = run(capsys, "simulate", files("i.csv", np.eye(3)), files("x.csv", "1,-2,3\n"), "--steps", "4")
    r = report(out)["results"]
    assert code == 0 and len(set(r["s_plus_trace"])) == 1
    code, out, _ = run(capsys, "simulate", files("i.csv", np.eye(3)), files("x.csv", "1,-2,3\n"), "--steps", "0")
    assert report(out)["results"]["steps"] == 0
    code, _, _ = run(capsys, "simulate", files("i.csv", np.eye(3)), files("x.csv", "1,2\n"))
    assert code == 2


def test_separation(capsys, files):
    code, out, _ = run(capsys, "separation", files("a.csv", fixture("spectral4")), "--k", "3", "--trials", "10")
    r = report(out)
    assert code == 0
    ev = np.array(r["results"]["split"]["eigenvalues"])
    np.testing.assert_allclose(ev[:, 0], [5.8157, 3, 3, 0.1843], atol=5e-4)
    np.testing.assert_allclose(ev[:, 1], [0, 2.4348, -2.4348, 0], atol=5e-4)
    code, _, _ = run(capsys, "separation", files("b.csv", np.diag([3.0, 2.0, 1.0]) + 0.01), "--k", "1")
    assert code == 0


def test_separation_refusals(capsys, files):
    code, out, _ = run(capsys, "separation", files("c.csv", fixture("counter3")), "--k", "2")
    assert code == 1 and "error" in report(out)["results"]
    c, s = np.cos(0.7), np.sin(0.7)
    rot = [[3.0, 0, 0], [0, 2 * c, -2 * s], [0, 2 * s, 2 * c]]
    code, out, _ = run(capsys, "separation", files("r.csv", rot), "--k", "2", "--skip-ssr-check")
    r = report(out)["results"]
    assert code == 1 and r["moduli"][1] == pytest.approx(r["moduli"][2])


def test_wedge(capsys, files):
    code, out, _ = run(capsys, "wedge", files("a.csv", fixture("wedge3")),
                       files("e1", "1,0,0\n"), files("e2", "0,1,0\n"), "--steps", "15")
    r = report(out)["results"]
    assert code == 0
    np.testing.assert_allclose(r["eta_final"], [0.0057, 0.0139, 0.0083], atol=5e-4)
    np.testing.assert_allclose(r["eta_wedged_final"], [0.0057, 0.0139, 0.0083], atol=5e-4)
    np.testing.assert_allclose(r["predicted_eta_final"], [0.0051, 0.0137, 0.0086], atol=5e-4)
    assert len(r["scaled_error"]) == 16


def test_wedge_identity_and_contractive(capsys, files):
    code, out, _ = run(capsys, "wedge", files("i.csv", np.eye(3)), files("a", "1,2,3\n"), files("b", "0,1,1\n"))
    eta = np.array(report(out)["results"]["eta"])
    assert code == 0 and np.allclose(eta, eta[0])
    A = gen_contractive_tp(3, rng_seed=1)
    code, out, _ = run(capsys, "wedge", files("c.csv", A), files("a", "1,0,0\n"), files("b", "0,1,0\n"),
                       "--steps", "300")
    norms = report(out)["results"]["eta_norm"]
    assert code == 0 and min(norms) < 1e-6


def test_compound(capsys, files):
    code, out, _ = run(capsys, "compound", files("a.csv", fixture("wedge3")), "--k", "2")
    r = report(out)["results"]
    assert code == 0 and r["row_sequences"] == [[1, 2], [1, 3], [2, 3]]
    np.testing.assert_allclose(r["data"], [[0.612, 0.078, 0.012], [0.077, 0.703, 0.177], [0.002, 0.088, 0.702]],
                               atol=5e-4)


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--kind", "totally_positive", "--n", "4", "--seed", "3")
    assert code == 0 and parse_matrix(out).shape == (4, 4)
    code, out, _ = run(capsys, "gen", "--kind", "fixture", "--name", "intro4", "--format", "json")
    assert code == 0 and json.loads(out)["data"][2][3] == 0.1
    p = tmp_path / "g.csv"
    code, _, _ = run(capsys, "gen", "--kind", "ssr_k_only", "--n", "4", "--k", "2", "--out", str(p))
    assert code == 0 and parse_matrix(p.read_text()).shape == (4, 4)
    code, _, _ = run(capsys, "gen", "--kind", "ssr_k_only", "--n", "4")
    assert code == 2
    code, _, _ = run(capsys, "gen", "--kind", "ssr_k_only", "--n", "2", "--k", "1")
    assert code == 1


def test_selftest_passes_and_is_deterministic(capsys):
    code, out1, _ = run(capsys, "selftest")
    code2, out2, _ = run(capsys, "selftest")
    r1, r2 = report(out1), report(out2)
    assert code == code2 == 0
    assert not r1["results"]["failures"]
    r1.pop("duration_s"), r2.pop("duration_s")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_selftest_detects_corrupted_fixture(capsys, monkeypatch):
    corrupted = dict(generators._FIXTURES)
    corrupted["wedge3"] = [[0.8, 0.2, 0.01], [0.1, 0.8, 0.1], [0.01, 0.1, 0.89]]
    corrupted["intro4"] = [[1, 2, 0], [0, 1, 1]]
    monkeypatch.setattr(generators, "_FIXTURES", corrupted)
    code, out, _ = run(capsys, "selftest")
    failures = report(out)["results"]["failures"]
    assert code == 1
    assert any(f.startswith("wedge3") for f in failures)
    assert any(f.startswith("intro4") for f in failures)
