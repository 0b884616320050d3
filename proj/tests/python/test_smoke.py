import json
import os
import subprocess

import pytest

import charvar

SPHERE = {
    "points": [0, 1, [0.3, 0.4]],
    "orders": [3, 0, 0],
    "order_infinity": 0,
    "accessory": [[0.1, 0.2]],
}


def test_version():
    assert charvar.__version__ == "0.1.0"


def test_parse_word_and_fox():
    assert charvar.parse_word("a1 a1^-1") == "1"
    assert charvar.parse_word("c2^2") == "c2 c2"
    sig = json.dumps({"g": 1, "elliptic": [], "cusps": 0})
    assert sorted(charvar.fox(sig, "R", "a1")) == [("1", 1), ("a1 b1 a1^-1", -1)]
    with pytest.raises(ValueError):
        charvar.parse_word("a3", sig)


def test_identities():
    report = charvar.identities({"g": 2, "elliptic": [3], "cusps": 1})
    assert report["all_required_pass"]
    failing = {c["identity"] for c in report["checks"] if c["status"] != "pass"}
    assert all(not c["required"] for c in report["checks"] if c["identity"] in failing)


def test_killing_and_adjoint():
    assert charvar.killing([1, 0, 0], [0, 0, 1]) == -1
    assert charvar.killing([0, 1, 0], [0, 1, 0]) == 0.5
    image = charvar.adjoint_action([1, 1, 0, 1], [0, 0, 1])
    assert max(abs(a - b) for a, b in zip(image, [1, -2, 1])) < 1e-14


def test_monodromy_and_goldman_of_coboundary():
    result = charvar.monodromy(SPHERE)
    assert result["relation_residual"] < 1e-6
    rep = result["representation"]
    p = [0.3 + 0.1j, -0.2j, 0.5]
    values = {}
    for name, m in rep["images"].items():
        g = [complex(*z) for z in m]
        gp = charvar.adjoint_action(g, p)
        values[name] = [[(a - b).real, (a - b).imag] for a, b in zip(gp, p)]
    bundle = {"representation": rep, "cocycle1": values, "cocycle2": values}
    assert abs(charvar.goldman(bundle)) < 1e-9


def test_run_exit_codes():
    code, report, _ = charvar.run(["monodromy", "--json", json.dumps(SPHERE)])
    assert code == 0
    assert json.loads(report)["status"] == "ok"
    code, _, _ = charvar.run(["kawai", "--config", "/nonexistent/missing.json"])
    assert code == 1
    code, report, _ = charvar.run(["monodromy", "--json", json.dumps(SPHERE), "--tol", "relation=1e-30"])
    assert code == 2
    assert json.loads(report)["failures"]


@pytest.mark.skipif("CHARVAR_CLI" not in os.environ, reason="executable path not provided")
def test_executable_matches_module():
    args = ["identities", "--sig", json.dumps({"g": 1, "elliptic": [], "cusps": 2})]
    out = subprocess.run([os.environ["CHARVAR_CLI"], *args], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == charvar.run(args)[1].strip()
