import json

import pytest

from isokit.cli import main

STD5 = {"n": 5, "alphas": ["1", "1", "1"]}


def e(i, n=5):
    return [str(int(k == i - 1)) for k in range(n)]


@pytest.fixture
def ws(tmp_path):
    def put(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    put.dir = tmp_path
    put("std5.json", STD5)
    return put


def run(*args):
    return main([str(a) for a in args])


def run_verified(ws, *args, code=0):
    out = str(ws.dir / "cert.json")
    assert run(*args, "-o", out) == code
    assert run("verify", out) == 0
    return json.loads(open(out).read())


def test_witt_extend(ws, capsys):
    v = ws("v.json", {"sources": [e(5)], "targets": [e(4)]})
    cert = run_verified(ws, "witt-extend", ws("f.json", STD5), v)
    assert cert["kind"] == "witt" and cert["map"]["det"] == "-1"
    bad = ws("bad.json", {"sources": [e(1), e(3)], "targets": [e(1), e(2)]})
    assert run("witt-extend", ws.dir / "std5.json", bad) == 2
    assert "gram mismatch at (1,2)" in capsys.readouterr().err
    assert run("witt-extend", ws.dir / "missing.json", v) == 2


def test_lift(ws, capsys):
    v = ws("v.json", {"sources": [e(3)], "targets": [e(4)]})
    f = ws.dir / "std5.json"
    cert = run_verified(ws, "lift", f, v, "--prime", 3, "--precision", 10)
    assert cert["N"] == 10
    cert = run_verified(ws, "lift", f, v, "--prime", 3, "--precision", 10, "--special")
    assert cert["checks"]["det"] == "+1"
    assert run("lift", f, v, "--prime", 2, "--precision", 4) == 2
    assert "p=2 unsupported" in capsys.readouterr().err
    three = ws("v3.json", {"sources": [e(3), e(4), e(5)], "targets": [e(3), e(4), e(5)]})
    assert run("lift", f, three, "--prime", 3, "--precision", 4, "--special") == 2
    f3 = ws("f3.json", {"alphas": ["3", "1", "1"]})
    assert run("lift", f3, v, "--prime", 3, "--precision", 4) == 2
    assert "alpha_3 = 3" in capsys.readouterr().err
    assert run("lift", f, v, "--prime", 3) == 2


def test_lift_deterministic(ws):
    v = ws("v.json", {"sources": [e(3)], "targets": [e(4)]})
    f = ws.dir / "std5.json"
    a, b = ws.dir / "a.json", ws.dir / "b.json"
    assert run("lift", f, v, "--prime", 5, "--precision", 12, "-o", a) == 0
    assert run("lift", f, v, "--prime", 5, "--precision", 12, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_orbit(ws):
    f = ws.dir / "std5.json"
    yes = ws("y.json", {"a": e(3), "b": e(4)})
    run_verified(ws, "orbit-test", f, yes, "--prime", 3, "--precision", 6)
    no = ws("n.json", {"a": e(1), "b": ["3", "0", "0", "0", "0"]})
    cert = run_verified(ws, "orbit-test", f, no, "--prime", 3, "--precision", 6, code=1)
    assert cert["exists"] is False and cert["levels"] == [0, 1]


def test_borovoi(ws, capsys):
    f = ws.dir / "std5.json"
    ident = ws("id.json", {"matrix": [e(i) for i in range(1, 6)]})
    cert = run_verified(ws, "borovoi", f, ident)
    assert cert["denominator_lcm"] == 1
    run_verified(ws, "borovoi", f, "--seed", 4, "--length", 1)
    refl = [e(i) for i in range(1, 6)]
    refl[2] = ["0", "0", "-1", "0", "0"]
    assert run("borovoi", f, ws("r.json", {"matrix": refl})) == 1
    hr = [e(i) for i in range(1, 6)]
    hr[0], hr[1] = ["2", "0", "0", "0", "0"], ["0", "1/2", "0", "0", "0"]
    assert run("borovoi", f, ws("h.json", {"matrix": hr})) == 1
    assert "spinor norm 2" in capsys.readouterr().out
    assert run("borovoi", f) == 2


def test_borovoi_local(ws):
    f = ws.dir / "std5.json"
    ident = ws("id.json", {"matrix": [e(i) for i in range(1, 6)]})
    cert = run_verified(ws, "borovoi", f, ident, "--local", 5, 8)
    assert cert["local"]["certified"] == 6


def test_sap(ws, capsys):
    q3 = ws("q3.json", {"gram": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-2"]]})
    cert = run_verified(ws, "sap", q3, "1", "real", "1,0,0", code=1)
    assert cert["verdict"]["holds"] is False
    q4 = ws("q4.json", {"gram": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"],
                                 ["0", "0", "0", "-1"]]})
    run_verified(ws, "sap", q4, "1", "real", "1,0,0,0")
    sph = ws("s.json", {"gram": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    assert run("sap", sph, "1", "real", "1,0,0") == 2
    assert "hypothesis Q_S noncompact fails" in capsys.readouterr().err
    assert run("sap", q3, "1", "real", "1,1,0") == 2


def test_invariants_and_normalize(ws):
    run_verified(ws, "invariants", ws.dir / "std5.json", "--places", "real,2,3")
    g = ws("g.json", {"gram": [[str(int(i == j) * (1 if i < 3 else -1)) for j in range(5)] for i in range(5)]})
    run_verified(ws, "form-normalize", g)


def test_verify_errors(ws):
    v = ws("v.json", {"sources": [e(5)], "targets": [e(4)]})
    out = ws.dir / "c.json"
    assert run("witt-extend", ws.dir / "std5.json", v, "-o", out) == 0
    text = out.read_text()
    trunc = ws("t.json", text[: len(text) // 2])
    assert run("verify", trunc) == 2
    assert run("verify", ws("k.json", {"kind": "nope"})) == 2
    assert run("verify", ws("l.json", [1, 2])) == 2
    cert = json.loads(text)
    cert["map"]["matrix"][0][0] = "2"
    assert run("verify", ws("p.json", cert)) == 1


def test_usage_errors():
    assert run("bogus") == 2
    assert run() == 2
    assert run("--version") == 0


def test_selftest(capsys):
    assert run("selftest", "--seed", 1) == 0
    assert "FAIL" not in capsys.readouterr().out
