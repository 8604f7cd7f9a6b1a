import json

import pytest

from valinf.cli import main

SCENARIO = {
    "format": 1,
    "valuations": {
        "m1": {"kind": "monomial", "s": "-1", "t": "1"},
        "m0": {"kind": "monomial", "s": "-1", "t": "0"},
        "root": {"kind": "root"},
        "c1": {"kind": "curve", "base": {"chart": "y"}, "m": 3,
               "coefficients": {"1": "1"}, "K": 4, "exact": True},
    },
    "polynomials": {"Q": "y^2-x^3", "H": "x*y-1"},
    "options": {"max_degree": 6},
}

ALGEBRAIZE = {
    "format": 1,
    "algebraize": {
        "branches": [{"polynomial": "y^2-x^3", "primes": [2, 3]}],
        "points": [[str(n * n), str(n ** 3)] for n in range(2, 13)],
        "max_degree": 6,
    },
}


@pytest.fixture
def scfile(tmp_path):
    p = tmp_path / "scenario.json"
    p.write_text(json.dumps(SCENARIO))
    return str(p)


@pytest.fixture
def algfile(tmp_path):
    p = tmp_path / "alg.json"
    p.write_text(json.dumps(ALGEBRAIZE))
    return str(p)


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_skewness(scfile, capsys):
    rc, out, _ = run(capsys, "skewness", "-f", scfile)
    assert rc == 0
    assert "m1: alpha = -1" in out
    assert "c1: alpha = -inf" in out
    assert "root: alpha = 1" in out


def test_thinness_json(scfile, capsys):
    rc, out, _ = run(capsys, "thinness", "-f", scfile, "--json", "m0", "root")
    assert rc == 0
    data = json.loads(out)
    assert data["thinness"] == {"m0": "-1", "root": "-2"}


def test_meet(scfile, capsys):
    rc, out, _ = run(capsys, "meet", "-f", scfile, "m1", "m0")
    assert rc == 0
    assert "alpha = 0" in out


def test_eval(scfile, capsys):
    rc, out, _ = run(capsys, "eval", "-f", scfile, "c1", "Q")
    assert rc == 0
    assert "+inf" in out


def test_matrix(scfile, capsys):
    rc, out, _ = run(capsys, "matrix", "-f", scfile, "--json", "m1", "m0")
    assert rc == 0
    data = json.loads(out)
    assert data["matrix"] == [["-1", "0"], ["0", "0"]]


def test_chi_verdicts(scfile, capsys):
    rc, out, _ = run(capsys, "chi", "-f", scfile, "m1")
    assert rc == 0 and "rich" in out
    rc, out, _ = run(capsys, "chi", "-f", scfile, "root")
    assert rc == 0 and "not rich" in out
    rc, out, _ = run(capsys, "chi", "-f", scfile, "m0")
    assert rc == 0 and "borderline" in out


def test_classify(scfile, capsys):
    rc, out, _ = run(capsys, "classify", "-f", scfile, "--json", "m0")
    assert rc == 0
    data = json.loads(out)
    assert data["delta"] == 1
    assert data["thinness_integral"] == "-1"


def test_find_positive(scfile, capsys):
    rc, out, _ = run(capsys, "find-positive", "-f", scfile, "m1")
    assert rc == 0 and out.strip() == "y"
    rc, out, _ = run(capsys, "find-positive", "-f", scfile, "root")
    assert rc == 0 and "NOT FOUND" in out


def test_laplacians(scfile, capsys):
    rc, out, _ = run(capsys, "laplacian", "-f", scfile, "Q")
    assert rc == 0 and "total mass 3" in out
    rc, out, _ = run(capsys, "log-laplacian", "-f", scfile, "--json", "H")
    assert rc == 0
    data = json.loads(out)
    assert data["total_mass"] == "2"
    assert all(a["alpha"] == "-1" for a in data["atoms"])


def test_dirichlet(scfile, capsys):
    rc, out, _ = run(capsys, "dirichlet", "-f", scfile, "m1")
    assert rc == 0 and "1/2" in out


def test_oracle_check(capsys):
    rc, out, _ = run(capsys, "oracle-check", "--seed", "7", "--count", "25")
    assert rc == 0
    assert "25/25 alpha-consistency" in out


def test_algebraize(algfile, capsys):
    rc, out, _ = run(capsys, "algebraize", "-f", algfile, "--json")
    assert rc == 0
    data = json.loads(out)
    assert data["values"] == ["0"]
    assert data["curve"] in ("x^3 -y^2", "y^2 -x^3")
    assert all(p["included"] for p in data["points"])
    assert data["branch_verdicts"][0]["matched"] == 0


def test_determinism(scfile, capsys):
    a = run(capsys, "classify", "-f", scfile, "--json")
    b = run(capsys, "classify", "-f", scfile, "--json")
    assert a == b


def test_missing_name_exits_2(scfile, capsys):
    rc, _, err = run(capsys, "eval", "-f", scfile, "nope", "Q")
    assert rc == 2 and "nope" in err


def test_missing_file_exits_2(capsys):
    rc, _, err = run(capsys, "chi", "-f", "/nonexistent.json")
    assert rc == 2 and err


def test_domain_error_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"format": 3}))
    rc, _, err = run(capsys, "chi", "-f", str(p))
    assert rc == 2 and "format" in err
