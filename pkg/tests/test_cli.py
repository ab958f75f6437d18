import json
import math

import pytest
from hypothesis import given, strategies as st

from focksobolev.cli import format_complex, parse_complex, parse_point, run, UsageError
from focksobolev.core import Polynomial, polynomial_from_json, polynomial_to_json, random_polynomial

import numpy as np


@pytest.fixture
def z_json(tmp_path):
    path = tmp_path / "z.json"
    path.write_text(polynomial_to_json(Polynomial.variable(1, 0)))
    return str(path)


@pytest.mark.parametrize("text,value", [
    ("1+0i", 1 + 0j), ("1-2i", 1 - 2j), ("-3.5", -3.5 + 0j), ("2i", 2j), ("-i", -1j),
    ("1e-3+2.5e1i", 1e-3 + 25j), ("+0.5-.25i", 0.5 - 0.25j), (" 4 ", 4 + 0j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["1+zi", "", "1+2j", "i2", "1++2i"])
def test_parse_complex_rejects(text):
    with pytest.raises(UsageError):
        parse_complex(text)


@given(st.complex_numbers(max_magnitude=1e8, allow_nan=False, allow_infinity=False))
def test_format_parse_round_trip(z):
    back = parse_complex(format_complex(z))
    assert abs(back - z) <= 1e-11 * max(abs(z), 1e-300) + 1e-300


def test_parse_point():
    assert parse_point("1+0i,2-1i") == [1, 2 - 1j]
    with pytest.raises(UsageError):
        parse_point("1,,2")


def test_dfrac_example(z_json, capsys):
    assert run(["dfrac", "--s", "0.5", "--at", "1+0i", z_json]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.3293403882, rel=1e-10)


def test_dfrac_integral_route(z_json, capsys):
    assert run(["dfrac", "--s", "0.5", "--at", "1+0i", "--method", "integral", z_json]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.3293403882, rel=1e-10)


def test_kernel_orthogonal_points(capsys):
    assert run(["kernel", "--alpha", "0", "--z", "1+2i,0", "--w", "0,3-1i"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_polynomial_output_round_trips(tmp_path, capsys):
    f = random_polynomial(2, 5, np.random.default_rng(0))
    src = tmp_path / "f.json"
    src.write_text(polynomial_to_json(f))
    assert run(["ifrac", "--s", "0", str(src)]) == 0
    assert polynomial_from_json(capsys.readouterr().out) == f
    out = tmp_path / "g.json"
    assert run(["dfrac", "--s", "1.5", str(src), "--out", str(out)]) == 0
    g = polynomial_from_json(out.read_text())
    assert polynomial_from_json(polynomial_to_json(g)) == g


def test_norm_and_pairing(z_json, capsys):
    assert run(["norm", z_json, "--p", "2", "--alpha", "0"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.0, rel=1e-11)
    assert run(["norm", z_json, "--p", "inf", "--alpha", "0"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.exp(-0.5), rel=1e-9)
    assert run(["pairing", z_json, z_json, "--alpha", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.gamma(1.5), rel=1e-11)


def test_sobolev(z_json, capsys):
    assert run(["sobolev", z_json, "--p", "2", "--alpha", "0", "--s", "0"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.0, rel=1e-11)


def test_project(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 1, "terms": [{"a": [1], "b": [1], "re": 1, "im": 0}]}))
    assert run(["project", str(path), "--alpha", "0"]) == 0
    g = polynomial_from_json(capsys.readouterr().out)
    assert g.coefficient((0,)) == pytest.approx(1.0)


def test_probe_json(capsys):
    assert run(["probe", "--id", "lemma-3.6-alpha0", "--samples", "16", "--seed", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {"id", "C_hat", "drift"} <= set(data)
    assert data["C_hat"] == pytest.approx(1.0, abs=1e-6)


def test_carleson_parametric(capsys):
    assert run(["carleson", "--beta", "0", "--r", "1", "--alpha", "1", "--R-max", "6"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "not_carleson" and data["extrapolated"] is True


def test_carleson_csv(tmp_path, capsys):
    path = tmp_path / "mu.csv"
    path.write_text("re_1,im_1,weight\n0,0,1\n1,0,0.5\n")
    assert run(["carleson", str(path), "--r", "1", "--alpha", "0", "--R-max", "5",
                "--embedding-p", "2", "--ensemble-degree", "4"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["embedding_C_hat"] > 0


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["dfrac", "--s", "1", "--at", "1+zi", "POLY"],
    ["dfrac", "--s", "1", "--at", "1,2", "POLY"],
    ["kernel", "--alpha", "0", "--z", "1", "--w", "1,2"],
    ["kernel", "--alpha", "1", "--z", "1", "--w", "1", "--part", "truncated"],
    ["norm", "POLY", "--p", "-1", "--alpha", "0"],
    ["probe", "--id", "no-such-id"],
    ["carleson", "--r", "1", "--alpha", "0", "--R-max", "5"],
    ["carleson", "--beta", "0", "--r", "2", "--alpha", "0", "--R-max", "1"],
    ["norm", "MISSING", "--p", "2", "--alpha", "0"],
])
def test_usage_errors(argv, z_json, capsys):
    argv = [z_json if a == "POLY" else ("/nonexistent/f.json" if a == "MISSING" else a) for a in argv]
    assert run(argv) == 2


def test_malformed_json_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 1, "terms": [\n{"gamma": [1],')
    assert run(["norm", str(path), "--p", "2", "--alpha", "0"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_numerical_failure_exit_code(capsys):
    # lam = 900 is beyond the double-precision range of the kernel series
    assert run(["kernel", "--alpha", "1", "--z", "30", "--w", "30"]) == 3
    assert "numerical failure" in capsys.readouterr().err
