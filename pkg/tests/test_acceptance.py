"""Acceptance criteria, asserted against tolerances pinned here.

The verification report is produced twice through the command line with the
same seed; criterion 10 compares the two runs byte for byte and the other
criteria read the first report.
"""

import json
import math
import subprocess
import sys

import pytest

pytestmark = pytest.mark.slow

SEED = 7

PROBE_IDS = [
    "lemma-2.1", "prop-2.2", "prop-2.2-grad", "prop-3.2-pos", "prop-3.2-neg", "prop-3.5-pos",
    "prop-3.5-neg", "lemma-3.4", "lemma-3.6", "lemma-3.6-alpha0", "lemma-3.7", "prop-3.8",
    "prop-3.10", "lemma-3.12", "eq-4.11", "cor-4.6-pos", "cor-4.6-neg", "cor-4.7",
    "prop-4.8-p2", "prop-4.8-inf",
]


def _verify(tmp_path, tag):
    out = tmp_path / f"report-{tag}.json"
    proc = subprocess.run([sys.executable, "-m", "focksobolev", "verify", "--seed", str(SEED),
                           "--out", str(out)], capture_output=True, text=True, timeout=900)
    return proc, out.read_bytes()


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("verify")
    return [_verify(tmp, tag) for tag in ("a", "b")]


@pytest.fixture(scope="module")
def report(runs):
    return json.loads(runs[0][1])


def _check(report, name):
    matches = [c for c in report["checks"] if c["name"] == name]
    assert len(matches) == 1, f"check {name!r} missing from report"
    return matches[0]


def _num(text):
    return float(text)


def test_verify_exit_code(runs):
    proc = runs[0][0]
    assert proc.returncode == 0, proc.stdout[-2000:] + proc.stderr[-2000:]


def test_criterion_1_inversion(report, acceptance_line):
    c = _check(report, "inversion")
    err = _num(c["value"])
    ok = acceptance_line(1, "inversion I^s D^s f, 200 polynomials, rel <= 1e-12", err <= 1e-12,
                         f"max rel err {err:.3e}")
    assert ok


def test_criterion_2_dual_path(report, acceptance_line):
    c = _check(report, "dual-path operators")
    err = _num(c["value"])
    ok = acceptance_line(2, "series vs integral D^{+-s}, I^{+-s}, rel <= 1e-8", err <= 1e-8,
                         f"max rel err {err:.3e}")
    assert ok


def test_criterion_3_truncated_exponential(report, acceptance_line):
    x = _check(report, "truncated exponential")["extra"]
    identity, small = _num(x["identity"]), _num(x["small_argument"])
    violations = int(x["inequality_violations"])
    ok = identity <= 1e-10 and small <= 1e-6 and violations == 0
    acceptance_line(3, "truncated exponential identity <= 1e-10, limit, inequalities", ok,
                    f"identity {identity:.3e}, limit {small:.3e}, violations {violations}")
    assert ok


def test_criterion_4_kernel_oracles(report, acceptance_line):
    x = _check(report, "kernel oracles")["extra"]
    vals = {k: _num(v) for k, v in x.items()}
    ok = (vals["fock"] <= 1e-12 and vals["alpha-2"] <= 1e-12 and vals["decomposition"] <= 1e-12
          and vals["hermitian"] <= 1e-13)
    acceptance_line(4, "kernel oracles 1e-12, Hermitian 1e-13", ok,
                    ", ".join(f"{k} {v:.2e}" for k, v in vals.items()))
    assert ok


def test_criterion_5_reproducing(report, acceptance_line):
    err = _num(_check(report, "reproducing identity")["value"])
    ok = acceptance_line(5, "reproducing identity residual <= 1e-11", err <= 1e-11,
                         f"max residual {err:.3e}")
    assert ok


def test_criterion_6_monomial_norms(report, acceptance_line):
    x = {k: _num(v) for k, v in _check(report, "monomial norms")["extra"].items()}
    ok = all(v <= 1e-10 for v in x.values()) and len(x) == 3
    acceptance_line(6, "monomial norm closed forms vs quadrature <= 1e-10", ok,
                    ", ".join(f"{k} {v:.2e}" for k, v in x.items()))
    assert ok


def test_criterion_7_norm_equivalence(report, acceptance_line):
    x = {k: _num(v) for k, v in _check(report, "norm equivalence")["extra"].items()}
    growths = [v for k, v in x.items() if k.endswith("growth")]
    bands = [v for k, v in x.items() if k.endswith("band")]
    # 3 exponents x 3 (alpha, s) pairs x (D, I, D/I)
    ok = (len(growths) == 27 and all(math.isfinite(b) for b in bands)
          and max(growths) < 0.25)
    acceptance_line(7, "norm-equivalence band growth < 25% when degree doubles", ok,
                    f"max growth {max(growths):.3f}, max band {max(bands):.3f}")
    assert ok


def test_criterion_8_probes(report, acceptance_line):
    failures = []
    worst = 0.0
    for ident in PROBE_IDS:
        c = _check(report, f"probe {ident}")
        c_hat, drift = _num(c["value"]), _num(c["drift"])
        worst = max(worst, drift)
        if not (math.isfinite(c_hat) and c_hat > 0 and drift < 0.10):
            failures.append(ident)
    unit = _num(_check(report, "probe lemma-3.6-alpha0")["value"])
    if abs(unit - 1.0) > 1e-6:
        failures.append("lemma-3.6-alpha0 closed form")
    ok = not failures
    acceptance_line(8, "bound probes finite with drift < 10%; Gaussian-shift probe at alpha=0 gives C = 1 +- 1e-6", ok,
                    f"max drift {worst:.4f}, alpha=0 C {unit:.9f}"
                    + (f", failing {failures}" if failures else ""))
    assert ok


def test_criterion_9_carleson(report, acceptance_line):
    x = _check(report, "carleson verdicts")["extra"]
    expected = {"dV, alpha 0": "carleson", "dV, alpha 1": "not_carleson",
                "dV_2, alpha 2": "carleson"}
    verdicts_ok = all(x[f"{m} verdict density {d}"] == v for m, v in expected.items() for d in (16, 32))
    growth = {m: _num(x[f"{m} embedding growth"]) for m in expected}
    consistent = all((growth[m] < 0.25) == (v == "carleson") for m, v in expected.items())
    ok = verdicts_ok and consistent and x["weight scaling exact"] is True
    acceptance_line(9, "Carleson verdicts carleson/not_carleson/carleson, embedding consistent, scaling exact",
                    ok, ", ".join(f"{m}: growth {g:+.3f}" for m, g in growth.items()))
    assert ok


def test_criterion_10_determinism(runs, acceptance_line):
    (proc_a, json_a), (proc_b, json_b) = runs
    ok = json_a == json_b and proc_a.stdout == proc_b.stdout and len(json_a) > 0
    acceptance_line(10, "verify --seed 7 byte-identical across two runs", ok,
                    f"{len(json_a)} JSON bytes, {len(proc_a.stdout)} table bytes")
    assert ok
