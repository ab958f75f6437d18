"""Command-line interface: one subcommand per operation plus ``verify``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error, 3 numerical failure (quadrature, series or domain trouble).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from typing import Sequence

from . import bound_probe
from .bound_probe import ProbeError
from .carleson import (MeasureFormatError, ParametricMeasure, carleson_scan, embedding_check,
                       read_measure_csv)
from .core import (DimensionError, Polynomial, PolynomialFormatError, as_multi_index,
                   polynomial_ensemble, polynomial_from_json, polynomial_to_json)
from .fracops import dfrac, dfrac_series, ifrac, ifrac_series
from .gamma import GammaDomainError
from .kernels import (KernelParams, SeriesError, error_term, kernel_alpha,
                      truncated_kernel_plus)
from .norms import (DEFAULT_MC_SEED, IntegrabilityError, MixedPolynomial, fock_norm_estimate,
                    fock_norm_inf, pairing, project, sobolev_norm)
from .quadrature import QuadratureError
from .verify import VerifyConfig, report_json, report_table, run_verification

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DIGITS = 12

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^\s*(?:(?P<re>{_NUMBER})(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i"
                      rf"|(?P<only_re>{_NUMBER})|(?P<only_im>{_NUMBER}|[+-]?)i)\s*$")


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse `a+bi`, `a-bi`, `a`, `bi` (also `i`, `-i`)."""
    m = _COMPLEX.match(text)
    if not m:
        raise UsageError(f"cannot parse complex number {text!r}; expected a+bi")
    if m.group("only_re") is not None:
        return complex(float(m.group("only_re")), 0.0)
    if m.group("re") is not None:
        im = m.group("im")
        return complex(float(m.group("re")), _imag(im))
    return complex(0.0, _imag(m.group("only_im")))


def _imag(text: str) -> float:
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_point(text: str) -> list[complex]:
    """Comma-separated complex coordinates."""
    parts = [p for p in text.split(",")]
    if not parts or any(not p.strip() for p in parts):
        raise UsageError(f"cannot parse point {text!r}; expected comma-separated a+bi values")
    return [parse_complex(p) for p in parts]


def format_real(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return format_real(z.real)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.{DIGITS}g}{sign}{abs(z.imag):.{DIGITS}g}i"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_polynomial(path: str) -> Polynomial:
    try:
        return polynomial_from_json(_read_text(path))
    except PolynomialFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_mixed(path: str) -> MixedPolynomial:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        n = int(data["n"])
        terms = {}
        for i, t in enumerate(data["terms"]):
            key = (as_multi_index(t["a"]), as_multi_index(t["b"]))
            terms[key] = terms.get(key, 0j) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: mixed polynomial JSON needs 'n' and terms with 'a', 'b', 're', 'im': {exc}") from None
    return MixedPolynomial(n, terms)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------------

def _frac(args, op, series_op):
    f = _load_polynomial(args.poly)
    if args.at is None:
        _write(polynomial_to_json(series_op(f, args.s)) + "\n", args.out)
        return EXIT_OK
    z = parse_point(args.at)
    if len(z) != f.n:
        raise UsageError(f"--at has {len(z)} coordinates, polynomial has n = {f.n}")
    print(format_complex(op(f, args.s, z, method=args.method)))
    return EXIT_OK


def cmd_dfrac(args):
    return _frac(args, dfrac, dfrac_series)


def cmd_ifrac(args):
    return _frac(args, ifrac, ifrac_series)


def cmd_kernel(args):
    z, w = parse_point(args.z), parse_point(args.w)
    if len(z) != len(w):
        raise UsageError(f"--z has {len(z)} coordinates, --w has {len(w)}")
    p = KernelParams(len(z), args.alpha)
    if args.part == "full":
        val = kernel_alpha(p, z, w)
    elif args.part == "error":
        val = error_term(p, z, w)
    else:
        if not p.split:
            raise UsageError(f"--part truncated needs alpha >= 2n = {2 * p.n}")
        val = truncated_kernel_plus(p, z, w)
    print(format_complex(val))
    return EXIT_OK


def _exponent(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponent {text!r}") from None
    if not p > 0:
        raise argparse.ArgumentTypeError("exponent must be positive")
    return p


def cmd_norm(args):
    f = _load_polynomial(args.poly)
    if args.p == math.inf:
        print(format_real(fock_norm_inf(f, args.alpha, args.seed)))
        return EXIT_OK
    est = fock_norm_estimate(f, args.p, args.alpha, args.method, args.seed)
    print(format_real(est.value))
    return EXIT_OK


def cmd_pairing(args):
    f, g = _load_polynomial(args.f), _load_polynomial(args.g)
    if f.n != g.n:
        raise UsageError(f"polynomials live on C^{f.n} and C^{g.n}")
    print(format_complex(pairing(f, g, args.alpha)))
    return EXIT_OK


def cmd_sobolev(args):
    f = _load_polynomial(args.poly)
    print(format_real(sobolev_norm(f, args.p, args.alpha, args.s, args.flavor, args.method,
                                   args.seed)))
    return EXIT_OK


def cmd_project(args):
    psi = _load_mixed(args.mixed)
    _write(polynomial_to_json(project(psi, args.alpha)) + "\n", args.out)
    return EXIT_OK


def cmd_probe(args):
    if args.list:
        for ident in bound_probe.registry_list():
            print(f"{ident}: {bound_probe.get_spec(ident).statement}")
        return EXIT_OK
    if not args.id:
        raise UsageError("probe needs --id (or --list)")
    try:
        spec = bound_probe.get_spec(args.id)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    res = bound_probe.probe(spec, samples=args.samples, seed=args.seed)
    print(json.dumps(res.as_dict()))
    return EXIT_OK


def cmd_carleson(args):
    if (args.measure is None) == (args.beta is None):
        raise UsageError("give exactly one of a measure CSV file or --beta")
    if args.measure is not None:
        try:
            mu = read_measure_csv(args.measure)
        except OSError as exc:
            raise UsageError(f"cannot read {args.measure}: {exc.strerror}") from None
    else:
        mu = ParametricMeasure(args.beta, args.n)
    if not args.R_max > args.r:
        raise UsageError("--R-max must exceed --r")
    verdict = carleson_scan(mu, args.r, args.alpha, args.R_max, args.density)
    out = verdict.as_dict()
    if args.embedding_p is not None:
        if args.measure is None:
            raise UsageError("--embedding-p needs a point measure (CSV file)")
        ens = polynomial_ensemble(args.seed, args.ensemble_count, dims=(mu.n,),
                                  max_degree=args.ensemble_degree)
        out["embedding_C_hat"] = embedding_check(mu, args.embedding_p, args.alpha, ens)
    print(json.dumps(out))
    return EXIT_OK


def cmd_verify(args):
    cfg = VerifyConfig(seed=args.seed, probe_samples=args.probe_samples)
    report = run_verification(cfg, timings=args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report_json(report))
    sys.stdout.write(report_table(report))
    return EXIT_OK if report["passed"] else EXIT_CHECK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="focksobolev",
        description="Fractional Fock-Sobolev computations on polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, what in (("dfrac", "fractional derivative D^s"), ("ifrac", "fractional integral I^s")):
        sp = sub.add_parser(name, help=f"{what} of a polynomial")
        sp.add_argument("poly", help="polynomial JSON file ('-' for stdin)")
        sp.add_argument("--s", type=float, required=True, help="order (any real)")
        sp.add_argument("--at", help="evaluate at this point (a+bi,...); omit to print the polynomial")
        sp.add_argument("--method", choices=("series", "integral"), default="series")
        sp.add_argument("--out", help="write polynomial JSON here instead of stdout")
        sp.set_defaults(func=cmd_dfrac if name == "dfrac" else cmd_ifrac)

    sp = sub.add_parser("kernel", help="reproducing kernel K^alpha(z, w)")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--z", required=True, help="point a+bi,...")
    sp.add_argument("--w", required=True, help="point a+bi,...")
    sp.add_argument("--part", choices=("full", "error", "truncated"), default="full",
                    help="whole kernel, polynomial error term, or truncated kernel (alpha >= 2n)")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("norm", help="weighted Fock norm ||f||_{F^p_alpha}")
    sp.add_argument("poly")
    sp.add_argument("--p", type=_exponent, required=True, help="exponent in (0, inf]")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--method", choices=("auto", "monomial", "orthogonal", "circle", "montecarlo"),
                    default="auto")
    sp.add_argument("--seed", type=int, default=DEFAULT_MC_SEED,
                    help=f"sampling seed (default {DEFAULT_MC_SEED})")
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("pairing", help="Hilbert pairing <f, g>_alpha")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("--alpha", type=float, required=True)
    sp.set_defaults(func=cmd_pairing)

    sp = sub.add_parser("sobolev", help="Fock-Sobolev norm of order s")
    sp.add_argument("poly")
    sp.add_argument("--p", type=_exponent, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--flavor", choices=("D", "I"), default="D")
    sp.add_argument("--method", choices=("auto", "monomial", "orthogonal", "circle", "montecarlo"),
                    default="auto")
    sp.add_argument("--seed", type=int, default=DEFAULT_MC_SEED,
                    help=f"sampling seed (default {DEFAULT_MC_SEED})")
    sp.set_defaults(func=cmd_sobolev)

    sp = sub.add_parser("project", help="reproducing operator applied to a mixed polynomial")
    sp.add_argument("mixed", help='JSON {"n": .., "terms": [{"a": [..], "b": [..], "re": .., "im": ..}]}')
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("probe", help="fitted constant of a registered inequality")
    sp.add_argument("--id")
    sp.add_argument("--list", action="store_true", help="list registered inequalities")
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--seed", type=int, default=7, help="Sobol scrambling seed (default 7)")
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("carleson", help="ball-mass scan and Carleson verdict")
    sp.add_argument("measure", nargs="?", help="CSV re_1,im_1,...,weight")
    sp.add_argument("--beta", type=float, help="parametric measure (1+|z|)^-beta dV")
    sp.add_argument("--n", type=int, default=1, help="dimension for --beta (default 1)")
    sp.add_argument("--r", type=float, required=True, help="ball radius")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--R-max", dest="R_max", type=float, required=True)
    sp.add_argument("--density", type=int, default=16, help="points per sphere (default 16)")
    sp.add_argument("--embedding-p", type=_exponent, help="also fit the embedding constant for this p")
    sp.add_argument("--ensemble-degree", type=int, default=10)
    sp.add_argument("--ensemble-count", type=int, default=10)
    sp.add_argument("--seed", type=int, default=7, help="ensemble seed (default 7)")
    sp.set_defaults(func=cmd_carleson)

    sp = sub.add_parser("verify", help="run the full oracle and property suite")
    sp.add_argument("--seed", type=int, default=7, help="master seed (default 7)")
    sp.add_argument("--probe-samples", type=int, default=64)
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--timings", action="store_true",
                    help="include per-check runtimes (reports then differ between runs)")
    sp.set_defaults(func=cmd_verify)
    return parser


NUMERIC_ERRORS = (QuadratureError, SeriesError, IntegrabilityError, GammaDomainError, ProbeError,
                  OverflowError, ZeroDivisionError)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, MeasureFormatError, PolynomialFormatError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure in {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
