"""Command-line front end.

Every invocation runs one job and emits a single JSON object on stdout
(or CSV rows when a --grid sweep is requested).  p-adic results are
serialized exactly as {valuation, digits base p, precision}; complex
results as {re, im}.  Timing lives under "meta" so result fields stay
byte-stable for regression files.

Exit codes: 0 success, 1 precondition violation, 2 precision/series
failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf
from typing import Any

from .archimedean import (
    SeriesBudget,
    q_hurwitz_zeta,
    q_l_continuation,
    q_l_direct,
    q_l_hurwitz,
)
from .characters import DirichletCharacter, character_from_spec, trivial_character
from .domains import ComplexDomain, PadicDomain
from .errors import (
    DomainValidationError,
    PrecisionUnderflowError,
    QlfunError,
    SeriesBudgetError,
)
from .padic import PadicNumber, PrecisionPolicy
from .padic_lfunction import (
    LpContext,
    diamond_log_gamma_q,
    l_derivative_at_zero,
    padic_l_value,
)
from .qbernoulli import generalized_q_bernoulli, q_bernoulli_number
from .verify import run_suite

_SCHEMA = 1
_ENV_PREC = "QLFUN_PREC"


@dataclass
class JobSpec:
    """One validated CLI job; parameters irrelevant to the command stay None."""

    command: str
    prime: int | None = None
    q_rational: Fraction | None = None
    q_complex: complex | None = None
    h: int = 0
    prec: int = 30
    chi: DirichletCharacter | None = None
    s: Any = None
    t: Fraction = Fraction(0)
    x: Any = None
    n: int | None = None
    F: int | None = None
    method: str = "series"
    suite: str | None = None
    suite_params: dict = field(default_factory=dict)
    grid: tuple[str, list] | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; bad usage is a
        self.print_usage(sys.stderr)  # precondition violation here
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _parse_rational(text: str) -> Fraction:
    if "." in text:
        raise DomainValidationError(
            f"{text!r}: p-adic parameters must be exact rationals like 6/1")
    return Fraction(text)


def _parse_grid(text: str) -> tuple[str, list]:
    if "=" not in text:
        raise DomainValidationError("grid must look like n=0:8 or s=2.5,3,4")
    name, spec = text.split("=", 1)
    name = name.strip()
    spec = spec.strip()
    if not spec:
        return name, []
    if "," in spec:
        vals = [v.strip() for v in spec.split(",") if v.strip()]
        return name, [_num(v) for v in vals]
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            return name, list(range(lo, hi + 1))
        lo, hi, step = float(parts[0]), float(parts[1]), float(parts[2])
        out, v = [], lo
        while v <= hi + 1e-12:
            out.append(round(v, 12))
            v += step
        return name, out
    return name, [_num(spec)]


def _num(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _default_prec() -> int:
    raw = os.environ.get(_ENV_PREC)
    if raw is None:
        return 30
    try:
        return int(raw)
    except ValueError:
        raise DomainValidationError(f"{_ENV_PREC} must be an integer, got {raw!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="qlfun",
                     description="q-deformed Bernoulli/L-function calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, padic_only=False, complex_only=False):
        p.add_argument("--q", required=True,
                       help="deformation parameter: rational num/den for "
                            "p-adic jobs, decimal for complex jobs")
        p.add_argument("--h", type=int, default=0, help="integer weight")
        if not complex_only:
            p.add_argument("--p", type=int, default=None, help="odd prime")
            p.add_argument("--prec", type=int, default=None,
                           help=f"p-adic digits (default ${_ENV_PREC} or 30)")
        if padic_only:
            p.add_argument("--F", type=int, default=None,
                           help="period override (multiple of p and the conductor)")

    p_qb = sub.add_parser("qbern", help="q-Bernoulli number")
    common(p_qb)
    p_qb.add_argument("--n", type=int, default=None)
    p_qb.add_argument("--grid", default=None, help="sweep, e.g. n=0:8 (CSV out)")

    p_gq = sub.add_parser("gen-qbern", help="character q-Bernoulli polynomial value")
    common(p_gq)
    p_gq.add_argument("--chi", required=True, help="f=<f> m=<m> map=a:e,...")
    p_gq.add_argument("--n", type=int, default=None)
    p_gq.add_argument("--x", default="0", help="polynomial argument")
    p_gq.add_argument("--grid", default=None)

    p_z = sub.add_parser("zeta", help="complex q-Hurwitz zeta")
    common(p_z, complex_only=True)
    p_z.add_argument("--s", type=float, default=None)
    p_z.add_argument("--x", type=float, default=1.0)
    p_z.add_argument("--grid", default=None)

    p_l = sub.add_parser("lfun", help="complex q-L function")
    common(p_l, complex_only=True)
    p_l.add_argument("--chi", required=True)
    p_l.add_argument("--s", type=float, default=None)
    p_l.add_argument("--x", type=float, default=None,
                     help="shift for the Hurwitz variant")
    p_l.add_argument("--method", choices=("series", "continuation"),
                     default="series")
    p_l.add_argument("--grid", default=None)

    p_lp = sub.add_parser("lp", help="p-adic interpolation function value")
    common(p_lp, padic_only=True)
    p_lp.add_argument("--chi", default="f=1 m=1 map=")
    p_lp.add_argument("--s", default="0", help="rational, v_p(s) >= 0, s != 1")
    p_lp.add_argument("--t", default="0", help="rational with |t|_p <= 1")
    p_lp.add_argument("--grid", default=None, help="e.g. t=0:3")

    p_dl = sub.add_parser("dlp", help="d/ds of the p-adic function at s = 0")
    common(p_dl, padic_only=True)
    p_dl.add_argument("--chi", default="f=1 m=1 map=")
    p_dl.add_argument("--t", default="0")

    p_g = sub.add_parser("gamma-q", help="q-Diamond log-gamma")
    common(p_g)
    p_g.add_argument("--x", required=True, help="rational with |x|_p > 1")

    p_v = sub.add_parser("verify", help="run a named identity suite")
    p_v.add_argument("--suite", required=True,
                     help="suite name or 'all'")
    p_v.add_argument("--p", type=int, default=None)
    p_v.add_argument("--prec", type=int, default=None)
    p_v.add_argument("--n-max", type=int, default=None, dest="n_max")
    return parser


def spec_from_args(args: argparse.Namespace) -> JobSpec:
    cmd = args.command
    spec = JobSpec(command=cmd)
    if cmd == "verify":
        spec.suite = args.suite
        spec.suite_params = {"prec": args.prec, "n_max": args.n_max}
        return spec
    spec.h = args.h
    prec = getattr(args, "prec", None)
    spec.prec = prec if prec is not None else _default_prec()
    if spec.prec < 2:
        raise DomainValidationError("prec must be at least 2")
    spec.prime = getattr(args, "p", None)
    q_text = args.q
    padic_job = cmd in ("lp", "dlp", "gamma-q") or spec.prime is not None
    if padic_job:
        if spec.prime is None:
            raise DomainValidationError(f"{cmd}: --p is required for p-adic jobs")
        spec.q_rational = _parse_rational(q_text)
    else:
        spec.q_complex = complex(float(q_text))
    if hasattr(args, "chi"):
        spec.chi = character_from_spec(args.chi)
    if hasattr(args, "F"):
        spec.F = args.F
    if hasattr(args, "n"):
        spec.n = args.n
    if hasattr(args, "method"):
        spec.method = args.method
    if hasattr(args, "s") and args.s is not None:
        spec.s = Fraction(args.s) if cmd == "lp" else float(args.s)
    if hasattr(args, "t"):
        spec.t = _parse_rational(str(args.t))
    if hasattr(args, "x") and args.x is not None:
        spec.x = (_parse_rational(str(args.x)) if padic_job else float(args.x))
    grid = getattr(args, "grid", None)
    if grid is not None:
        spec.grid = _parse_grid(grid)
    return spec


# -- result serialization -----------------------------------------------------


def _padic_result(x: PadicNumber) -> dict:
    prec = None if x.abs_prec == inf else int(x.abs_prec)
    return {"kind": "padic", "prime": x.prime, "valuation": x.valuation,
            "digits": x.digits(), "precision": prec}


def _complex_result(z: complex) -> dict:
    return {"kind": "complex", "re": z.real, "im": z.imag}


def _padic_csv(x: PadicNumber) -> list:
    return [x.valuation if not x.is_zero else "",
            ":".join(str(d) for d in x.digits()),
            "" if x.abs_prec == inf else int(x.abs_prec)]


# -- evaluation ---------------------------------------------------------------


def _eval_point(spec: JobSpec, **over):
    """Evaluate the job at one parameter point; `over` overrides one of the
    sweepable parameters (n, s, t)."""
    cmd = spec.command
    n = over.get("n", spec.n)
    s = over.get("s", spec.s)
    t = over.get("t", spec.t)
    if cmd in ("qbern", "gen-qbern"):
        if n is None:
            raise DomainValidationError("--n is required")
        if spec.q_rational is not None:
            dom = PadicDomain(spec.prime, PrecisionPolicy(target_abs_prec=spec.prec))
            if cmd == "qbern":
                return q_bernoulli_number(n, spec.q_rational, spec.h, dom)
            return generalized_q_bernoulli(n, spec.q_rational, spec.h, spec.chi,
                                           spec.x if spec.x is not None else 0,
                                           dom)
        dom = ComplexDomain()
        if cmd == "qbern":
            return q_bernoulli_number(n, spec.q_complex, spec.h, dom)
        return generalized_q_bernoulli(n, spec.q_complex, spec.h, spec.chi,
                                       spec.x if spec.x is not None else 0.0, dom)
    if cmd == "zeta":
        if s is None:
            raise DomainValidationError("--s is required")
        return q_hurwitz_zeta(s, spec.x, spec.q_complex, spec.h)
    if cmd == "lfun":
        if s is None:
            raise DomainValidationError("--s is required")
        if spec.method == "continuation":
            x = spec.x if spec.x is not None else 1.0
            return q_l_continuation(s, x, spec.chi, spec.q_complex, spec.h)
        if spec.x is not None:
            return q_l_hurwitz(s, spec.x, spec.chi, spec.q_complex, spec.h)
        return q_l_direct(s, spec.chi, spec.q_complex, spec.h)
    if cmd == "lp":
        ctx = LpContext(spec.prime, spec.q_rational, spec.h,
                        spec.chi or trivial_character(1), spec.F,
                        PrecisionPolicy(target_abs_prec=spec.prec))
        return padic_l_value(s if s is not None else 0, t, ctx)
    if cmd == "dlp":
        ctx = LpContext(spec.prime, spec.q_rational, spec.h,
                        spec.chi or trivial_character(1), spec.F,
                        PrecisionPolicy(target_abs_prec=spec.prec))
        return l_derivative_at_zero(t, ctx)
    if cmd == "gamma-q":
        policy = PrecisionPolicy(target_abs_prec=spec.prec)
        x = PadicNumber.from_fraction(spec.x, spec.prime,
                                      spec.prec + 8)
        return diamond_log_gamma_q(x, spec.q_rational, spec.h, spec.prime, policy)
    raise DomainValidationError(f"unknown command {cmd!r}")


def _echo_inputs(spec: JobSpec) -> dict:
    out = {"h": spec.h}
    if spec.prime is not None:
        out["p"] = spec.prime
        out["prec"] = spec.prec
    if spec.q_rational is not None:
        out["q"] = str(spec.q_rational)
    if spec.q_complex is not None:
        out["q"] = spec.q_complex.real
    if spec.chi is not None:
        out["chi"] = {"modulus": spec.chi.modulus, "order": spec.chi.order}
    if spec.F is not None:
        out["F"] = spec.F
    for name in ("n", "s"):
        v = getattr(spec, name)
        if v is not None:
            out[name] = float(v) if isinstance(v, float) else str(v)
    if spec.command in ("lp", "dlp"):
        out["t"] = str(spec.t)
    if spec.x is not None:
        out["x"] = str(spec.x) if spec.q_rational is not None else spec.x
    return out


def emit_table(spec: JobSpec) -> str:
    """CSV sweep over one parameter, stable column order, header always."""
    name, values = spec.grid
    if name not in ("n", "s", "t"):
        raise DomainValidationError("grid parameter must be one of n, s, t")
    padic = spec.q_rational is not None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    has_error_column = spec.command == "lfun" and spec.method == "continuation"
    if padic:
        header = [name, "valuation", "digits", "precision"]
    else:
        header = [name, "re", "im"]
    if has_error_column:
        header.append("abs_err_vs_series")
    writer.writerow(header)
    for v in values:
        result = _eval_point(spec, **{name: v})
        if padic:
            row = [v, *_padic_csv(result)]
        else:
            row = [v, result.real, result.imag]
        if has_error_column:
            err = ""
            try:
                x = spec.x if spec.x is not None else 1.0
                ref = q_l_hurwitz(v if name == "s" else spec.s, x, spec.chi,
                                  spec.q_complex, spec.h)
                err = abs(result - ref)
            except QlfunError:
                err = ""
            row.append(err)
        writer.writerow(row)
    return buf.getvalue()


def run(spec: JobSpec) -> tuple[dict | str, int]:
    """Execute one job: returns (JSON-ready report | CSV text, exit code)."""
    started = time.monotonic()
    if spec.grid is not None:
        return emit_table(spec), 0
    if spec.command == "verify":
        params = {k: v for k, v in spec.suite_params.items() if v is not None}
        rows = run_suite(spec.suite, **params)
        all_pass = all(r["pass"] for r in rows)
        report = {
            "schema": _SCHEMA,
            "command": "verify",
            "inputs": {"suite": spec.suite, **params},
            "result": {"kind": "verify", "checks": rows, "all_pass": all_pass,
                       "total": len(rows),
                       "failed": sum(1 for r in rows if not r["pass"])},
            "meta": {"elapsed_ms": round(1000 * (time.monotonic() - started), 3)},
        }
        return report, 0 if all_pass else 3
    value = _eval_point(spec)
    result = (_padic_result(value) if isinstance(value, PadicNumber)
              else _complex_result(value))
    report = {
        "schema": _SCHEMA,
        "command": spec.command,
        "inputs": _echo_inputs(spec),
        "result": result,
        "meta": {"elapsed_ms": round(1000 * (time.monotonic() - started), 3)},
    }
    return report, 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
        out, code = run(spec)
    except (PrecisionUnderflowError, SeriesBudgetError) as exc:
        print(json.dumps({"schema": _SCHEMA, "error": str(exc),
                          "kind": type(exc).__name__}), file=sys.stderr)
        return 2
    except (DomainValidationError, ZeroDivisionError, ValueError) as exc:
        print(json.dumps({"schema": _SCHEMA, "error": str(exc),
                          "kind": type(exc).__name__}), file=sys.stderr)
        return 1
    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        json.dump(out, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
