"""Command-line interface: ``remezlab {bound,extremal,check,audit,search,sweep}``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 finding
(an inequality failed as stated). Payloads go to stdout (or ``--out``),
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import chebyshev
from .audit import AuditConfig, audit_sweep, reports_to_csv, reports_to_json
from .chebyshev import BoundKind
from .errors import (
    ChebyshevOverflow,
    ConstantOnLevel,
    ConstraintViolated,
    NoConvergence,
    NoFeasibleStart,
    WitnessFailure,
)
from .extremal import classical_witness, equality_witness
from .search import VIOLATION_TOL, SearchConfig, maximize_ratio
from .sublevel import BACKENDS, algebraic_sublevel, deficiency
from .trigpoly import Parity, TrigPoly, parity_of, sup_norm

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_FINDING = 0, 1, 2, 3
KIND_CHOICES = [k.value for k in BoundKind]
PERIODIC = (BoundKind.EVEN_PERIOD, BoundKind.ODD_PERIOD, BoundKind.ALL_PERIOD)


@dataclass
class CommandOutcome:
    exit_code: int
    stdout: str = ""
    stderr: str = ""


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _bound_or_log(kind: BoundKind, n: int, s: float) -> tuple[float | None, float]:
    log_b = chebyshev.log_bound(kind, n, s)
    try:
        return chebyshev.bound(kind, n, s), log_b
    except ChebyshevOverflow:
        return None, log_b


# ---------------------------------------------------------------------------
# commands


def cmd_bound(kind, n: int, s: float, log: bool = False) -> CommandOutcome:
    kind = BoundKind.parse(kind)
    out = {"kind": kind.value, "n": n, "s": s}
    if log:
        out["log_bound"] = chebyshev.log_bound(kind, n, s)
    else:
        out["bound"] = chebyshev.bound(kind, n, s)
    return CommandOutcome(EXIT_OK, _dumps(out))


def cmd_extremal(n: int, s: float, out: str | None = None, kind="even", backend: str = "eigen") -> CommandOutcome:
    kind = BoundKind.parse(kind)
    if kind is BoundKind.EVEN_PERIOD:
        w = equality_witness(n, s, backend)
        poly = w.poly.to_json_obj()
    elif kind is BoundKind.CLASSICAL_ALGEBRAIC:
        w = classical_witness(n, s)
        poly = {"degree": w.poly.degree, "power_coeffs": [float(c.real) for c in w.poly.coeffs]}
    else:
        raise ValueError("extremal supports --kind even or classical")
    if out:
        _write(out, _dumps(poly))
    payload = {"kind": kind.value, "polynomial": poly, "witness": w.to_json_obj()}
    return CommandOutcome(EXIT_OK, _dumps(payload))


def _default_kind(parity: Parity, s: float) -> tuple[BoundKind, bool]:
    """Bound used by ``check`` when ``--kind`` is omitted; flag marks the open regime."""
    if parity is Parity.EVEN:
        return BoundKind.EVEN_PERIOD, False
    if parity is Parity.ODD:
        return BoundKind.ODD_PERIOD, False
    if s < math.pi:
        return BoundKind.ALL_PERIOD, False
    return BoundKind.EVEN_PERIOD, True


def cmd_check(polyfile: str, s: float | None = None, kind=None, backend: str = "eigen") -> CommandOutcome:
    with open(polyfile, encoding="utf-8") as fh:
        Q = TrigPoly.from_json(fh.read())
    if Q.is_zero():
        raise ValueError("the zero polynomial has no meaningful ratio")
    parity = parity_of(Q)
    d = deficiency(Q, backend)
    s_used = d if s is None else float(s)
    if s is not None and d > s_used + VIOLATION_TOL:
        raise ConstraintViolated(f"deficiency {d!r} exceeds --s {s_used!r}: not in the class")
    if s_used <= 0.0:
        raise ValueError("deficiency is zero; pass --s to choose an exceptional measure")
    conjectural = False
    if kind is None:
        kind, conjectural = _default_kind(parity, s_used)
    else:
        kind = BoundKind.parse(kind)
        if kind not in PERIODIC:
            raise ValueError("check compares against the periodic bounds even/odd/all")
        conjectural = kind is BoundKind.EVEN_PERIOD and parity is not Parity.EVEN
    n = max(Q.degree, 1)
    b, log_b = _bound_or_log(kind, n, s_used)
    sup = sup_norm(Q, density=640, min_points=2560)
    ratio = math.exp(math.log(sup) - log_b) if sup > 0 else 0.0
    payload = {
        "degree": Q.degree,
        "parity": parity.value,
        "deficiency": d,
        "s": s_used,
        "kind": kind.value,
        "conjectural": conjectural,
        "sup": sup,
        "bound": b,
        "log_bound": log_b,
        "ratio": ratio,
        "exceeds": ratio > 1.0 + VIOLATION_TOL,
    }
    code = EXIT_FINDING if payload["exceeds"] else EXIT_OK
    err = f"ratio {ratio:.12g} exceeds the {kind.value} bound\n" if payload["exceeds"] else ""
    return CommandOutcome(code, _dumps(payload), err)


def _claim_base(claim_id: str) -> str:
    return claim_id[:-1] if claim_id.startswith("Lem3.7") and claim_id[-1] in "ab" else claim_id


def cmd_audit(
    config: str | None = None,
    default: bool = False,
    out: str | None = None,
    csv_out: str | None = None,
    expect_findings=(),
    seed: int | None = None,
) -> CommandOutcome:
    if config and default:
        raise ValueError("give either --config or --default, not both")
    if config:
        with open(config, encoding="utf-8") as fh:
            cfg = AuditConfig.from_json_obj(json.load(fh))
    elif default:
        cfg = AuditConfig.default()
    else:
        raise ValueError("audit needs --config FILE or --default")
    if seed is not None:
        cfg.seed = seed
    reports = audit_sweep(cfg)
    text = reports_to_json(reports, cfg) + "\n"
    if csv_out:
        _write(csv_out, reports_to_csv(reports))
    stdout = text
    if out:
        _write(out, text)
        stdout = ""
    failed = sorted({r.claim_id for r in reports if not r.holds_as_stated})
    expected = set(expect_findings)
    unexpected = [c for c in failed if c not in expected and _claim_base(c) not in expected]
    lines = [f"finding: {c} failed as stated" for c in failed]
    if unexpected:
        return CommandOutcome(EXIT_FINDING, stdout, "\n".join(lines) + "\n")
    return CommandOutcome(EXIT_OK, stdout, "\n".join(lines) + ("\n" if lines else ""))


def cmd_search(
    n: int,
    s: float,
    kind="even",
    parity="even",
    real: bool = False,
    seed: int = 0,
    restarts: int = 16,
    budget: int = 5000,
    out: str | None = None,
) -> CommandOutcome:
    cfg = SearchConfig(n=n, s=s, parity=parity, kind=kind, real=real, restarts=restarts, budget=budget, seed=seed)
    result = maximize_ratio(cfg)
    text = result.to_json() + "\n"
    stdout = text
    if out:
        _write(out, text)
        stdout = ""
    if result.violated:
        msg = f"violation witness: ratio {result.best_ratio!r} > 1 + {VIOLATION_TOL}\n"
        return CommandOutcome(EXIT_FINDING, stdout, msg)
    return CommandOutcome(EXIT_OK, stdout)


def _sweep_row(n: int, s: float, kind: BoundKind, backend: str) -> list:
    if kind in PERIODIC:
        w = equality_witness(n, s, backend)
        d = deficiency(w.poly, backend)
        sup = w.attained_sup
    else:
        w = classical_witness(n, s)
        d = 2.0 - algebraic_sublevel(w.poly, -1.0, 1.0, 1.0).measure()
        sup = w.attained_sup
    b, log_b = _bound_or_log(kind, n, s)
    ratio = math.exp(math.log(sup) - log_b)
    return [n, s, kind.value, b, sup, ratio, d]


def cmd_sweep(ns, ss, kind="even", csv_out: str | None = None, backend: str = "eigen") -> CommandOutcome:
    """One CSV row per ``(n, s)`` with the extremal polynomial's sup against ``kind``'s bound.

    Periodic kinds use the even extremal with deficiency ``s``; classical
    kinds use the algebraic extremal on ``[-1, 1]``.
    """
    kind = BoundKind.parse(kind)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "s", "kind", "bound", "sup", "ratio", "deficiency"])
    for n in ns:
        for s in ss:
            row = _sweep_row(n, s, kind, backend)
            writer.writerow([row[0], repr(row[1]), row[2], *("" if v is None else repr(float(v)) for v in row[3:])])
    text = buf.getvalue()
    if csv_out:
        _write(csv_out, text)
        return CommandOutcome(EXIT_OK, "")
    return CommandOutcome(EXIT_OK, text)


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def _float_grid(text: str) -> list[float]:
    """``a,b,c`` or inclusive ``start:stop:step``."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [float(f"{start + i * step:.12g}") for i in range(count)]
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="remezlab", description="Remez-type inequalities for trigonometric polynomials.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate a closed-form bound")
    b.add_argument("--kind", default="even", type=str.lower, choices=KIND_CHOICES)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--s", type=float, required=True)
    b.add_argument("--log", action="store_true", help="print the natural log of the bound")

    e = sub.add_parser("extremal", help="build an extremal polynomial and its witness")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--s", type=float, required=True)
    e.add_argument("--kind", default="even", type=str.lower, choices=["even", "classical"])
    e.add_argument("--backend", default="eigen", choices=BACKENDS)
    e.add_argument("--out", help="also write the polynomial JSON here")

    c = sub.add_parser("check", help="compare a polynomial file against a bound")
    c.add_argument("polyfile")
    c.add_argument("--s", type=float, help="exceptional measure (default: the polynomial's deficiency)")
    c.add_argument("--kind", type=str.lower, choices=["even", "odd", "all"])
    c.add_argument("--backend", default="eigen", choices=BACKENDS)

    a = sub.add_parser("audit", help="randomised audit of the stated inequalities")
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--config", help="JSON audit configuration")
    g.add_argument("--default", action="store_true", help="use the default configuration")
    a.add_argument("--seed", type=int)
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.add_argument("--csv", help="also write the CSV report here")
    a.add_argument(
        "--expect-findings",
        default="",
        help="comma-separated claim ids whose failures are expected (exit 0 instead of 3)",
    )

    s = sub.add_parser("search", help="search for polynomials close to a bound")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--s", type=float, default=math.pi)
    s.add_argument("--kind", default="even", type=str.lower, choices=["even", "odd", "all"])
    s.add_argument("--parity", default="even", choices=["even", "odd", "any"])
    s.add_argument("--real", action="store_true", help="restrict to real-valued polynomials")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--budget", type=int, default=5000)
    s.add_argument("--out", help="write the JSON result here instead of stdout")

    w = sub.add_parser("sweep", help="CSV table of bounds and extremal sups over a grid")
    w.add_argument("--n", type=_int_list, default=_int_list("1..4"), help="e.g. 1..4 or 1,2,5")
    w.add_argument("--s", type=_float_grid, default=_float_grid("0.5:5.5:0.5"), help="e.g. 0.5:5.5:0.5 or 1,2")
    w.add_argument("--kind", default="even", type=str.lower, choices=KIND_CHOICES)
    w.add_argument("--backend", default="eigen", choices=BACKENDS)
    w.add_argument("--csv", help="write the CSV here instead of stdout")
    return p


def run(argv: list[str] | None = None) -> CommandOutcome:
    """Parse ``argv`` and run the command, mapping errors onto exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandOutcome(EXIT_OK if exc.code == 0 else EXIT_INPUT)
    try:
        if args.command == "bound":
            return cmd_bound(args.kind, args.n, args.s, args.log)
        if args.command == "extremal":
            return cmd_extremal(args.n, args.s, args.out, args.kind, args.backend)
        if args.command == "check":
            return cmd_check(args.polyfile, args.s, args.kind, args.backend)
        if args.command == "audit":
            expected = [c.strip() for c in args.expect_findings.split(",") if c.strip()]
            return cmd_audit(args.config, args.default, args.out, args.csv, expected, args.seed)
        if args.command == "search":
            return cmd_search(
                args.n, args.s, args.kind, args.parity, args.real, args.seed, args.restarts, args.budget, args.out
            )
        return cmd_sweep(args.n, args.s, args.kind, args.csv, args.backend)
    except (NoConvergence, WitnessFailure, ChebyshevOverflow, NoFeasibleStart, FloatingPointError) as exc:
        return CommandOutcome(EXIT_NUMERIC, "", f"numerical failure: {exc}\n")
    except (ValueError, ConstraintViolated, ConstantOnLevel, OSError) as exc:
        return CommandOutcome(EXIT_INPUT, "", f"invalid input: {exc}\n")


def main(argv: list[str] | None = None) -> int:
    outcome = run(argv)
    if outcome.stdout:
        sys.stdout.write(outcome.stdout)
    if outcome.stderr:
        sys.stderr.write(outcome.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
