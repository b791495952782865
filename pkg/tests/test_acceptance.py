"""Acceptance criteria 1-13, each at its stated tolerance and sample size.

Every test records one PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
from scipy import integrate

from conftest import record_acceptance
from remezlab import chebyshev as ch
from remezlab.audit import LEMMA_3_7_R, AuditConfig, audit_lemma_3_7, audit_sweep, summarize
from remezlab.cli import run
from remezlab.extremal import extremal_even
from remezlab.search import SearchConfig, maximize_ratio
from remezlab.sublevel import LineIntervalSet, cheb_measure, random_line_set, sublevel_set
from remezlab.trigpoly import TWO_PI, TrigPoly, sup_norm

S_GRID_HALF = [0.5 * k for k in range(1, 12)]  # 0.5 .. 5.5


def _sweep(claims, samples, seed=2024):
    cfg = AuditConfig(claims=tuple(claims), samples={c: samples for c in claims}, seed=seed)
    return audit_sweep(cfg)


def _upper_summary(reports, claim):
    rows = [r for r in reports if r.claim_id == claim]
    violations = sum(not r.holds_as_stated for r in rows)
    worst = max(r.lhs / r.rhs for r in rows)
    return rows, violations, worst


def test_criterion_01_bound_values():
    cases = [
        ("bound_even(1, pi)", ch.bound_even(1, math.pi), 3.0),
        ("bound_even(2, pi)", ch.bound_even(2, math.pi), 17.0),
        ("bound_all(1, pi/2)", ch.bound_all(1, math.pi / 2), 3.0),
        ("bound_classical(1, 1)", ch.bound_classical(1, 1.0), 3.0),
    ]
    errs = {name: abs(v - ref) / ref for name, v, ref in cases}
    ok = max(errs.values()) <= 1e-12
    record_acceptance(1, ok, f"max relative error {max(errs.values()):.2e} (tol 1e-12)")
    assert ok, errs


def test_criterion_02_identity():
    worst = 0.0
    for n in range(0, 11):
        for k in range(1, 25):
            s = 0.25 * k
            a = ch.bound_even(n, s)
            b = ch.bound_even_identity(n, s)
            worst = max(worst, abs(a - b) / abs(a))
    ok = worst <= 1e-11
    record_acceptance(2, ok, f"n<=10, s=0.25..6.0: max relative gap {worst:.2e} (tol 1e-11)")
    assert ok


def test_criterion_03_equality_case():
    worst_ratio, worst_end, worst_meas, bad = 0.0, 0.0, 0.0, []
    for n in range(1, 7):
        for s in S_GRID_HALF:
            Q = extremal_even(n, s)
            ratio = sup_norm(Q) / ch.bound_even(n, s)
            S = sublevel_set(Q, 1.0)
            single = len(S.arcs) == 1
            end = max(abs(S.arcs[0][0] - s / 2), abs(S.arcs[0][1] - (TWO_PI - s / 2))) if single else math.inf
            meas = abs(S.measure() - (TWO_PI - s))
            worst_ratio = max(worst_ratio, abs(ratio - 1))
            worst_end, worst_meas = max(worst_end, end), max(worst_meas, meas)
            if abs(ratio - 1) > 1e-8 or end > 1e-7 or meas > 1e-6:
                bad.append((n, s))
    ok = not bad
    record_acceptance(
        3,
        ok,
        f"66 cases: |ratio-1| <= {worst_ratio:.1e}, endpoint err {worst_end:.1e}, measure err {worst_meas:.1e}",
    )
    assert ok, bad


def test_criterion_04_even_bulk_audit():
    reports = _sweep(["Thm2.1"], 10_000)
    rows, violations, worst = _upper_summary(reports, "Thm2.1")
    ok = len(rows) == 10_000 and violations == 0
    record_acceptance(4, ok, f"{len(rows)} even members n<=6: {violations} violations, max ratio {worst:.6f}")
    assert ok


def test_criterion_05_odd_audit_and_chain():
    reports = _sweep(["Thm2.2"], 2_000)
    rows, violations, worst = _upper_summary(reports, "Thm2.2")
    chain = [r for r in reports if r.claim_id == "Thm2.2-chain"]
    chain_bad = sum(not r.holds_as_stated for r in chain)
    ok = len(rows) == 2_000 and violations == 0 and len(chain) == 2_000 and chain_bad == 0
    record_acceptance(
        5,
        ok,
        f"{len(rows)} odd members n<=4: {violations} violations (max ratio {worst:.6f}); "
        f"chain R=2|Q|^2-1 failures {chain_bad}, max deficiency gap {max(r.lhs for r in chain):.1e}",
    )
    assert ok


def test_criterion_06_general_audit():
    reports = _sweep(["Thm2.3"], 10_000)
    rows, violations, worst = _upper_summary(reports, "Thm2.3")
    ok = len(rows) == 10_000 and violations == 0 and all(0 < r.inputs["s"] < math.pi for r in rows)
    record_acceptance(6, ok, f"{len(rows)} members, s in (0, pi): {violations} violations, max ratio {worst:.6f}")
    assert ok


def test_criterion_07_measure_lemmas():
    reports = _sweep(["Lem3.5", "Lem3.6"], 10_000)
    summary = summarize(reports)
    ok = all(summary[c]["total"] == 10_000 and summary[c]["violations"] == 0 for c in ("Lem3.5", "Lem3.6"))
    min_margin = min(r.margin for r in reports)
    record_acceptance(7, ok, f"{summary} ; smallest strict margin {min_margin:.2e}")
    assert ok


def test_criterion_08_arccos_pins(tmp_path):
    a, _ = audit_lemma_3_7(0.25)
    _, b = audit_lemma_3_7(0.5)
    pins = (
        abs(a.lhs - 1.047198) < 5e-7
        and abs(a.rhs - 1.570796) < 5e-7
        and not a.holds_as_stated
        and abs(b.lhs - 1.570796) < 5e-7
        and abs(b.rhs - 2.221441) < 5e-7
        and not b.holds_as_stated
    )
    reversed_ok = all(rep.lhs < rep.rhs for r in LEMMA_3_7_R for rep in audit_lemma_3_7(r))
    cfg = tmp_path / "arccos.json"
    cfg.write_text(json.dumps({"claims": ["Lem3.7"]}))
    code_plain = run(["audit", "--config", str(cfg)]).exit_code
    code_expected = run(["audit", "--config", str(cfg), "--expect-findings", "Lem3.7"]).exit_code
    ok = pins and reversed_ok and code_plain == 3 and code_expected == 0
    record_acceptance(
        8,
        ok,
        f"r=0.25: {a.lhs:.6f} < {a.rhs:.6f}; r=0.5: {b.lhs:.6f} < {b.rhs:.6f}; "
        f"reversed direction on all {len(LEMMA_3_7_R)} r: {reversed_ok}; exit codes {code_plain}/{code_expected}",
    )
    assert ok


def _quad(a, b, S):
    half, mid = (b - a) / 2, (a + b) / 2

    def density(x):
        return half / math.sqrt(max(half * half - (x - mid) ** 2, 1e-300))

    return sum(integrate.quad(density, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)[0] for lo, hi in S.arcs)


def test_criterion_09_measure_oracle():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(1000):
        a = float(rng.uniform(-5, 5))
        b = a + float(rng.uniform(0.01, 5))
        S = random_line_set(rng, a, b)
        closed, quad = cheb_measure(a, b, S), _quad(a, b, S)
        worst = max(worst, abs(closed - quad) / max(abs(quad), 1e-300))
    total = cheb_measure(-1.0, 1.0, LineIntervalSet(-1.0, 1.0, ((-1.0, 1.0),)))
    ok = worst <= 1e-8 and abs(total - math.pi) <= 1e-12
    record_acceptance(9, ok, f"1000 sets: max relative gap {worst:.1e}; mu[-1,1]([-1,1]) - pi = {total - math.pi:.1e}")
    assert ok


def test_criterion_10_backend_equivalence():
    rng = np.random.default_rng(10)
    worst, count_mismatch, arcs_seen = 0.0, 0, 0
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        Q = TrigPoly(rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1))
        grid = np.abs(Q(np.linspace(0, TWO_PI, 1024, endpoint=False)))
        Q = Q / float(np.quantile(grid, rng.uniform(0.05, 0.95)))
        A, B = sublevel_set(Q, 1.0, "eigen"), sublevel_set(Q, 1.0, "sample")
        if len(A.arcs) != len(B.arcs):
            count_mismatch += 1
            continue
        arcs_seen += len(A.arcs)
        for (a0, a1), (b0, b1) in zip(A.arcs, B.arcs):
            worst = max(worst, abs(a0 - b0), abs(a1 - b1))
    ok = count_mismatch == 0 and worst <= 1e-7
    record_acceptance(
        10, ok, f"1000 polynomials n<=8 ({arcs_seen} arcs): count mismatches {count_mismatch}, max endpoint gap {worst:.1e}"
    )
    assert ok


def test_criterion_11_search_recovers_extremal():
    results = []
    for n in (1, 2, 3):
        start = time.perf_counter()
        res = maximize_ratio(
            SearchConfig(n=n, s=math.pi, parity="even", real=True, restarts=32, budget=5000, seed=11)
        )
        results.append((n, res.best_ratio, time.perf_counter() - start))
    ok = all(r >= 0.999 and t < 60 for _, r, t in results)
    detail = ", ".join(f"n={n}: {r:.6f} in {t:.1f}s" for n, r, t in results)
    record_acceptance(11, ok, f"32 restarts x 5000 evals: {detail}")
    assert ok


def test_criterion_12_classical_vs_exponential():
    worst = -math.inf
    for n in range(1, 21):
        for k in range(1, 21):
            s = 0.05 * k
            worst = max(worst, ch.log_bound_classical(n, s) - ch.log_bound_classical_exp(n, s))
    ok = worst <= 0.0
    record_acceptance(12, ok, f"n<=20, s=0.05..1.0: max log(classical) - log(exp estimate) = {worst:.3f}")
    assert ok


def _cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "remezlab", *args], cwd=cwd, capture_output=True, check=False)


def test_criterion_13_determinism(tmp_path):
    cfg = tmp_path / "audit.json"
    cfg.write_text(json.dumps({"samples": 150, "seed": 13}))
    outputs = []
    for run_id in (1, 2):
        audit = _cli(
            ["audit", "--config", str(cfg), "--csv", f"a{run_id}.csv", "--expect-findings", "Lem3.7"], tmp_path
        )
        search = _cli(["search", "--n", "2", "--restarts", "8", "--budget", "2000", "--seed", "13"], tmp_path)
        assert audit.returncode == 0 and search.returncode == 0, (audit.stderr, search.stderr)
        outputs.append((audit.stdout, (tmp_path / f"a{run_id}.csv").read_bytes(), search.stdout))
    same = outputs[0] == outputs[1]
    sizes = "/".join(str(len(x)) for x in outputs[0])
    record_acceptance(13, same, f"two consecutive CLI runs, audit JSON/CSV and search JSON ({sizes} bytes) identical: {same}")
    assert same
