"""Numerical audit of the theorem and lemma statements.

Each check evaluates both sides of one inequality and records whether it
holds in the stated direction. Nothing here assumes a statement is true:
the two arccos rows, for instance, come out false as written.

Claim ids
---------
``Thm2.1``  even members, ``sup|Q| <= T_2n(sec(s/4))``
``Thm2.2``  odd members, ``sup|Q| <= T_2n(sec(s/4)) + 1/sqrt2``
``Thm2.2-step``  the same members against the sharper square-root value
``Thm2.2-chain``  ``R = 2|Q|^2 - 1`` is even, real, degree 2n, same deficiency
``Thm2.3``  arbitrary members, ``s < pi``, ``sup|R| <= T_2n(sec(s/2))``
``Lem3.1`` / ``Lem3.2``  ``|Q(0)|`` for real / complex even members
``Lem3.3`` / ``Lem3.3*``  ``|P(1)|`` / ``|P(-1)|`` where ``Q(t) = P(cos t)``
``Lem3.4``  ``|P(b)|`` for ``P`` moved affinely onto a random ``[a, b]``
``Lem3.5``  arcsine measure of ``A in [1-2r, 1]``
``Lem3.6``  ``A in [-1, 1-2r]`` (the reading used for A_1)
``Lem3.6-literal``  ``A in [-1, -1+2r]`` the literal reading, for ``r <= 1/2``
``Lem3.7a`` / ``Lem3.7b``  the two arccos inequalities
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import chebyshev
from .errors import DegenerateDraw, DomainError
from .sublevel import (
    LineIntervalSet,
    algebraic_sublevel,
    cheb_measure,
    deficiency,
    level_for_deficiency,
    random_line_set,
)
from .trigpoly import (
    TWO_PI,
    AlgPoly,
    Parity,
    TrigPoly,
    abs_squared,
    evaluate,
    is_real_valued,
    parity_of,
    sup_norm,
    to_cos_poly,
)

RATIO_TOL = 1e-9
DEFICIENCY_SLACK = 1e-6

CLAIMS = (
    "Thm2.1",
    "Thm2.2",
    "Thm2.3",
    "Lem3.1",
    "Lem3.2",
    "Lem3.3",
    "Lem3.3*",
    "Lem3.4",
    "Lem3.5",
    "Lem3.6",
    "Lem3.6-literal",
    "Lem3.7",
)

DEFAULT_SAMPLES = {
    "Thm2.1": 10_000,
    "Thm2.2": 2_000,
    "Thm2.3": 10_000,
    "Lem3.1": 1_000,
    "Lem3.2": 1_000,
    "Lem3.3": 1_000,
    "Lem3.3*": 1_000,
    "Lem3.4": 1_000,
    "Lem3.5": 10_000,
    "Lem3.6": 10_000,
    "Lem3.6-literal": 2_000,
}

LEMMA_3_7_R = (0.01,) + tuple(round(0.05 * k, 2) for k in range(1, 20)) + (0.99,)

CSV_COLUMNS = ("claim_id", "inputs", "lhs", "rhs", "holds_as_stated", "margin", "notes")


@dataclass
class AuditReport:
    """One evaluated claim.

    For upper-bound claims ``margin = 1 - lhs/rhs`` and the claim holds when
    ``margin >= -RATIO_TOL``; for strict lower-bound claims ``margin = lhs - rhs``.
    """

    claim_id: str
    inputs: dict[str, Any]
    lhs: float
    rhs: float
    holds_as_stated: bool
    margin: float
    notes: str = ""

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds_as_stated": self.holds_as_stated,
            "margin": self.margin,
            "notes": self.notes,
        }


def _draw_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _symmetrize(c: np.ndarray, parity: Parity, real: bool) -> np.ndarray:
    if real:
        c = 0.5 * (c + np.conj(c[::-1]))
    if parity is Parity.EVEN:
        c = 0.5 * (c + c[::-1])
    elif parity is Parity.ODD:
        c = 0.5 * (c - c[::-1])
    return c


def random_member(n: int, s: float, parity=Parity.ANY, seed=None, *, real: bool = False, backend: str = "eigen") -> TrigPoly:
    """A seeded random polynomial of degree ``n`` with deficiency ``s`` (to 1e-6).

    Coefficients are standard complex normal, symmetrised for ``parity``
    (and made real-valued if ``real``), then divided by the smallest ``lam``
    with ``m({|Q| <= lam}) >= 2pi - s``. The result sits on the boundary of
    the admissible class, where any violation would show up first.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    if not 0.0 < s < TWO_PI:
        raise DomainError(f"s={s!r} outside (0, 2pi)")
    parity = Parity(parity)
    rng = _draw_rng(seed)
    raw = (rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1)) / math.sqrt(2.0)
    c = _symmetrize(raw, parity, real)
    if np.max(np.abs(c)) < 1e-12:
        raise DegenerateDraw("random draw is numerically zero")
    Q = TrigPoly(c)
    return Q / level_for_deficiency(Q, s, backend)


def _upper_report(claim, inputs, lhs, rhs, notes="", log_domain=False) -> AuditReport:
    ratio = lhs / rhs if not log_domain else math.exp(lhs - rhs)
    margin = 1.0 - ratio
    holds = ratio <= 1.0 + RATIO_TOL
    if log_domain:
        notes = (notes + "; " if notes else "") + "lhs/rhs are natural logs"
    return AuditReport(claim, inputs, float(lhs), float(rhs), bool(holds), float(margin), notes)


def _checked_sup(Q: TrigPoly, rhs: float) -> tuple[float, str]:
    lhs = sup_norm(Q)
    if lhs > rhs * (1.0 + RATIO_TOL):
        dense = sup_norm(Q, density=640, min_points=2560)
        return dense, "re-checked at 10x sup density"
    return lhs, ""


def _member_inputs(Q: TrigPoly, s: float, extra: dict | None = None) -> dict:
    d = deficiency(Q)
    out = {"n": Q.degree, "s": float(s), "deficiency": float(d)}
    if d > s + DEFICIENCY_SLACK:
        raise DomainError(f"deficiency {d} exceeds s={s}: not a member")
    if extra:
        out.update(extra)
    return out


def _require_parity(Q: TrigPoly, parity: Parity):
    got = parity_of(Q, 1e-10)
    if got is not parity:
        raise DomainError(f"expected a {parity.value} polynomial, got {got.value}")


def audit_theorem_2_1(Q: TrigPoly, s: float, inputs: dict | None = None) -> AuditReport:
    _require_parity(Q, Parity.EVEN)
    rec = _member_inputs(Q, s, inputs)
    rhs = chebyshev.bound_even(Q.degree, s)
    lhs, note = _checked_sup(Q, rhs)
    return _upper_report("Thm2.1", rec, lhs, rhs, note)


def audit_theorem_2_2(Q: TrigPoly, s: float, inputs: dict | None = None) -> AuditReport:
    _require_parity(Q, Parity.ODD)
    rec = _member_inputs(Q, s, inputs)
    rhs = chebyshev.bound_odd(Q.degree, s)
    lhs, note = _checked_sup(Q, rhs)
    chain = audit_theorem_2_2_chain(Q, s, dict(rec))
    note = (note + "; " if note else "") + f"proof chain R=2|Q|^2-1 {'ok' if chain.holds_as_stated else 'FAILED'}"
    return _upper_report("Thm2.2", rec, lhs, rhs, note)


def audit_theorem_2_2_step(Q: TrigPoly, s: float, inputs: dict | None = None) -> AuditReport:
    """``sup|Q|`` against the square-root intermediate of the odd bound."""
    _require_parity(Q, Parity.ODD)
    rec = _member_inputs(Q, s, inputs)
    rhs = chebyshev.odd_sqrt_step(Q.degree, s)
    lhs, note = _checked_sup(Q, rhs)
    return _upper_report("Thm2.2-step", rec, lhs, rhs, note)


def audit_theorem_2_2_chain(Q: TrigPoly, s: float, inputs: dict | None = None) -> AuditReport:
    """``R = 2|Q|^2 - 1`` is even, real, of degree ``2n`` and has Q's deficiency.

    lhs is ``|deficiency(R) - deficiency(Q)|`` and rhs the tolerance 1e-6;
    the structural checks are folded into ``holds_as_stated``.
    """
    R = 2.0 * abs_squared(Q) - 1.0
    even = parity_of(R, 1e-10) is Parity.EVEN
    real = is_real_valued(R, 1e-12)
    degree_ok = R.degree == 2 * Q.degree
    dQ = deficiency(Q)
    dR = deficiency(R)
    gap = abs(dR - dQ)
    holds = even and real and degree_ok and gap <= 1e-6
    rec = dict(inputs or {"n": Q.degree, "s": float(s)})
    rec.update({"deficiency_Q": float(dQ), "deficiency_R": float(dR)})
    notes = f"even={even} real={real} degree={R.degree}"
    return AuditReport("Thm2.2-chain", rec, float(gap), 1e-6, bool(holds), float(1e-6 - gap), notes)


def audit_theorem_2_3(R: TrigPoly, s: float, inputs: dict | None = None) -> AuditReport:
    if not 0.0 < s < math.pi:
        raise DomainError("the general bound needs s in (0, pi)")
    rec = _member_inputs(R, s, inputs)
    rhs = chebyshev.bound_all(R.degree, s)
    lhs, note = _checked_sup(R, rhs)
    return _upper_report("Thm2.3", rec, lhs, rhs, note)


def audit_lemma_3_1_or_3_2(Q: TrigPoly, s: float, inputs: dict | None = None) -> AuditReport:
    """``|Q(0)| <= T_2n(sec(s/4))``; reported as Lem3.1 for real ``Q``, else Lem3.2."""
    _require_parity(Q, Parity.EVEN)
    rec = _member_inputs(Q, s, inputs)
    claim = "Lem3.1" if is_real_valued(Q, 1e-12) else "Lem3.2"
    return _upper_report(claim, rec, abs(evaluate(Q, 0.0)), chebyshev.bound_even(Q.degree, s))


def audit_lemma_3_3(Q: TrigPoly, s: float, endpoint: int = 1, inputs: dict | None = None) -> AuditReport:
    """``|P(+-1)| <= T_2n(sec(s/4))`` where ``Q(t) = P(cos t)``.

    The arcsine-measure hypothesis is recomputed on the algebraic side.
    """
    rec = _member_inputs(Q, s, inputs)
    P = to_cos_poly(Q)
    mu = cheb_measure(-1.0, 1.0, algebraic_sublevel(P))
    hypothesis = mu >= math.pi - s / 2 - DEFICIENCY_SLACK
    rec["mu_sublevel"] = float(mu)
    claim = "Lem3.3" if endpoint == 1 else "Lem3.3*"
    rep = _upper_report(claim, rec, abs(P(float(endpoint))), chebyshev.bound_even(Q.degree, s))
    if not hypothesis:
        rep.notes = "hypothesis not met (vacuous)"
        rep.holds_as_stated = True
    return rep


def _affine_to(P: AlgPoly, a: float, b: float) -> AlgPoly:
    """``x -> P((x - (a+b)/2) / ((b-a)/2))`` in the power basis."""
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    lin = np.array([-mid / half, 1.0 / half])
    out = np.zeros(P.coeffs.size, dtype=complex)
    power = np.array([1.0 + 0j])
    for j, aj in enumerate(P.coeffs):
        out[: j + 1] += aj * power
        power = np.convolve(power, lin)
    return AlgPoly(out)


def audit_lemma_3_4(Q: TrigPoly, s: float, a: float, b: float, inputs: dict | None = None) -> AuditReport:
    """``|P(b)| <= T_2n(sec(s/4))`` when ``mu_[a,b]({|P| <= 1}) >= (b-a)/2 (pi - s/2)``."""
    if not a < b:
        raise DomainError("the affine transfer needs a < b")
    rec = _member_inputs(Q, s, inputs)
    P = _affine_to(to_cos_poly(Q), a, b)
    mu = cheb_measure(a, b, algebraic_sublevel(P, a, b))
    need = 0.5 * (b - a) * (math.pi - s / 2)
    rec.update({"a": float(a), "b": float(b), "mu_sublevel": float(mu), "mu_required": float(need)})
    rep = _upper_report("Lem3.4", rec, abs(P(b)), chebyshev.bound_even(Q.degree, s))
    if mu < need - DEFICIENCY_SLACK * max(1.0, b - a):
        rep.notes = "hypothesis not met (vacuous)"
        rep.holds_as_stated = True
    return rep


_LEMMA_HOSTS = {
    "3.5": lambda r: (1.0 - 2.0 * r, 1.0),
    "3.6": lambda r: (-1.0, 1.0 - 2.0 * r),
    "3.6-literal": lambda r: (-1.0, -1.0 + 2.0 * r),
}


def audit_lemma_3_5_or_3_6(r: float, A: LineIntervalSet, which: str = "3.5", inputs: dict | None = None) -> AuditReport:
    """Strict inequality ``mu_host(A) > c(r) mu_[-1,1](A)``.

    ``which`` selects the host interval and constant: ``"3.5"`` uses
    ``[1-2r, 1]`` and ``sqrt(r)``; ``"3.6"`` uses ``[-1, 1-2r]`` and
    ``sqrt(1-r)``; ``"3.6-literal"`` draws ``A`` from ``[-1, -1+2r]`` as
    printed and measures it on ``[-1, 1-2r]``, which needs ``r <= 1/2``.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    if which not in _LEMMA_HOSTS:
        raise ValueError(f"which must be one of {tuple(_LEMMA_HOSTS)}")
    lo, hi = _LEMMA_HOSTS[which](r)
    for x0, x1 in A.arcs:
        if x0 < lo - 1e-15 or x1 > hi + 1e-15:
            raise DomainError(f"A leaves [{lo}, {hi}]")
    if A.measure() <= 0.0:
        raise DomainError("A must have positive measure")
    if which == "3.5":
        host, const = (1.0 - 2.0 * r, 1.0), math.sqrt(r)
    else:
        host, const = (-1.0, 1.0 - 2.0 * r), math.sqrt(1.0 - r)
        if which == "3.6-literal" and r > 0.5:
            raise DomainError("the literal reading needs r <= 1/2 so that A fits the measured interval")
    clip = tuple((max(x0, host[0]), min(x1, host[1])) for x0, x1 in A.arcs)
    lhs = cheb_measure(host[0], host[1], LineIntervalSet(host[0], host[1], clip))
    full = cheb_measure(-1.0, 1.0, LineIntervalSet(-1.0, 1.0, clip))
    rhs = const * full
    rec = {"r": float(r), "A": [list(p) for p in A.arcs]}
    if inputs:
        rec.update(inputs)
    claim = "Lem" + which
    return AuditReport(claim, rec, float(lhs), float(rhs), bool(lhs > rhs), float(lhs - rhs), "strict: lhs > rhs")


def audit_lemma_3_7(r: float) -> tuple[AuditReport, AuditReport]:
    """Both arccos inequalities in the stated (``>``) direction.

    The notes record which direction actually holds at ``r``.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    out = []
    pairs = (
        ("Lem3.7a", math.acos(1.0 - 2.0 * r), math.pi * math.sqrt(r)),
        ("Lem3.7b", math.pi - math.acos(1.0 - 2.0 * r), math.pi * math.sqrt(1.0 - r)),
    )
    for claim, lhs, rhs in pairs:
        stated = lhs > rhs
        if stated:
            note = "stated: lhs > rhs; stated direction holds"
        elif lhs < rhs:
            note = "stated: lhs > rhs; reversed direction lhs < rhs holds"
        else:
            note = "stated: lhs > rhs; equality"
        out.append(AuditReport(claim, {"r": float(r)}, lhs, rhs, stated, lhs - rhs, note))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class AuditConfig:
    claims: Sequence[str] = CLAIMS
    samples: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    seed: int = 0
    n_max: int = 6
    odd_n_max: int = 4
    r_values: Sequence[float] = LEMMA_3_7_R
    threads: int | None = None

    @classmethod
    def default(cls) -> "AuditConfig":
        return cls()

    @classmethod
    def from_json_obj(cls, obj: dict) -> "AuditConfig":
        cfg = cls()
        unknown = set(obj) - {"claims", "samples", "seed", "n_max", "odd_n_max", "r_values", "threads"}
        if unknown:
            raise ValueError(f"unknown audit config keys: {sorted(unknown)}")
        if "claims" in obj:
            bad = [c for c in obj["claims"] if c not in CLAIMS]
            if bad:
                raise ValueError(f"unknown claim ids: {bad}")
            cfg.claims = tuple(obj["claims"])
        if "samples" in obj:
            smp = obj["samples"]
            cfg.samples = {c: int(smp) for c in DEFAULT_SAMPLES} if isinstance(smp, int) else {**cfg.samples, **smp}
        for key in ("seed", "n_max", "odd_n_max", "threads"):
            if key in obj:
                setattr(cfg, key, int(obj[key]))
        if "r_values" in obj:
            cfg.r_values = tuple(float(r) for r in obj["r_values"])
        return cfg

    def echo(self) -> dict:
        d = asdict(self)
        d["claims"] = list(self.claims)
        d["r_values"] = list(self.r_values)
        d.pop("threads")
        return d


def _task_rng(seed: int, claim: str, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, CLAIMS.index(claim), index])


def _member_seed(rng) -> int:
    return int(rng.integers(0, 2**63 - 1))


def _run_task(task: tuple) -> list[AuditReport]:
    claim, index, seed, n_max, odd_n_max = task[:5]
    rng = _task_rng(seed, claim, index)
    base = {"task": index}
    if claim == "Lem3.7":
        r = task[5]
        return list(audit_lemma_3_7(r))
    if claim in ("Lem3.5", "Lem3.6", "Lem3.6-literal"):
        which = claim[3:]
        r = float(rng.uniform(0.0, 0.5 if which == "3.6-literal" else 1.0)) or 0.5
        lo, hi = _LEMMA_HOSTS[which](r)
        A = random_line_set(rng, lo, hi)
        return [audit_lemma_3_5_or_3_6(r, A, which, base)]
    if claim == "Thm2.2":
        n = int(rng.integers(1, odd_n_max + 1))
        s = float(rng.uniform(0.05, TWO_PI - 0.05))
        mseed = _member_seed(rng)
        Q = random_member(n, s, Parity.ODD, mseed)
        rec = {**base, "seed": mseed, "parity": "odd"}
        return [
            audit_theorem_2_2(Q, s, rec),
            audit_theorem_2_2_step(Q, s, rec),
            audit_theorem_2_2_chain(Q, s, {"n": n, "s": s, **rec}),
        ]
    if claim == "Thm2.3":
        n = int(rng.integers(1, n_max + 1))
        s = float(rng.uniform(0.05, math.pi - 0.05))
        mseed = _member_seed(rng)
        R = random_member(n, s, Parity.ANY, mseed)
        return [audit_theorem_2_3(R, s, {**base, "seed": mseed, "parity": "any"})]
    # even-member claims
    n = int(rng.integers(1, n_max + 1))
    s = float(rng.uniform(0.05, TWO_PI - 0.05))
    mseed = _member_seed(rng)
    real = claim == "Lem3.1"
    Q = random_member(n, s, Parity.EVEN, mseed, real=real)
    rec = {**base, "seed": mseed, "parity": "even", "real": real}
    if claim == "Thm2.1":
        return [audit_theorem_2_1(Q, s, rec)]
    if claim in ("Lem3.1", "Lem3.2"):
        return [audit_lemma_3_1_or_3_2(Q, s, rec)]
    if claim == "Lem3.3":
        return [audit_lemma_3_3(Q, s, 1, rec)]
    if claim == "Lem3.3*":
        return [audit_lemma_3_3(Q, s, -1, rec)]
    if claim == "Lem3.4":
        a, b = sorted(rng.uniform(-3.0, 3.0, size=2))
        if b - a < 1e-3:
            b = a + 1.0
        return [audit_lemma_3_4(Q, s, float(a), float(b), rec)]
    raise ValueError(f"unknown claim {claim!r}")


def _tasks(cfg: AuditConfig) -> list[tuple]:
    tasks = []
    for claim in cfg.claims:
        if claim == "Lem3.7":
            tasks.extend((claim, i, cfg.seed, cfg.n_max, cfg.odd_n_max, r) for i, r in enumerate(cfg.r_values))
        else:
            count = cfg.samples.get(claim, 0)
            tasks.extend((claim, i, cfg.seed, cfg.n_max, cfg.odd_n_max) for i in range(count))
    return tasks


def thread_count(explicit: int | None = None) -> int:
    """Worker count: explicit value, else ``REMEZLAB_THREADS`` (0 = all cores)."""
    value = explicit if explicit is not None else int(os.environ.get("REMEZLAB_THREADS", "1") or 1)
    return max(1, os.cpu_count() or 1) if value <= 0 else value


def run_parallel(func, items: list, threads: int | None = None) -> list:
    """Map ``func`` over ``items`` keeping input order (hence schedule-independent)."""
    workers = thread_count(threads)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (8 * workers))))


def audit_sweep(config: AuditConfig | None = None) -> list[AuditReport]:
    """Run every configured claim; reports come back in task order."""
    cfg = config or AuditConfig.default()
    results = run_parallel(_run_task, _tasks(cfg), cfg.threads)
    return [rep for batch in results for rep in batch]


def summarize(reports: Iterable[AuditReport]) -> dict[str, dict[str, int]]:
    out: dict[str, dict[str, int]] = {}
    for rep in reports:
        entry = out.setdefault(rep.claim_id, {"total": 0, "violations": 0})
        entry["total"] += 1
        entry["violations"] += 0 if rep.holds_as_stated else 1
    return dict(sorted(out.items()))


def reports_to_json(reports: Sequence[AuditReport], config: AuditConfig | None = None) -> str:
    payload = {
        "config": config.echo() if config else None,
        "summary": summarize(reports),
        "reports": [r.to_json_obj() for r in reports],
    }
    return json.dumps(payload, indent=1)


def reports_to_csv(reports: Sequence[AuditReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(
            [
                r.claim_id,
                json.dumps(r.inputs, sort_keys=True),
                repr(r.lhs),
                repr(r.rhs),
                "true" if r.holds_as_stated else "false",
                repr(r.margin),
                r.notes,
            ]
        )
    return buf.getvalue()
