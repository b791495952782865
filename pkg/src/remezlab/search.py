"""Derivative-free search for polynomials that come closest to a Remez bound.

Each restart starts from a random admissible polynomial and runs a
coordinate pattern search over the real and imaginary parts of its free
coefficients. Candidates are always rescaled back onto the constraint
boundary ``deficiency == s``; the ratio being climbed is a sampled estimate
(dense grid maximum over grid quantile). The best polynomial of each
restart is then re-verified exactly: eigen rescaling, both sublevel
backends, and a sup-norm at ten times the usual grid density.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import chebyshev
from .audit import random_member, run_parallel
from .chebyshev import BoundKind
from .errors import ChebyshevOverflow, ConstraintViolated, DegenerateDraw, DomainError, NoFeasibleStart
from .sublevel import deficiency, level_for_deficiency
from .trigpoly import TWO_PI, Parity, TrigPoly, sup_norm

VIOLATION_TOL = 1e-6
VERIFY_DENSITY = 640
MAX_TRACE = 1000


def _log_bound(kind: BoundKind, n: int, s: float) -> float:
    return chebyshev.log_bound(kind, n, s)


def sharpness_ratio(Q: TrigPoly, s: float, kind=BoundKind.EVEN_PERIOD, *, density: int = 64) -> float:
    """``sup|Q| / bound(n, s)``; the division happens in log space for huge bounds."""
    kind = BoundKind.parse(kind)
    if kind in (BoundKind.CLASSICAL_ALGEBRAIC, BoundKind.CLASSICAL_EXP):
        raise DomainError("sharpness_ratio is defined for the periodic bounds only")
    d = deficiency(Q)
    if d > s + VIOLATION_TOL:
        raise ConstraintViolated(f"deficiency {d:.9g} exceeds s={s:.9g}")
    n = max(Q.degree, 1)
    sup = sup_norm(Q, density=density, min_points=4 * density)
    try:
        b = chebyshev.bound(kind, n, s)
        if b <= 1e300:
            return sup / b
    except ChebyshevOverflow:
        pass
    return math.exp(math.log(sup) - _log_bound(kind, n, s))


@dataclass
class SearchConfig:
    n: int
    s: float
    parity: Parity = Parity.EVEN
    kind: BoundKind = BoundKind.EVEN_PERIOD
    real: bool = False
    restarts: int = 8
    budget: int = 2000
    seed: int = 0
    kappa: float | None = None
    step_init: float = 0.25
    step_decay: float = 0.5
    step_min: float = 1e-7
    grid: int | None = None
    threads: int | None = field(default=None, compare=False)

    def __post_init__(self):
        self.parity = Parity(self.parity)
        self.kind = BoundKind.parse(self.kind)
        if self.parity is Parity.NEITHER:
            raise ValueError("parity must be even, odd or any")
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError("n must be an integer >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.budget < 100:
            raise ValueError("budget must be >= 100")
        if self.kappa is not None and not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if self.kind in (BoundKind.CLASSICAL_ALGEBRAIC, BoundKind.CLASSICAL_EXP):
            raise DomainError("search works with the periodic bounds even/odd/all")
        if self.kind is BoundKind.ODD_PERIOD and self.parity is not Parity.ODD:
            raise DomainError("the odd bound applies to odd polynomials only")
        # validates the (n, s) domain for the chosen kind
        _log_bound(self.kind, self.n, self.s)

    @property
    def effective_kappa(self) -> float:
        if self.kappa is not None:
            return self.kappa
        try:
            return min(1e6, 10.0 * chebyshev.bound(self.kind, self.n, self.s))
        except ChebyshevOverflow:
            return 1e6

    @property
    def grid_points(self) -> int:
        return self.grid or max(2048, 256 * self.n)

    def echo(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "parity": self.parity.value,
            "kind": self.kind.value,
            "real": self.real,
            "restarts": self.restarts,
            "budget": self.budget,
            "seed": self.seed,
            "kappa": self.effective_kappa,
            "step_init": self.step_init,
            "step_decay": self.step_decay,
            "step_min": self.step_min,
            "grid": self.grid_points,
        }


@dataclass
class SearchResult:
    best_poly: TrigPoly
    best_ratio: float
    best_restart: int
    trace: list[tuple[int, float]]
    violated: bool
    config: SearchConfig
    verification: dict
    restart_ratios: list[float]

    def to_json_obj(self) -> dict:
        return {
            "config": self.config.echo(),
            "best_ratio": self.best_ratio,
            "best_restart": self.best_restart,
            "violated": self.violated,
            "best_poly": self.best_poly.to_json_obj(),
            "verification": self.verification,
            "restart_ratios": self.restart_ratios,
            "trace": [[int(e), float(r)] for e, r in self.trace],
            "seed_provenance": {
                "master_seed": self.config.seed,
                "restart_seed": "numpy default_rng([master_seed, restart_index])",
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)


class _Parametrization:
    """Maps a real parameter vector to exponential-basis coefficients."""

    def __init__(self, n: int, parity: Parity, real: bool):
        self.n, self.parity, self.real = n, parity, real
        if parity is Parity.EVEN:
            self.ks = np.arange(0, n + 1)
        elif parity is Parity.ODD:
            self.ks = np.arange(1, n + 1)
        else:
            self.ks = np.arange(0, n + 1) if real else np.arange(-n, n + 1)

    def size(self) -> int:
        m = self.ks.size
        if not self.real:
            return 2 * m
        if self.parity is Parity.ANY:
            return 2 * m - 1  # c_0 real, c_k complex for k >= 1
        return m

    def coeffs(self, x: np.ndarray) -> np.ndarray:
        n = self.n
        c = np.zeros(2 * n + 1, dtype=complex)
        m = self.ks.size
        if self.real:
            if self.parity is Parity.EVEN:
                free = x.astype(complex)
            elif self.parity is Parity.ODD:
                free = 1j * x
            else:
                free = np.concatenate(([x[0]], x[1:m] + 1j * x[m:])).astype(complex)
        else:
            free = x[:m] + 1j * x[m:]
        if self.parity is Parity.EVEN:
            c[n + self.ks] = free
            c[n - self.ks] = free
        elif self.parity is Parity.ODD:
            c[n + self.ks] = free
            c[n - self.ks] = -free
        elif self.real:
            c[n + self.ks] = free
            c[n - self.ks[1:]] = np.conj(free[1:])
        else:
            c[n + self.ks] = free
        return c

    def params(self, c: np.ndarray) -> np.ndarray:
        n = self.n
        free = c[n + self.ks]
        if self.real:
            if self.parity is Parity.EVEN:
                return free.real.copy()
            if self.parity is Parity.ODD:
                return free.imag.copy()
            return np.concatenate(([free[0].real], free[1:].real, free[1:].imag))
        return np.concatenate((free.real, free.imag))


class _SampledObjective:
    """Grid estimates of sup and deficiency, with rescaling onto ``deficiency == s``."""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        npts = cfg.grid_points
        t = np.arange(npts) * (TWO_PI / npts)
        n = cfg.n
        self.basis = np.exp(1j * np.outer(t, np.arange(-n, n + 1)))
        self.npts = npts
        self.quantile_pos = (TWO_PI - cfg.s) / TWO_PI * (npts - 1)
        self.log_bound = _log_bound(cfg.kind, n, cfg.s)
        self.kappa = cfg.effective_kappa

    def __call__(self, c: np.ndarray) -> tuple[float, np.ndarray]:
        """Return (penalised sampled ratio, coefficients projected onto the constraint)."""
        vals = np.sort(np.abs(self.basis @ c))
        pos = self.quantile_pos
        i = int(pos)
        lam = vals[i] + (pos - i) * (vals[min(i + 1, self.npts - 1)] - vals[i])
        if not lam > 0:
            return -math.inf, c
        vals /= lam
        # After projection the sampled deficiency is s up to one grid cell,
        # so the penalty only guards against quantile round-off.
        sampled_def = TWO_PI * float(np.count_nonzero(vals > 1.0)) / self.npts
        penalty = self.kappa * max(0.0, sampled_def - self.cfg.s - TWO_PI / self.npts)
        ratio = math.exp(math.log(vals[-1]) - self.log_bound)
        return ratio - penalty, c / lam


def _restart(args: tuple[SearchConfig, int]) -> dict:
    cfg, index = args
    rng = np.random.default_rng([cfg.seed, index])
    param = _Parametrization(cfg.n, cfg.parity, cfg.real)
    objective = _SampledObjective(cfg)
    start = None
    for _ in range(8):
        try:
            start = random_member(cfg.n, cfg.s, cfg.parity, rng, real=cfg.real)
            break
        except DegenerateDraw:
            continue
    if start is None:
        return {"index": index, "ok": False}
    x = param.params(start.coeffs)
    f, c = objective(param.coeffs(x))
    x = param.params(c)
    evals = 1
    trace = [(evals, f)]
    step = cfg.step_init
    dim = x.size
    eye = np.eye(dim)
    while evals < cfg.budget:
        improved = False
        scale = float(np.max(np.abs(x))) or 1.0
        # coordinate directions first, then a random orthonormal frame
        for basis in (eye, None):
            if basis is None:
                basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
                basis = basis.T
            for d in basis:
                for sign in (1.0, -1.0):
                    if evals >= cfg.budget:
                        break
                    ft, ct = objective(param.coeffs(x + (sign * step * scale) * d))
                    evals += 1
                    if ft > f * (1.0 + 1e-15):
                        f, x = ft, param.params(ct)
                        trace.append((evals, f))
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
        if not improved:
            step *= cfg.step_decay
            if step < cfg.step_min:
                step = cfg.step_init
    return {"index": index, "ok": True, "ratio": f, "x": x, "trace": trace, "evals": evals}


def _verify(cfg: SearchConfig, Q: TrigPoly) -> tuple[TrigPoly, float, dict]:
    lam = level_for_deficiency(Q, cfg.s, "eigen")
    Q = Q / lam
    d_eigen = deficiency(Q, "eigen")
    d_sample = deficiency(Q, "sample")
    sup = sup_norm(Q, density=VERIFY_DENSITY, min_points=4 * VERIFY_DENSITY)
    ratio = math.exp(math.log(sup) - _log_bound(cfg.kind, cfg.n, cfg.s))
    feasible = max(d_eigen, d_sample) <= cfg.s + VIOLATION_TOL
    return Q, ratio, {
        "deficiency_eigen": d_eigen,
        "deficiency_sample": d_sample,
        "sup_dense": sup,
        "log_bound": _log_bound(cfg.kind, cfg.n, cfg.s),
        "feasible": feasible,
    }


def _decimate(trace: list[tuple[int, float]]) -> list[tuple[int, float]]:
    if len(trace) <= MAX_TRACE:
        return trace
    idx = np.unique(np.linspace(0, len(trace) - 1, MAX_TRACE).round().astype(int))
    return [trace[i] for i in idx]


def maximize_ratio(config: SearchConfig) -> SearchResult:
    """Multi-start pattern search for the largest verified sharpness ratio.

    Restarts are independent and seeded by ``(seed, restart_index)``, so the
    result does not depend on how they are scheduled.
    """
    runs = run_parallel(_restart, [(config, i) for i in range(config.restarts)], config.threads)
    runs = [r for r in runs if r["ok"]]
    if not runs:
        raise NoFeasibleStart("every restart produced a degenerate start")
    param = _Parametrization(config.n, config.parity, config.real)
    verified = []
    for r in runs:
        Q, ratio, info = _verify(config, TrigPoly(param.coeffs(r["x"])))
        if info["feasible"]:
            verified.append((ratio, r["index"], Q, info, r))
    if not verified:
        raise NoFeasibleStart("no restart survived exact feasibility verification")
    verified.sort(key=lambda v: (-v[0], v[1]))
    ratio, index, Q, info, run = verified[0]
    evals_seen = [e for e, _ in run["trace"]]
    best_so_far = np.maximum.accumulate([v for _, v in run["trace"]]).tolist()
    trace = list(zip(evals_seen, best_so_far))
    info["sampled_ratio"] = run["ratio"]
    info["evaluations"] = run["evals"]
    return SearchResult(
        best_poly=Q,
        best_ratio=ratio,
        best_restart=index,
        trace=_decimate(trace),
        violated=ratio > 1.0 + VIOLATION_TOL,
        config=config,
        verification=info,
        restart_ratios=[v[0] for v in sorted(verified, key=lambda v: v[1])],
    )
