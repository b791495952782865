"""Sublevel sets ``{t in K : |Q(t)| <= level}``, their measure, and the arcsine measure.

Two independent backends locate the boundary points, the roots of
``G = |Q|^2 - level^2``:

``eigen``
    companion-matrix eigenvalues of ``z^{2n} G``, kept near the unit circle and
    Newton-polished on ``G``;
``sample``
    a sign scan of ``G`` and of ``G'`` on a dense grid, so that every monotone
    piece of ``G`` is bracketed, followed by bisection.

Both hand their breakpoints to the same classifier, which labels each
sub-arc by the sign of ``G`` at its midpoint. Touch points, where ``G``
reaches zero without changing sign, do not split arcs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstantOnLevel, DomainError, NoConvergence, ParseError
from .trigpoly import TWO_PI, AlgPoly, TrigPoly, _bisect_roots, abs_squared, evaluate, to_cos_poly

MERGE_TOL = 1e-12
EIGEN_CIRCLE_TOL = 1e-8
# eps * sum|g_k| / level^2 above this switches eigen to piecewise interpolants
GLOBAL_COMPANION_LIMIT = 1e-10
# Refuse levels below this multiple of the coefficient-driven evaluation error.
RESOLVABLE_LEVEL = 20.0
BACKENDS = ("eigen", "sample")
_EPS = np.finfo(float).eps


def _merge(pairs: Iterable[tuple[float, float]], tol: float) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for lo, hi in sorted(pairs):
        if hi - lo <= 0:
            continue
        if out and lo <= out[-1][1] + tol:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


@dataclass(frozen=True)
class CircleIntervalSet:
    """Finite union of closed arcs of the circle, stored in [0, 2pi].

    An arc through 0 is stored split as ``(lo, 2pi)`` and ``(0, hi)``; the
    whole circle is ``((0, 2pi),)``.
    """

    arcs: tuple[tuple[float, float], ...] = ()

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[float, float]], tol: float = MERGE_TOL) -> "CircleIntervalSet":
        """Canonicalise arbitrary real arcs ``(lo, hi)``, ``lo <= hi``, modulo 2pi."""
        pieces = []
        for lo, hi in arcs:
            lo, hi = float(lo), float(hi)
            if hi < lo:
                raise ValueError(f"arc ({lo}, {hi}) has hi < lo")
            if hi - lo >= TWO_PI - tol:
                return cls.full()
            lo0 = lo % TWO_PI
            hi0 = lo0 + (hi - lo)
            if hi0 <= TWO_PI:
                pieces.append((lo0, hi0))
            else:
                pieces.append((lo0, TWO_PI))
                pieces.append((0.0, hi0 - TWO_PI))
        merged = _merge(pieces, tol)
        merged = [(lo, hi) for lo, hi in merged if hi - lo > tol]
        if len(merged) == 1 and merged[0][1] - merged[0][0] >= TWO_PI - tol:
            return cls.full()
        # Snap near-boundary endpoints so wrap arcs meet exactly at 0 / 2pi.
        snapped = []
        for lo, hi in merged:
            if lo <= tol:
                lo = 0.0
            if hi >= TWO_PI - tol:
                hi = TWO_PI
            snapped.append((lo, hi))
        return cls(tuple(snapped))

    @classmethod
    def full(cls) -> "CircleIntervalSet":
        return cls(((0.0, TWO_PI),))

    @classmethod
    def empty(cls) -> "CircleIntervalSet":
        return cls(())

    def is_full(self) -> bool:
        return self.arcs == ((0.0, TWO_PI),)

    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.arcs))

    def contains(self, t: float) -> bool:
        t = float(t) % TWO_PI
        return any(lo <= t <= hi for lo, hi in self.arcs)

    def logical_arcs(self) -> list[tuple[float, float]]:
        """Arcs with the wraparound pieces rejoined, e.g. ``(5.5, 2pi+0.5)``."""
        arcs = list(self.arcs)
        if len(arcs) >= 2 and arcs[0][0] == 0.0 and arcs[-1][1] == TWO_PI:
            first = arcs.pop(0)
            last = arcs.pop()
            arcs.append((last[0], TWO_PI + first[1]))
        return arcs

    def gaps(self) -> list[tuple[float, float]]:
        """Complementary open arcs, in logical (unsplit) form."""
        if self.is_full():
            return []
        logical = self.logical_arcs()
        if not logical:
            return [(0.0, TWO_PI)]
        logical.sort()
        out = []
        for (_, a1), (b0, _) in zip(logical, logical[1:] + [(logical[0][0] + TWO_PI, None)]):
            lo = a1 % TWO_PI if a1 >= TWO_PI else a1
            out.append((lo, lo + (b0 - a1)))
        return sorted(out)

    def to_json_obj(self) -> dict:
        return {"arcs": [[lo, hi] for lo, hi in self.arcs]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj) -> "CircleIntervalSet":
        try:
            arcs = [(float(lo), float(hi)) for lo, hi in obj["arcs"]]
        except (TypeError, KeyError, ValueError):
            raise ParseError("interval-set JSON needs 'arcs': [[lo, hi], ...]") from None
        return cls.from_arcs(arcs)


@dataclass(frozen=True)
class LineIntervalSet:
    """Sorted, disjoint closed subintervals of the host interval ``[a, b]``."""

    a: float
    b: float
    arcs: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"host interval needs a < b, got [{self.a}, {self.b}]")
        arcs = tuple((float(lo), float(hi)) for lo, hi in _merge(self.arcs, 0.0))
        for lo, hi in arcs:
            if lo < self.a - 1e-15 * max(1.0, abs(self.a)) or hi > self.b + 1e-15 * max(1.0, abs(self.b)):
                raise DomainError(f"arc [{lo}, {hi}] leaves the host interval [{self.a}, {self.b}]")
        object.__setattr__(self, "arcs", arcs)

    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.arcs))

    def is_empty(self) -> bool:
        return not self.arcs

    def to_json_obj(self) -> dict:
        return {"a": self.a, "b": self.b, "arcs": [[lo, hi] for lo, hi in self.arcs]}


def lebesgue(S: CircleIntervalSet | LineIntervalSet) -> float:
    """Lebesgue measure: total arc length."""
    return S.measure()


# ---------------------------------------------------------------------------
# breakpoint classification shared by both backends


def _eval_error(Q: TrigPoly) -> float:
    # Forward error bound of Horner evaluation of Q on the unit circle.
    return 4.0 * (Q.degree + 1) * _EPS * float(np.sum(np.abs(Q.coeffs)))


def _touch_tol(Q: TrigPoly, level: float) -> float:
    err = _eval_error(Q)
    return max(1e-10 * level * level, 2.0 * level * err + err * err)


class _LevelFunction:
    """``G(t) = |Q(t)|^2 - level^2`` and its derivative, evaluated through ``Q``."""

    def __init__(self, Q: TrigPoly, level: float):
        self.Q = Q
        self.dQ = Q.derivative()
        self.level2 = level * level
        self.tol = _touch_tol(Q, level)

    def __call__(self, t):
        return np.abs(evaluate(self.Q, t)) ** 2 - self.level2

    def both(self, t):
        q = evaluate(self.Q, t)
        dq = evaluate(self.dQ, t)
        return np.abs(q) ** 2 - self.level2, 2.0 * np.real(np.conj(q) * dq)

    def status(self, t):
        g = self(t)
        return np.where(g > self.tol, 1, np.where(g < -self.tol, -1, 0)), g


def _arcs_from_breakpoints(G: _LevelFunction, points: np.ndarray) -> CircleIntervalSet:
    points = np.unique(np.mod(points, TWO_PI))
    if points.size:
        # collapse clusters closer than the merge tolerance
        keep = np.concatenate(([True], np.diff(points) > MERGE_TOL))
        points = points[keep]
        if points.size > 1 and points[0] + TWO_PI - points[-1] <= MERGE_TOL:
            points = points[:-1]
    if points.size == 0:
        probe = np.linspace(0.0, TWO_PI, 7, endpoint=False)
        status, g = G.status(probe)
        definite = status[status != 0]
        if definite.size == 0:
            if np.all(np.abs(g) < 1e-13):
                raise ConstantOnLevel("|Q| is constant and equal to the level")
            inside = bool(np.median(g) <= 0)
        else:
            inside = bool(np.sum(definite) < 0)
        return CircleIntervalSet.full() if inside else CircleIntervalSet.empty()

    starts = points
    ends = np.concatenate((points[1:], [points[0] + TWO_PI]))
    status, g = _piece_status(G, starts, ends)
    status = _resolve_touches(status, g)
    inside = status < 0
    if np.all(inside):
        return CircleIntervalSet.full()
    if not np.any(inside):
        return CircleIntervalSet.empty()
    return CircleIntervalSet.from_arcs(zip(starts[inside], ends[inside]))


# Probe fractions inside each piece; a touch point can sit at any single one.
_PROBES = np.array([0.5, 0.31, 0.69, 0.13, 0.87])


def _piece_status(G: _LevelFunction, starts: np.ndarray, ends: np.ndarray):
    """Label each piece by the majority definite sign of ``G`` at interior probes."""
    width = (ends - starts)[:, None]
    t = starts[:, None] + width * _PROBES[None, :]
    st, g = G.status(t.ravel())
    st = st.reshape(t.shape)
    g = g.reshape(t.shape)
    votes = st.sum(axis=1)
    status = np.sign(votes).astype(int)
    return status, g[:, 0]


def _resolve_touches(status: np.ndarray, g: np.ndarray, circular: bool = True) -> np.ndarray:
    """Give ambiguous (|G| within tolerance) pieces the label of their neighbours.

    A piece squeezed between two pieces of equal label is a touch artefact
    and takes that label; otherwise the raw sign of ``G`` decides.
    """
    definite = np.flatnonzero(status != 0)
    if definite.size == status.size:
        return status
    if definite.size == 0:
        return np.where(g <= 0, -1, 1)
    out = status.copy()
    for i in np.flatnonzero(status == 0):
        pos = np.searchsorted(definite, i)
        if circular:
            left = status[definite[pos - 1]]
            right = status[definite[pos % definite.size]]
        else:
            left = status[definite[pos - 1]] if pos > 0 else None
            right = status[definite[pos]] if pos < definite.size else None
            left = right if left is None else left
            right = left if right is None else right
        out[i] = left if left == right else (-1 if g[i] <= 0 else 1)
    return out


# ---------------------------------------------------------------------------
# backends


def _newton_polish(G: _LevelFunction, t0: np.ndarray, iters: int = 40, max_move: float = 1e-3):
    t = t0.astype(float).copy()
    active = np.ones(t.size, dtype=bool)
    for _ in range(iters):
        if not np.any(active):
            break
        g, dg = G.both(t[active])
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dg != 0, g / dg, 0.0)
        step = np.clip(step, -1e-2, 1e-2)
        new = t[active] - step
        if not np.all(np.isfinite(new)):
            raise NoConvergence("Newton polish produced a non-finite iterate")
        done = np.abs(step) <= 4 * _EPS * np.maximum(1.0, np.abs(new))
        idx = np.flatnonzero(active)
        t[idx] = new
        active[idx[done]] = False
    # Candidates that wandered (near-double roots) keep their eigenvalue angle.
    drift = np.abs(t - t0) > max_move
    t[drift] = t0[drift]
    return t


def _eigen_breakpoints(Q: TrigPoly, G: _LevelFunction, circle_tol: float) -> np.ndarray:
    g = abs_squared(Q).coeffs.copy()
    n2 = Q.degree * 2
    g[n2] -= G.level2
    scale = np.max(np.abs(g))
    if scale == 0.0:
        raise ConstantOnLevel("|Q|^2 - level^2 vanishes identically")
    if _EPS * float(np.sum(np.abs(g))) > GLOBAL_COMPANION_LIMIT * G.level2:
        return _piecewise_eigen_breakpoints(Q, G)
    # drop outer frequencies that are zero to working precision
    lo, hi = 0, g.size - 1
    while hi - lo > 0 and abs(g[lo]) <= 1e-15 * scale and abs(g[hi]) <= 1e-15 * scale:
        lo += 1
        hi -= 1
    g = g[lo : hi + 1]
    if g.size == 1:
        return np.empty(0)
    z = np.roots(g[::-1])
    near = np.abs(np.abs(z) - 1.0) <= circle_tol
    t = np.mod(np.angle(z[near]), TWO_PI)
    if t.size == 0:
        return t
    return _newton_polish(G, t)


def _piecewise_eigen_breakpoints(Q: TrigPoly, G: _LevelFunction, degree: int = 24) -> np.ndarray:
    """Colleague-matrix roots of local Chebyshev interpolants of ``G`` on short arcs.

    Used when ``|Q|`` spans so many orders of magnitude over the circle that
    the global companion matrix cannot resolve roots where ``|Q|`` is small.
    """
    pieces = 8 * max(Q.degree, 1)
    edges = np.linspace(0.0, TWO_PI, pieces + 1)
    found = []
    for a, b in zip(edges[:-1], edges[1:]):
        cheb = np.polynomial.Chebyshev.interpolate(G, degree, domain=[a, b])
        r = cheb.roots()
        half = 0.5 * (b - a)
        r = r[np.abs(r.imag) <= 1e-6 * half].real
        r = r[(r >= a - 1e-9) & (r <= b + 1e-9)]
        found.append(r)
    t = np.mod(np.concatenate(found), TWO_PI)
    if t.size == 0:
        return t
    return _newton_polish(G, t)


def _sample_breakpoints(Q: TrigPoly, G: _LevelFunction, npts: int) -> np.ndarray:
    h = TWO_PI / npts
    grid = np.arange(npts) * h
    _, dg = G.both(grid)
    # critical points of G: sign changes of G' between consecutive grid points
    nxt = np.roll(dg, -1)
    flip = np.signbit(dg) != np.signbit(nxt)
    crit = np.empty(0)
    if np.any(flip):
        lo = grid[flip]

        def slope(x):
            return G.both(x)[1]

        crit = _bisect_roots(slope, lo, lo + h, iters=52)
    pts = np.concatenate((grid, crit))
    order = np.argsort(pts, kind="stable")
    pts = pts[order]
    status, _ = G.status(pts)
    nz = np.flatnonzero(status != 0)
    if nz.size < 2:
        return np.empty(0)
    s_nz = status[nz]
    nxt_idx = np.roll(nz, -1)
    change = s_nz != np.roll(s_nz, -1)
    if not np.any(change):
        return np.empty(0)
    lo = pts[nz[change]]
    hi = pts[nxt_idx[change]]
    hi = np.where(hi <= lo, hi + TWO_PI, hi)
    roots = _bisect_roots(G, lo, hi, iters=200, xtol=1e-13)
    return roots


def sublevel_set(
    Q: TrigPoly,
    level: float = 1.0,
    backend: str = "eigen",
    *,
    circle_tol: float = EIGEN_CIRCLE_TOL,
    sample_points: int | None = None,
) -> CircleIntervalSet:
    """Return ``{t in K : |Q(t)| <= level}`` as canonical arcs."""
    if not level > 0:
        raise DomainError("level must be positive")
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    if Q.is_zero():
        return CircleIntervalSet.full()
    Q = Q.trimmed()
    if not np.all(np.isfinite(Q.coeffs)):
        raise NoConvergence("non-finite coefficients")
    if RESOLVABLE_LEVEL * _eval_error(Q) > level:
        raise NoConvergence(
            f"level {level:.3g} is below the evaluation accuracy {_eval_error(Q):.3g} "
            "implied by the coefficient size; the sublevel set is not resolvable in double precision"
        )
    G = _LevelFunction(Q, level)
    if Q.degree == 0:
        g0 = abs(Q.coeffs[0]) ** 2 - G.level2
        if abs(g0) < 1e-13:
            raise ConstantOnLevel("constant polynomial with modulus equal to the level")
        return CircleIntervalSet.full() if g0 < 0 else CircleIntervalSet.empty()
    if backend == "eigen":
        points = _eigen_breakpoints(Q, G, circle_tol)
    else:
        npts = sample_points or max(1024, 64 * 2 * Q.degree)
        points = _sample_breakpoints(Q, G, npts)
    return _arcs_from_breakpoints(G, points)


def deficiency(Q: TrigPoly, backend: str = "eigen", **kwargs) -> float:
    """``2pi - m({|Q| <= 1})``: the least exceptional measure ``s`` admitting ``Q``."""
    m = sublevel_set(Q, 1.0, backend, **kwargs).measure()
    return max(0.0, TWO_PI - m)


# ---------------------------------------------------------------------------
# the arcsine (Chebyshev) measure on [a, b]


def cheb_measure(a: float, b: float, S: LineIntervalSet) -> float:
    """Arcsine measure ``mu_[a,b](S)`` in closed form; total mass ``(b-a)/2 * pi``.

    On ``[c, d]`` it is ``(b-a)/2 * (arcsin psi(d) - arcsin psi(c))`` with
    ``psi(x) = (x - (a+b)/2) / ((b-a)/2)``.
    """
    if not a < b:
        raise DomainError("cheb_measure needs a < b")
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    slack = 1e-15 * max(1.0, abs(a), abs(b))
    total = 0.0
    for lo, hi in S.arcs:
        if lo < a - slack or hi > b + slack:
            raise DomainError(f"arc [{lo}, {hi}] leaves [{a}, {b}]")
        plo = min(1.0, max(-1.0, (lo - mid) / half))
        phi = min(1.0, max(-1.0, (hi - mid) / half))
        total += math.asin(phi) - math.asin(plo)
    return half * total


def split_at(S: LineIntervalSet, cut: float) -> tuple[LineIntervalSet, LineIntervalSet]:
    """Split a subset of [-1, 1] at ``cut`` into its parts in ``[-1, cut]`` and ``[cut, 1]``."""
    if not -1.0 < cut < 1.0:
        raise DomainError("cut must lie in (-1, 1)")
    left, right = [], []
    for lo, hi in S.arcs:
        if lo < cut:
            left.append((lo, min(hi, cut)))
        if hi > cut:
            right.append((max(lo, cut), hi))
    return LineIntervalSet(-1.0, cut, tuple(left)), LineIntervalSet(cut, 1.0, tuple(right))


def algebraic_sublevel(P: AlgPoly, a: float = -1.0, b: float = 1.0, level: float = 1.0) -> LineIntervalSet:
    """``{x in [a, b] : |P(x)| <= level}`` from the real roots of ``|P|^2 - level^2``."""
    coeffs = np.trim_zeros(np.asarray(P.coeffs, dtype=complex), "b")
    if coeffs.size == 0:
        return LineIntervalSet(a, b, ((a, b),))
    # |P(x)|^2 for real x has real coefficients conv(a, conj(a))
    h = np.real(np.convolve(coeffs, np.conj(coeffs)))
    h[0] -= level * level

    def f(x):
        return np.abs(np.polyval(coeffs[::-1], np.asarray(x, dtype=complex))) ** 2 - level * level

    pts = [a, b]
    if h.size > 1 and np.any(h[1:]):
        r = np.roots(np.trim_zeros(h[::-1], "f"))
        span = b - a
        real = r[np.abs(r.imag) <= 1e-7 * max(1.0, span)].real
        real = real[(real > a) & (real < b)]
        dcoeffs = np.polynomial.polynomial.polyder(h)
        for x in real:
            for _ in range(30):
                d = np.polynomial.polynomial.polyval(x, dcoeffs)
                if d == 0:
                    break
                step = f(x) / d
                x = min(b, max(a, x - step))
                if abs(step) <= 4 * _EPS * max(1.0, abs(x)):
                    break
            pts.append(float(x))
    pts = np.unique(np.array(pts))
    mids = 0.5 * (pts[:-1] + pts[1:])
    vals = f(mids)
    tol = 1e-10 * level * level
    status = np.where(vals > tol, 1, np.where(vals < -tol, -1, 0))
    status = _resolve_touches(status, vals, circular=False)
    arcs = [(float(lo), float(hi)) for lo, hi, st in zip(pts[:-1], pts[1:], status) if st < 0]
    return LineIntervalSet(a, b, tuple(_merge(arcs, MERGE_TOL)))


def pushforward_check(Q: TrigPoly, backend: str = "eigen") -> tuple[float, float]:
    """``(mu_[-1,1]({|P| <= 1}), m({|Q| <= 1}) / 2)`` for even ``Q(t) = P(cos t)``.

    The substitution ``x = cos t`` carries the arcsine measure on [-1, 1] to
    Lebesgue measure on [0, pi], so the two numbers agree.
    """
    P = to_cos_poly(Q)
    A = algebraic_sublevel(P, -1.0, 1.0, 1.0)
    return cheb_measure(-1.0, 1.0, A), 0.5 * sublevel_set(Q, 1.0, backend).measure()


def random_line_set(
    rng: np.random.Generator, a: float, b: float, max_arcs: int = 5, min_fraction: float = 1e-6
) -> LineIntervalSet:
    """Union of up to ``max_arcs`` random subintervals of ``[a, b]`` with measure above ``min_fraction*(b-a)``."""
    while True:
        k = int(rng.integers(1, max_arcs + 1))
        ends = np.sort(rng.uniform(a, b, size=(k, 2)), axis=1)
        S = LineIntervalSet(a, b, tuple(map(tuple, ends)))
        if S.measure() >= min_fraction * (b - a):
            return S


def arcs_close(A: CircleIntervalSet, B: CircleIntervalSet, tol: float) -> bool:
    """Same arc count and endpoints within ``tol``."""
    if len(A.arcs) != len(B.arcs):
        return False
    return all(abs(a0 - b0) <= tol and abs(a1 - b1) <= tol for (a0, a1), (b0, b1) in zip(A.arcs, B.arcs))


def circle_set(arcs: Sequence[Sequence[float]]) -> CircleIntervalSet:
    return CircleIntervalSet.from_arcs((float(lo), float(hi)) for lo, hi in arcs)


def level_for_deficiency(Q: TrigPoly, s: float, backend: str = "eigen") -> float:
    """Smallest ``lam`` with ``m({|Q| <= lam}) >= 2pi - s``, so ``deficiency(Q / lam) <= s``.

    ``lam -> m({|Q| <= lam})`` is continuous and nondecreasing; starting from
    the sampled quantile of ``|Q|``, a Newton iteration on it (derivative
    ``sum 2 lam / |G'|`` over arc endpoints) is safeguarded by bisection.
    """
    if not 0.0 < s < TWO_PI:
        raise DomainError(f"s={s!r} outside (0, 2pi)")
    if Q.is_zero():
        raise DomainError("the zero polynomial has no rescaling")
    target = TWO_PI - s
    npts = max(1024, 128 * max(Q.degree, 1))
    vals = np.sort(np.abs(evaluate(Q, np.arange(npts) * (TWO_PI / npts))))
    lam0 = float(np.interp(target / TWO_PI * (npts - 1), np.arange(npts), vals))
    if lam0 <= 0.0:
        lam0 = float(vals[vals > 0][0]) if np.any(vals > 0) else 1.0

    dQ = Q.derivative()

    def excess_and_slope(lam):
        S = sublevel_set(Q, lam, backend)
        if S.is_full() or not S.arcs:
            return S.measure() - target, 0.0
        ends = np.array([e for arc in S.logical_arcs() for e in arc])
        q = evaluate(Q, ends)
        dg = np.abs(2.0 * np.real(np.conj(q) * evaluate(dQ, ends)))
        with np.errstate(divide="ignore"):
            slope = float(np.sum(2.0 * lam / dg))
        return S.measure() - target, slope

    lo, hi = 0.0, math.inf
    lam = lam0
    for _ in range(100):
        e, slope = excess_and_slope(lam)
        if e >= 0.0:
            hi = lam
            if e <= 1e-13:
                return lam
        else:
            lo = lam
        step = e / slope if slope > 0 and math.isfinite(slope) else math.nan
        cand = lam - step
        if not (lo < cand < hi) or not math.isfinite(cand):
            if math.isinf(hi):
                cand = lam * 1.5
            elif lo == 0.0:
                cand = hi / 1.5 if hi == lam else 0.5 * (lo + hi)
            else:
                cand = 0.5 * (lo + hi)
        if math.isfinite(hi) and (hi - lo) <= 4 * _EPS * hi:
            return hi
        # once close, aim slightly inside the feasible side
        if abs(cand - lam) <= 1e-13 * lam:
            cand = lam * (1.0 + 1e-13) if e < 0 else lam
            if cand == lam:
                return lam
        lam = cand
    if math.isfinite(hi):
        return hi
    raise NoConvergence("level search for the requested deficiency did not converge")
