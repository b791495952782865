"""Extremal polynomials that attain the Remez bounds, and their witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import chebyshev
from .errors import ChebyshevOverflow, DomainError, NoConvergence, WitnessFailure
from .sublevel import (
    CircleIntervalSet,
    LineIntervalSet,
    algebraic_sublevel,
    sublevel_set,
)
from .trigpoly import TWO_PI, AlgPoly, TrigPoly, chebyshev_table, from_cos_poly, sup_norm


def _check_params(n, s, hi):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    if not (0.0 < s < hi):
        raise DomainError(f"s={s!r} outside (0, {hi:.12g})")


def _scaled_cos_poly(n: int, s: float) -> tuple[np.ndarray, float]:
    """``(P_scaled, log h^n)`` with ``P = h^n P_scaled`` and ``h = sec^2(s/4) / 2``.

    ``T_{2n}(y) = S(y^2)`` has only even powers, and
    ``cos^2(t/2) sec^2(s/4) = h (1 + cos t)``, so ``P(x) = sum_j S_j h^j (1+x)^j``.
    Dividing by ``h^n`` keeps every term finite however close ``s`` is to 2pi.
    """
    S = chebyshev_table(2 * n)[2 * n][::2]
    log_h = math.log(0.5) - 2.0 * math.log(math.cos(s / 4))
    P = np.zeros(n + 1)
    one_plus_x = np.array([1.0])
    for j, Sj in enumerate(S):
        P[: j + 1] += Sj * math.exp((j - n) * log_h) * one_plus_x
        one_plus_x = np.convolve(one_plus_x, [1.0, 1.0])
    return P, n * log_h


def extremal_even_cos_poly(n: int, s: float) -> AlgPoly:
    """``P`` with ``P(cos t) = T_{2n}(cos(t/2) / cos(s/4))``."""
    _check_params(n, s, TWO_PI)
    P, log_scale = _scaled_cos_poly(n, s)
    if log_scale + math.log(np.max(np.abs(P))) > 709.0:
        raise ChebyshevOverflow("extremal coefficients exceed the double range; use extremal_even_scaled")
    return AlgPoly(P * math.exp(log_scale))


def _symmetric_real(Q: TrigPoly) -> TrigPoly:
    c = np.real(Q.coeffs)
    return TrigPoly(0.5 * (c + c[::-1]))


def extremal_even(n: int, s: float) -> TrigPoly:
    """The even real trigonometric polynomial ``T_{2n}(cos(t/2) sec(s/4))`` of degree ``n``."""
    return _symmetric_real(from_cos_poly(extremal_even_cos_poly(n, s)))


def extremal_even_scaled(n: int, s: float) -> tuple[TrigPoly, float]:
    """``(Q / M, log M)`` for the even extremal, with ``M`` its largest coefficient modulus."""
    _check_params(n, s, TWO_PI)
    P, log_scale = _scaled_cos_poly(n, s)
    Q = _symmetric_real(from_cos_poly(AlgPoly(P)))
    m = Q.max_abs_coeff()
    return Q / m, log_scale + math.log(m)


def extremal_even_direct(n: int, s: float, t) -> np.ndarray:
    """Pointwise ``T_{2n}(cos(t/2) / cos(s/4))`` through :func:`chebyshev.cheb_T`."""
    sec = 1.0 / math.cos(s / 4)
    return np.array([chebyshev.cheb_T(2 * n, math.cos(tt / 2) * sec) for tt in np.atleast_1d(t)])


def _composed_exceeds(n: int, sec: float, t: np.ndarray) -> np.ndarray:
    # |T_2n(y)| > 1 exactly when |y| > 1; evaluate T_2n itself to keep this a numerical check
    y = np.abs(np.cos(0.5 * t) * sec)
    with np.errstate(over="ignore"):
        inside = np.cos(2 * n * np.arccos(np.minimum(y, 1.0)))
        outside = np.cosh(2 * n * np.arccosh(np.maximum(y, 1.0)))
    vals = np.where(y <= 1.0, np.abs(inside), outside)
    return (vals > 1.0) & (y > 1.0)


def _direct_sublevel(n: int, s: float) -> CircleIntervalSet:
    """``{|Q| <= 1}`` for the extremal, located on the composed closed form.

    Used when the coefficients are too large for the level set to be
    resolved from them. Sign changes on a grid are refined by bisection.
    """
    sec = 1.0 / math.cos(s / 4)
    npts = max(4096, 64 * n)
    t = np.arange(npts + 1) * (TWO_PI / npts)
    above = _composed_exceeds(n, sec, t)
    flips = np.nonzero(above[:-1] != above[1:])[0]
    cuts = []
    for i in flips:
        lo, hi = t[i], t[i + 1]
        lo_above = above[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if _composed_exceeds(n, sec, np.array([mid]))[0] == lo_above:
                lo = mid
            else:
                hi = mid
        cuts.append((0.5 * (lo + hi), bool(lo_above)))
    arcs, start = [], None if above[0] else 0.0
    for x, was_above in cuts:
        if was_above:
            start = x
        elif start is not None:
            arcs.append((start, x))
            start = None
    if start is not None:
        arcs.append((start, TWO_PI))
    return CircleIntervalSet.from_arcs(arcs)


def extremal_classical(n: int, s: float) -> AlgPoly:
    """``T_n((2x + s) / (2 - s))``: sharp for the classical inequality on [-1, 1].

    It maps ``[-1, 1 - s]`` onto ``[-1, 1]`` and reaches the bound at ``x = 1``.
    """
    _check_params(n, s, 2.0)
    T = chebyshev_table(n)[n]
    alpha, beta = 2.0 / (2.0 - s), s / (2.0 - s)
    P = np.zeros(n + 1)
    power = np.array([1.0])  # (beta + alpha x)^j
    for j, Tj in enumerate(T):
        P[: j + 1] += Tj * power
        power = np.convolve(power, [beta, alpha])
    return AlgPoly(P)


def _finite_or_none(x: float) -> float | None:
    return float(x) if math.isfinite(x) else None


@dataclass
class ExtremalWitness:
    poly: TrigPoly | AlgPoly
    n: int
    s: float
    bound: float
    attained_sup: float
    sublevel: CircleIntervalSet | LineIntervalSet
    log_bound: float = math.nan
    log_attained_sup: float = math.nan
    diagnostics: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return math.exp(self.log_attained_sup - self.log_bound)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "bound": _finite_or_none(self.bound),
            "log_bound": self.log_bound,
            "attained_sup": _finite_or_none(self.attained_sup),
            "log_attained_sup": self.log_attained_sup,
            "ratio": self.ratio,
            "sublevel": self.sublevel.to_json_obj(),
            "sublevel_measure": self.sublevel.measure(),
            "target_measure": self.diagnostics.get("target_measure"),
            "sublevel_method": self.diagnostics.get("sublevel_method", "algebraic"),
            # poly holds Q / exp(poly_log_scale); zero unless the coefficients overflow
            "poly_log_scale": self.diagnostics.get("poly_log_scale", 0.0),
        }


def equality_witness(n: int, s: float, backend: str = "eigen") -> ExtremalWitness:
    """Build the even extremal for ``(n, s)`` and check it attains the bound.

    Sup and bound are compared in the log domain on the coefficient-scaled
    polynomial, so the check still works where the bound would overflow.
    When the coefficients are too large for ``{|Q| <= 1}`` to be resolved
    from them, the sublevel set is located on the composed closed form
    instead (``diagnostics["sublevel_method"] == "direct"``).
    Raises :class:`WitnessFailure`.
    """
    _check_params(n, s, TWO_PI)
    Qs, log_scale = extremal_even_scaled(n, s)
    log_b = chebyshev.log_bound_even(n, s)
    try:
        b = chebyshev.bound_even(n, s)
    except ChebyshevOverflow:
        b = math.inf
    log_sup = log_scale + math.log(sup_norm(Qs))
    sup = math.exp(log_sup) if log_sup < 709 else math.inf
    Q = Qs * math.exp(log_scale) if log_scale < 700 else Qs
    try:
        sub = sublevel_set(Q, 1.0, backend) if log_scale < 700 else None
        method = backend
    except NoConvergence:
        sub = None
    if sub is None:
        sub, method = _direct_sublevel(n, s), "direct"
    target = TWO_PI - s
    diag = {"target_measure": target, "sublevel_method": method, "poly_log_scale": 0.0 if log_scale < 700 else log_scale}
    w = ExtremalWitness(Q, n, s, b, sup, sub, log_b, log_sup, diag)
    problems = []
    if log_sup - log_b > math.log1p(1e-8):
        problems.append(f"sup exceeds bound: log ratio {log_sup - log_b:.3e}")
    if abs(sub.measure() - target) > 1e-6:
        problems.append(f"sublevel measure {sub.measure():.12g} != 2pi - s = {target:.12g}")
    if problems:
        raise WitnessFailure("; ".join(problems), w.to_json_obj())
    return w


def classical_witness(n: int, s: float) -> ExtremalWitness:
    """Witness for the classical inequality: ``P(1)`` equals the bound, ``m({|P| <= 1}) = 2 - s``."""
    P = extremal_classical(n, s)
    b = chebyshev.bound_classical(n, s)
    sub = algebraic_sublevel(P, -1.0, 1.0, 1.0)
    xs = np.linspace(-1.0, 1.0, 4001)
    sup = float(max(np.max(np.abs(P(xs))), abs(P(1.0))))
    w = ExtremalWitness(P, n, s, b, sup, sub, math.log(b), math.log(sup), {"target_measure": 2.0 - s})
    if abs(sub.measure() - (2.0 - s)) > 1e-8 or abs(sup / b - 1.0) > 1e-8:
        raise WitnessFailure("classical extremal failed its invariants", w.to_json_obj())
    return w
