"""Complex trigonometric polynomials on the period and their algebraic images.

A trigonometric polynomial of degree ``n`` is stored in the exponential basis,
``Q(t) = sum_{k=-n}^{n} c_k exp(ikt)``, as a length ``2n+1`` complex array
ordered ``k = -n..n``. Parity, |Q|^2 and shifts are then exact coefficient
operations. All angles are radians.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import NotEven, ParseError

TWO_PI = 2.0 * math.pi


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"
    ANY = "any"
    NEITHER = "neither"


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class AlgPoly:
    """Algebraic polynomial ``sum_j a_j x^j`` with complex coefficients.

    ``degree`` is an upper bound; the leading coefficient may vanish.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("AlgPoly needs a non-empty 1-d coefficient array")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        return np.polyval(self.coeffs[::-1], np.asarray(x, dtype=complex))

    def allclose(self, other: "AlgPoly", atol: float = 1e-10) -> bool:
        m = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(m, dtype=complex)
        b = np.zeros(m, dtype=complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.max(np.abs(a - b)) <= atol)

    def __repr__(self) -> str:
        return f"AlgPoly(degree={self.degree}, coeffs={np.round(self.coeffs, 12).tolist()})"


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Trigonometric polynomial ``sum_{|k|<=n} c_k e^{ikt}``.

    ``coeffs[j]`` holds ``c_{j-n}``. Instances are immutable.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("TrigPoly needs an odd-length 1-d coefficient array")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_dict(cls, mapping: dict[int, complex], degree: int | None = None) -> "TrigPoly":
        """Build from ``{k: c_k}``; missing frequencies are zero."""
        n = max((abs(k) for k in mapping), default=0) if degree is None else degree
        c = np.zeros(2 * n + 1, dtype=complex)
        for k, v in mapping.items():
            c[k + n] = v
        return cls(c)

    @classmethod
    def constant(cls, value: complex) -> "TrigPoly":
        return cls([value])

    @classmethod
    def cosine(cls, k: int = 1, amplitude: complex = 1.0) -> "TrigPoly":
        return cls.from_dict({k: amplitude / 2, -k: amplitude / 2})

    @classmethod
    def sine(cls, k: int = 1, amplitude: complex = 1.0) -> "TrigPoly":
        return cls.from_dict({k: amplitude / 2j, -k: -amplitude / 2j})

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coeff(self, k: int) -> complex:
        n = self.degree
        return complex(self.coeffs[k + n]) if abs(k) <= n else 0j

    def __call__(self, t):
        return evaluate(self, t)

    def padded(self, degree: int) -> "TrigPoly":
        n = self.degree
        if degree < n:
            raise ValueError("cannot pad to a smaller degree")
        c = np.zeros(2 * degree + 1, dtype=complex)
        c[degree - n : degree + n + 1] = self.coeffs
        return TrigPoly(c)

    def trimmed(self, tol: float = 0.0) -> "TrigPoly":
        """Drop outer frequencies whose coefficients are both at most ``tol``."""
        c = self.coeffs
        while c.size > 1 and abs(c[0]) <= tol and abs(c[-1]) <= tol:
            c = c[1:-1]
        return TrigPoly(c)

    def derivative(self) -> "TrigPoly":
        n = self.degree
        return TrigPoly(1j * np.arange(-n, n + 1) * self.coeffs)

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        m = max(self.degree, other.degree)
        return TrigPoly(self.padded(m).coeffs + other.padded(m).coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if isinstance(scalar, TrigPoly):
            return TrigPoly(np.convolve(self.coeffs, scalar.coeffs))
        return TrigPoly(self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TrigPoly(self.coeffs / scalar)

    def allclose(self, other: "TrigPoly", atol: float = 1e-12) -> bool:
        m = max(self.degree, other.degree)
        return bool(np.max(np.abs(self.padded(m).coeffs - other.padded(m).coeffs)) <= atol)

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __repr__(self) -> str:
        return f"TrigPoly(degree={self.degree}, coeffs={np.round(self.coeffs, 12).tolist()})"

    # JSON wire format: {"degree": n, "coeffs": [{"k": -n, "re": .., "im": ..}, ...]}
    def to_json_obj(self) -> dict[str, Any]:
        n = self.degree
        return {
            "degree": n,
            "coeffs": [
                {"k": k, "re": float(c.real), "im": float(c.imag)}
                for k, c in zip(range(-n, n + 1), self.coeffs)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Any) -> "TrigPoly":
        try:
            n = obj["degree"]
            entries = obj["coeffs"]
        except (TypeError, KeyError) as exc:
            raise ParseError(f"polynomial JSON needs 'degree' and 'coeffs': {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ParseError("'degree' must be a nonnegative integer")
        if not isinstance(entries, list) or len(entries) != 2 * n + 1:
            raise ParseError(f"'coeffs' must list exactly {2 * n + 1} entries")
        c = np.zeros(2 * n + 1, dtype=complex)
        prev = None
        for entry in entries:
            try:
                k, re, im = entry["k"], entry["re"], entry["im"]
            except (TypeError, KeyError):
                raise ParseError("each coefficient needs 'k', 're', 'im'") from None
            if not isinstance(k, int) or isinstance(k, bool):
                raise ParseError("'k' must be an integer")
            if prev is not None and k <= prev:
                raise ParseError("'k' must be strictly increasing (duplicate or unsorted k)")
            if abs(k) > n:
                raise ParseError(f"k={k} outside [-{n}, {n}]")
            try:
                c[k + n] = complex(float(re), float(im))
            except (TypeError, ValueError):
                raise ParseError("'re' and 'im' must be numbers") from None
            prev = k
        # 2n+1 strictly increasing integers in [-n, n] cover every k exactly once.
        return cls(c)

    @classmethod
    def from_json(cls, text: str) -> "TrigPoly":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


def evaluate(Q: TrigPoly, t):
    """Evaluate ``Q`` at ``t`` (scalar or array) by Horner's rule in ``e^{it}``."""
    t = np.asarray(t, dtype=float)
    n = Q.degree
    z = np.exp(1j * t)
    val = np.polyval(Q.coeffs[::-1], z)
    if n:
        val = val * np.exp(-1j * n * t)
    if val.ndim == 0:
        return complex(val)
    return val


def _abs2_and_slope(Q: TrigPoly, dQ: TrigPoly, t):
    q = evaluate(Q, t)
    dq = evaluate(dQ, t)
    return np.abs(q) ** 2, 2.0 * np.real(np.conj(q) * dq)


def _bisect_roots(f, lo, hi, iters=60, xtol=0.0):
    """Vectorised bisection of ``f`` on brackets with ``f(lo) <= 0 < f(hi)`` or reversed."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        same = np.signbit(fm) == np.signbit(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
        if xtol and np.all(hi - lo <= xtol):
            break
    return 0.5 * (lo + hi)


def sup_norm(Q: TrigPoly, density: int = 64, min_points: int = 256) -> float:
    """``max_t |Q(t)|`` from a dense grid refined around each competitive grid maximum.

    The grid has ``max(density*n, min_points)`` points. Grid maxima within 10% of
    the largest are refined by bisecting the derivative of ``|Q|^2``.
    """
    if Q.is_zero():
        return 0.0
    n = max(Q.degree, 1)
    npts = max(density * n, min_points)
    h = TWO_PI / npts
    t = np.arange(npts) * h
    v = np.abs(evaluate(Q, t)) ** 2
    vmax = float(v.max())
    if Q.degree == 0:
        return math.sqrt(vmax)
    is_peak = (v >= np.roll(v, 1)) & (v >= np.roll(v, -1)) & (v >= 0.9 * vmax)
    centers = t[is_peak]
    if centers.size == 0:
        return math.sqrt(vmax)
    dQ = Q.derivative()

    def slope(x):
        return _abs2_and_slope(Q, dQ, x)[1]

    lo, hi = centers - h, centers + h
    s_lo, s_hi = slope(lo), slope(hi)
    bracketed = (s_lo >= 0) & (s_hi <= 0)
    best = vmax
    if np.any(bracketed):
        tt = _bisect_roots(slope, lo[bracketed], hi[bracketed], iters=48, xtol=1e-8)
        best = max(best, float(np.max(np.abs(evaluate(Q, tt)) ** 2)))
    for c in centers[~bracketed]:
        # flat or kinked neighbourhood: golden-section on the sampled cell
        best = max(best, _golden_max(lambda x: abs(evaluate(Q, x)) ** 2, c - h, c + h))
    return math.sqrt(best)


def _golden_max(f, a, b, iters=80):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return max(fc, fd)


def even_part(R: TrigPoly) -> TrigPoly:
    """``(R(t) + R(-t)) / 2``."""
    return TrigPoly((R.coeffs + R.coeffs[::-1]) / 2)


def odd_part(R: TrigPoly) -> TrigPoly:
    """``(R(t) - R(-t)) / 2``."""
    return TrigPoly((R.coeffs - R.coeffs[::-1]) / 2)


def abs_squared(Q: TrigPoly) -> TrigPoly:
    """The real trigonometric polynomial ``|Q|^2`` of degree ``2n``.

    ``d_m = sum_k c_k conj(c_{k-m})``, i.e. the convolution of the coefficient
    sequence with its reversed conjugate. The result is made exactly
    Hermitian-symmetric so that it is real-valued to the last bit.
    """
    d = np.convolve(Q.coeffs, np.conj(Q.coeffs[::-1]))
    d = 0.5 * (d + np.conj(d[::-1]))
    return TrigPoly(d)


def shift(R: TrigPoly, a: float) -> TrigPoly:
    """``t -> R(t + a)``: coefficients ``c_k -> c_k e^{ika}``."""
    if a == 0:
        return R
    n = R.degree
    return TrigPoly(R.coeffs * np.exp(1j * a * np.arange(-n, n + 1)))


def parity_of(Q: TrigPoly, tol: float = 1e-10) -> Parity:
    """Classify ``Q`` as EVEN, ODD or NEITHER relative to its largest coefficient."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = Q.max_abs_coeff()
    if scale == 0.0:
        return Parity.EVEN
    c, r = Q.coeffs, Q.coeffs[::-1]
    if np.max(np.abs(c - r)) <= tol * scale:
        return Parity.EVEN
    if np.max(np.abs(c + r)) <= tol * scale:
        return Parity.ODD
    return Parity.NEITHER


def is_real_valued(Q: TrigPoly, tol: float = 1e-12) -> bool:
    """``c_{-k} == conj(c_k)`` within ``tol`` relative to the largest coefficient."""
    scale = max(Q.max_abs_coeff(), 1e-300)
    return bool(np.max(np.abs(Q.coeffs - np.conj(Q.coeffs[::-1]))) <= tol * scale)


def chebyshev_table(n: int) -> np.ndarray:
    """Power-basis coefficients of ``T_0..T_n`` as rows of an ``(n+1, n+1)`` array.

    Built by ``T_{k+1} = 2x T_k - T_{k-1}``; entries are exact integers.
    """
    table = np.zeros((n + 1, n + 1))
    table[0, 0] = 1.0
    if n >= 1:
        table[1, 1] = 1.0
    for k in range(1, n):
        table[k + 1, 1:] = 2.0 * table[k, :-1]
        table[k + 1] -= table[k - 1]
    return table


def _power_to_chebyshev(a: np.ndarray) -> np.ndarray:
    # x^j = 2^{1-j} sum_{i <= j/2} binom(j, i) T_{j-2i}, with T_0 weight halved.
    n = a.size - 1
    b = np.zeros(n + 1, dtype=complex)
    for j, aj in enumerate(a):
        if aj == 0:
            continue
        scale = aj * 2.0 ** (1 - j)
        for i in range(j // 2 + 1):
            k = j - 2 * i
            w = math.comb(j, i)
            b[k] += scale * (w / 2 if k == 0 else w)
    return b


def from_cos_poly(P: AlgPoly) -> TrigPoly:
    """The even trigonometric polynomial ``t -> P(cos t)``."""
    b = _power_to_chebyshev(P.coeffs)
    n = P.degree
    c = np.zeros(2 * n + 1, dtype=complex)
    c[n] = b[0]
    c[n + 1 :] = b[1:] / 2
    c[:n] = b[1:][::-1] / 2
    return TrigPoly(c)


def to_cos_poly(Q: TrigPoly, tol: float = 1e-10) -> AlgPoly:
    """The algebraic ``P`` with ``Q(t) = P(cos t)``; raises NotEven for non-even ``Q``."""
    scale = Q.max_abs_coeff()
    if scale and np.max(np.abs(Q.coeffs - Q.coeffs[::-1])) > tol * scale:
        raise NotEven("to_cos_poly requires an even trigonometric polynomial")
    n = Q.degree
    sym = even_part(Q).coeffs
    b = np.empty(n + 1, dtype=complex)
    b[0] = sym[n]
    b[1:] = 2.0 * sym[n + 1 :]
    table = chebyshev_table(n)
    return AlgPoly(b @ table)
