"""Chebyshev polynomials of the first kind and the closed-form Remez bounds.

Every bound is available directly and in the log domain. Direct evaluation
raises :class:`ChebyshevOverflow` instead of returning ``inf``.
"""

from __future__ import annotations

import enum
import math

from .errors import ChebyshevOverflow, DomainError
from .trigpoly import AlgPoly, chebyshev_table

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class BoundKind(str, enum.Enum):
    EVEN_PERIOD = "even"
    ODD_PERIOD = "odd"
    ALL_PERIOD = "all"
    CLASSICAL_ALGEBRAIC = "classical"
    CLASSICAL_EXP = "classical-exp"

    @classmethod
    def parse(cls, value) -> "BoundKind":
        if isinstance(value, cls):
            return value
        aliases = {
            "evenperiod": cls.EVEN_PERIOD,
            "oddperiod": cls.ODD_PERIOD,
            "allperiod": cls.ALL_PERIOD,
            "classicalalgebraic": cls.CLASSICAL_ALGEBRAIC,
            "classicalexp": cls.CLASSICAL_EXP,
        }
        key = str(value).strip().lower()
        try:
            return cls(key)
        except ValueError:
            pass
        try:
            return aliases[key.replace("-", "").replace("_", "")]
        except KeyError:
            raise ValueError(f"unknown bound kind {value!r}") from None


def _check_degree(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")


def _check_open(s, lo, hi, what):
    if not (lo < s < hi):
        raise DomainError(f"{what}: s={s!r} outside ({lo}, {hi:.12g})")


def cheb_T(n: int, x: float) -> float:
    """``T_n(x)`` for any real ``x``.

    Uses ``cos(n arccos x)`` on [-1, 1] and ``cosh(n arccosh |x|)`` outside,
    written as ``((x+sqrt(x^2-1))^n + (x+sqrt(x^2-1))^-n) / 2``.
    """
    _check_degree(n)
    x = float(x)
    if x == 1.0:
        return 1.0
    if x == -1.0:
        return -1.0 if n % 2 else 1.0
    if -1.0 < x < 1.0:
        return math.cos(n * math.acos(x))
    if x < -1.0:
        v = cheb_T(n, -x)
        return -v if n % 2 else v
    if not math.isfinite(x):
        raise ChebyshevOverflow(f"T_{n}({x}) is not finite")
    a = math.acosh(x)
    if n * a > 709.0:
        raise ChebyshevOverflow(f"T_{n}({x}) exceeds the double range; use log_cheb_T")
    r = math.exp(a)
    try:
        return 0.5 * (r**n + r ** (-n))
    except OverflowError:
        raise ChebyshevOverflow(f"T_{n}({x}) exceeds the double range; use log_cheb_T") from None


def log_cheb_T(n: int, x: float) -> float:
    """``log T_n(x)`` for ``x > 1``, finite for any ``n``."""
    _check_degree(n)
    x = float(x)
    if not x > 1.0:
        raise DomainError(f"log_cheb_T requires x > 1, got {x!r}")
    a = math.acosh(x)  # log(x + sqrt(x^2 - 1))
    return n * a + math.log1p(math.exp(-2.0 * n * a)) - math.log(2.0)


def cheb_coeffs(n: int) -> AlgPoly:
    """Power-basis coefficients of ``T_n`` from the three-term recurrence."""
    _check_degree(n)
    return AlgPoly(chebyshev_table(n)[n])


def _sec_tan(theta):
    c = math.cos(theta)
    sec = 1.0 / c
    return sec, math.tan(theta), c / (1.0 + math.sin(theta))


def bound_even(n: int, s: float) -> float:
    """``T_{2n}(sec(s/4))`` for ``s`` in (0, 2pi)."""
    _check_degree(n)
    _check_open(s, 0.0, 2 * math.pi, "bound_even")
    return cheb_T(2 * n, 1.0 / math.cos(s / 4))


def bound_even_identity(n: int, s: float) -> float:
    """``((sec + tan)^{2n} + (sec - tan)^{2n}) / 2`` at ``s/4``; equals :func:`bound_even`."""
    _check_degree(n)
    _check_open(s, 0.0, 2 * math.pi, "bound_even_identity")
    sec, tan, sec_minus_tan = _sec_tan(s / 4)
    try:
        return 0.5 * ((sec + tan) ** (2 * n) + sec_minus_tan ** (2 * n))
    except OverflowError:
        raise ChebyshevOverflow("bound_even_identity overflowed") from None


def log_bound_even(n: int, s: float) -> float:
    _check_degree(n)
    _check_open(s, 0.0, 2 * math.pi, "log_bound_even")
    if n == 0:
        return 0.0
    return log_cheb_T(2 * n, 1.0 / math.cos(s / 4))


def _check_odd_degree(n):
    _check_degree(n)
    if n < 1:
        raise DomainError("odd bounds need n >= 1")


def bound_odd(n: int, s: float) -> float:
    """Even bound plus ``1/sqrt(2)``, for odd polynomials."""
    _check_odd_degree(n)
    return bound_even(n, s) + INV_SQRT2


def log_bound_odd(n: int, s: float) -> float:
    _check_odd_degree(n)
    lb = log_bound_even(n, s)
    return lb + math.log1p(INV_SQRT2 * math.exp(-lb))


def odd_sqrt_step(n: int, s: float) -> float:
    """``sqrt(((sec+tan)^{4n} + (sec-tan)^{4n})/4 + 1/2)`` at ``s/4``.

    This is the sharper intermediate value that precedes the odd bound.
    """
    _check_odd_degree(n)
    _check_open(s, 0.0, 2 * math.pi, "odd_sqrt_step")
    sec, tan, sec_minus_tan = _sec_tan(s / 4)
    try:
        return math.sqrt(0.25 * ((sec + tan) ** (4 * n) + sec_minus_tan ** (4 * n)) + 0.5)
    except OverflowError:
        raise ChebyshevOverflow("odd_sqrt_step overflowed") from None


def bound_all(n: int, s: float) -> float:
    """``T_{2n}(sec(s/2))`` for ``s`` in (0, pi); identical to ``bound_even(n, 2s)``."""
    _check_open(s, 0.0, math.pi, "bound_all")
    return bound_even(n, 2 * s)


def log_bound_all(n: int, s: float) -> float:
    _check_open(s, 0.0, math.pi, "log_bound_all")
    return log_bound_even(n, 2 * s)


def bound_classical(n: int, s: float) -> float:
    """Classical algebraic Remez bound ``T_n((2+s)/(2-s))`` for ``s`` in (0, 2)."""
    _check_open(s, 0.0, 2.0, "bound_classical")
    return cheb_T(n, (2 + s) / (2 - s))


def log_bound_classical(n: int, s: float) -> float:
    _check_degree(n)
    _check_open(s, 0.0, 2.0, "log_bound_classical")
    if n == 0:
        return 0.0
    return log_cheb_T(n, (2 + s) / (2 - s))


def log_bound_classical_exp(n: int, s: float) -> float:
    _check_degree(n)
    if not (0.0 < s <= 1.0):
        raise DomainError(f"bound_classical_exp: s={s!r} outside (0, 1]")
    return min(5 * n * math.sqrt(s), 2 * n * n * s)


def bound_classical_exp(n: int, s: float) -> float:
    """``exp(min(5 n sqrt(s), 2 n^2 s))`` for ``s`` in (0, 1]."""
    lv = log_bound_classical_exp(n, s)
    if lv > 709.0:
        raise ChebyshevOverflow("bound_classical_exp overflowed; use the log variant")
    return math.exp(lv)


_DIRECT = {
    BoundKind.EVEN_PERIOD: bound_even,
    BoundKind.ODD_PERIOD: bound_odd,
    BoundKind.ALL_PERIOD: bound_all,
    BoundKind.CLASSICAL_ALGEBRAIC: bound_classical,
    BoundKind.CLASSICAL_EXP: bound_classical_exp,
}

_LOG = {
    BoundKind.EVEN_PERIOD: log_bound_even,
    BoundKind.ODD_PERIOD: log_bound_odd,
    BoundKind.ALL_PERIOD: log_bound_all,
    BoundKind.CLASSICAL_ALGEBRAIC: log_bound_classical,
    BoundKind.CLASSICAL_EXP: log_bound_classical_exp,
}


def bound(kind, n: int, s: float) -> float:
    return _DIRECT[BoundKind.parse(kind)](n, s)


def log_bound(kind, n: int, s: float) -> float:
    return _LOG[BoundKind.parse(kind)](n, s)
