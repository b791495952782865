"""Exception types shared across the package."""


class RemezLabError(Exception):
    """Base class for all errors raised by remezlab."""


class DomainError(RemezLabError, ValueError):
    """A parameter lies outside the open interval an operation is defined on."""


class ChebyshevOverflow(RemezLabError, OverflowError):
    """A Chebyshev value exceeds the double range; use the log-domain variant."""


class NotEven(RemezLabError, ValueError):
    """An even trigonometric polynomial was required."""


class ParseError(RemezLabError, ValueError):
    """Malformed polynomial or interval-set JSON."""


class ConstantOnLevel(RemezLabError):
    """|Q|^2 - level^2 vanishes identically, so the sublevel set is degenerate."""


class NoConvergence(RemezLabError):
    """A root polish or refinement step failed to converge."""


class WitnessFailure(RemezLabError):
    """An extremal witness failed one of its invariants."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateDraw(RemezLabError):
    """A random draw produced a numerically zero polynomial."""


class ConstraintViolated(RemezLabError):
    """A polynomial's deficiency exceeds the allowed exceptional measure."""


class NoFeasibleStart(RemezLabError):
    """Every search restart failed to produce a feasible starting point."""
