import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "remezlab",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("remezlab")


def direct_eval(coeffs, t):
    """Reference evaluation: the exponential sum written out term by term."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = (coeffs.size - 1) // 2
    t = np.atleast_1d(np.asarray(t, dtype=float))
    ks = np.arange(-n, n + 1)
    return np.exp(1j * np.outer(t, ks)) @ coeffs


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
