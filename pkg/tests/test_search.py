import json
import math

import numpy as np
import pytest

from remezlab.errors import ConstraintViolated, DomainError
from remezlab.extremal import extremal_even
from remezlab.search import MAX_TRACE, SearchConfig, maximize_ratio, sharpness_ratio
from remezlab.sublevel import deficiency
from remezlab.trigpoly import Parity, TrigPoly, is_real_valued, parity_of, sup_norm


def test_sharpness_ratio_of_extremal_is_one():
    assert sharpness_ratio(extremal_even(3, 2.0), 2.0) == pytest.approx(1.0, abs=1e-9)


def test_sharpness_ratio_below_one():
    # cos t lies in the class for every s, and stays well below the bound
    assert sharpness_ratio(TrigPoly.cosine(1), 1.0) < 1.0


def test_sharpness_ratio_rejects_non_members():
    with pytest.raises(ConstraintViolated):
        sharpness_ratio(extremal_even(2, 3.0), 2.0)


def test_sharpness_ratio_log_domain():
    # bound near 1e173: the ratio still comes out finite
    Q = TrigPoly.cosine(1)
    assert 0.0 < sharpness_ratio(Q, 6.27) < 1.0


def test_config_validation():
    with pytest.raises(DomainError):
        SearchConfig(n=0, s=1.0)
    with pytest.raises(DomainError):
        SearchConfig(n=2, s=4.0, kind="all")
    with pytest.raises(DomainError):
        SearchConfig(n=2, s=1.0, kind="classical")
    with pytest.raises(DomainError):
        SearchConfig(n=2, s=1.0, parity="even", kind="odd")
    with pytest.raises(ValueError):
        SearchConfig(n=2, s=1.0, restarts=0)
    assert SearchConfig(n=2, s=math.pi).effective_kappa == pytest.approx(170.0)
    assert SearchConfig(n=40, s=6.0).effective_kappa == 1e6


def _run(**kw):
    base = dict(n=2, s=math.pi, restarts=3, budget=600, seed=5)
    base.update(kw)
    return maximize_ratio(SearchConfig(**base))


@pytest.mark.parametrize(
    "parity,real,kind",
    [("even", True, "even"), ("even", False, "even"), ("odd", True, "odd"), ("any", False, "all"), ("any", True, "even")],
)
def test_search_result_is_a_verified_member(parity, real, kind):
    s = 1.2 if kind == "all" else math.pi
    res = _run(parity=parity, real=real, kind=kind, s=s)
    Q = res.best_poly
    assert Q.degree == 2
    if parity != "any":
        assert parity_of(Q) is Parity(parity)
    if real:
        assert is_real_valued(Q, 1e-12)
    assert deficiency(Q, "eigen") <= s + 1e-6
    assert deficiency(Q, "sample") <= s + 1e-6
    assert 0.0 < res.best_ratio <= 1.0 + 1e-6
    assert not res.violated
    assert res.best_ratio == max(res.restart_ratios)


def test_search_approaches_the_extremal():
    res = _run(real=True, restarts=4, budget=2000)
    assert res.best_ratio >= 0.999
    assert sup_norm(res.best_poly, density=640) == pytest.approx(17.0 * res.best_ratio, rel=1e-9)


def test_trace_is_monotone_and_bounded():
    res = _run()
    ratios = [r for _, r in res.trace]
    evals = [e for e, _ in res.trace]
    assert len(res.trace) <= MAX_TRACE
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))
    assert all(b > a for a, b in zip(evals, evals[1:]))
    assert evals[-1] <= 600


def test_search_is_deterministic():
    a = _run(parity="any", kind="even", s=2.0).to_json()
    b = _run(parity="any", kind="even", s=2.0).to_json()
    assert a == b
    obj = json.loads(a)
    assert obj["config"]["seed"] == 5
    assert obj["seed_provenance"]["master_seed"] == 5


def test_search_schedule_independent():
    cfg = dict(n=1, s=2.0, restarts=3, budget=300, seed=2)
    serial = maximize_ratio(SearchConfig(**cfg, threads=1)).to_json()
    parallel = maximize_ratio(SearchConfig(**cfg, threads=2)).to_json()
    assert serial == parallel


def test_seed_changes_result():
    a = _run(seed=1, budget=200)
    b = _run(seed=2, budget=200)
    assert not np.array_equal(a.best_poly.coeffs, b.best_poly.coeffs)
