import itertools
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flashrewrite import bounds
from flashrewrite.codes import BaseRepCode
from flashrewrite.graphs import complete_graph
from flashrewrite.harness import worst_case_t


def naive_max_r(n, L):
    """Linear scan with C(r+n-1, r) kept as a running product: C(r+n, r+1) = C(r+n-1, r)(r+n)/(r+1)."""
    r, c = 0, 1
    while r < L - 2:
        nxt = c * (r + n) // (r + 1)
        if nxt >= L - 1:
            break
        r, c = r + 1, nxt
    return r


def states_within(n, r):
    """Nonzero raise vectors of total at most r, by enumeration."""
    return sum(1 for v in itertools.product(range(r + 1), repeat=n) if 0 < sum(v) <= r)


def test_lb_modular():
    assert bounds.lb_modular(8, 4, 8) == 9
    assert bounds.lb_modular(16, 4, 8) == 18
    for L in range(2, 20):
        assert bounds.lb_modular(L, 2, L) == Fraction(L + 4, 4)
    assert bounds.lb_modular_uniform(16, 4) == 6


def test_lb_baserep():
    assert bounds.lb_baserep(8, 2) == 4
    assert bounds.lb_baserep(5, 5) == 1
    # a radix below 2 is degenerate, so it is clamped to 2
    assert bounds.lb_baserep(4, 2 ** (1 / 16)) == 2
    assert bounds.lb_baserep_code(3, 8, 8) == 4


def test_lb_split():
    assert bounds.lb_split(256, 2, 2 ** 16) == pytest.approx(4.0)
    assert bounds.lb_split(256, 3, 2 ** 16) > bounds.lb_split(256, 2, 2 ** 16)
    assert bounds.lb_split_code(16, 4, 56) == bounds.lb_modular(8, 4, 8)


def test_ub_trivial():
    assert bounds.ub_trivial(8, 4) == 24
    assert bounds.ub_trivial(1, 2) == 1
    assert bounds.ub_trivial(64, 8) == 448


def test_max_r():
    assert bounds.max_r(4, 20) == 2
    assert [math.comb(4, 1), math.comb(5, 2), math.comb(6, 3)] == [4, 10, 20]
    for n in range(1, 10):
        for L in range(2, n + 2):
            assert bounds.max_r(n, L) == 0
        # one more value and a single raise no longer reaches them all
        assert bounds.max_r(n, n + 2) == 1
    assert bounds.max_r(1, 10) == bounds.max_r_sound(1, 10) == 8
    assert bounds.max_r(64, 2 ** 20) == naive_max_r(64, 2 ** 20)


@settings(max_examples=200)
@given(st.integers(3, 64), st.integers(2, 2 ** 32))
def test_max_r_matches_naive_scan(n, L):
    assert bounds.max_r(n, L) == naive_max_r(n, L)


@given(st.integers(1, 2), st.integers(2, 2 ** 16))
def test_max_r_small_n(n, L):
    # the linear scan runs about L steps here, so L stays small
    assert bounds.max_r(n, L) == naive_max_r(n, L)
    assert bounds.max_r(1, 2 ** 32) == 2 ** 32 - 2


def test_ub_complete():
    assert bounds.ub_complete(4, 5, 20) == 5
    assert bounds.ub_complete(4, 5, 5) == 16
    assert bounds.ub_complete(4, 5, 6) == 8
    assert bounds.ub_complete(64, 8, 2 ** 20) == 448 // (naive_max_r(64, 2 ** 20) + 1)


@pytest.mark.parametrize("n,r", [(1, 4), (2, 3), (3, 3), (4, 2)])
def test_sound_r_counts_reachable_states(n, r):
    assert states_within(n, r) == math.comb(n + r, r) - 1
    for L in range(2, 60):
        rs = bounds.max_r_sound(n, L)
        assert states_within(n, rs) < L - 1 <= states_within(n, rs + 1)


def test_exact_r_can_overshoot():
    # two cells, ten values: within two raises only 5 states exist, but the
    # exactly-r count lets r run to 7, and a real code beats that bound
    assert bounds.max_r(2, 10) == 7 and bounds.max_r_sound(2, 10) == 2
    t = worst_case_t(BaseRepCode(2, 8, 10), complete_graph(10))
    assert t == 2 > bounds.ub_complete(2, 8, 10)
    assert t <= bounds.ub_complete_sound(2, 8, 10)
    assert bounds.max_r_sound(4, 20) == bounds.max_r(4, 20)


def test_delta_threshold():
    assert bounds.delta_threshold(64, 16) == 32
    assert bounds.delta_threshold(10, 2) == math.floor(10 * math.log2(10) / 2)


def test_robust_regime():
    rr = bounds.robust_regime(64, 8, 4, 0.15)
    assert rr.ratio == 64 and rr.met
    assert bounds.robust_regime(64, 8, 4, 0.15, c=64).met
    assert not bounds.robust_regime(64, 8, 4, 0.15, c=65).met
    assert bounds.robust_regime(4, 2, 2, 0.5).L_log_L == 2
    assert not bounds.robust_regime(2, 2, 64, 0.1).met


def test_asymptotic_directions():
    assert bounds.choose_b(256, 2 ** 16) <= bounds.b_upper_estimate(256, 2 ** 16)
    for n in [64, 128, 256]:
        L = 2 ** (n // 16)
        if bounds.split_regime(n, L) and L > n:
            assert bounds.max_r(n, L) >= 1
            assert bounds.r_growth_direction(n, L)


def test_report():
    rep = bounds.bounds_report(8, 4, 8)
    assert rep.lb_modular == 9 and rep.ub_trivial == 24
    d = rep.to_dict()
    json.dumps(d)
    assert d["lb_modular"] == {"exact": "9/1", "value": 9.0}
    rep = bounds.bounds_report(4, 5, 20)
    assert rep.r == 2 and rep.ub_complete == 5 and rep.b is None
    rep = bounds.bounds_report(64, 8, 16, delta=4, epsilon=0.15)
    assert rep.delta_threshold == 32 and rep.flags["small_delta"] and rep.robust.met
    with pytest.raises(ValueError):
        bounds.bounds_report(4, 5, 1)


@given(st.integers(1, 80), st.integers(2, 10), st.integers(2, 5000))
def test_lower_bounds_below_trivial(n, q, L):
    rep = bounds.bounds_report(n, q, L)
    ub = rep.ub_trivial
    for lb in (rep.lb_modular, rep.lb_modular_uniform, rep.lb_baserep, rep.lb_split_code):
        if lb is not None:
            assert lb <= ub
    if rep.ub_complete is not None:
        assert rep.ub_complete <= ub and rep.ub_complete_sound <= ub
