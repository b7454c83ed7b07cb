import itertools

import pytest
from hypothesis import given, settings, strategies as st

from flashrewrite.cells import CellState, is_above, parse_levels
from flashrewrite.codes import (BaseRepCode, ModularCode, SplitCode, choose_b,
                                complete_graph_code, smallest_radix)
from flashrewrite.errors import Exhausted, NoFeasibleB
from flashrewrite.graphs import complete_graph
from flashrewrite.harness import random_walk_sequence, run_sequence


def S(text, q=4):
    return parse_levels(text, q)


def test_mod_decode():
    code = ModularCode(8, 4, 8)
    assert code.decode(S("0,0,1,1,1,0,0,1")) == 0
    assert code.decode(code.initial_state()) == 0
    assert code.decode(S("1,2,1,1,1,1,1,1")) == 1


def test_mod_update_worked_steps():
    code = ModularCode(8, 4, 8)
    assert str(code.update(S("0,0,1,1,0,0,0,0"), 0)) == "0,0,1,1,1,0,0,1"
    assert str(code.update(S("0,0,1,1,1,1,1,1"), 1)) == "1,2,1,1,1,1,1,1"
    assert str(code.update(S("0,1,0,0,0,1,1,1"), 4)) == "0,1,1,1,1,1,1,1"


def test_mod_groups():
    code = ModularCode(5, 2, 2)
    assert code.groups == 2
    s = code.initial_state()
    seen = []
    for v in [1, 0, 1, 0, 1]:
        try:
            s = code.update(s, v)
        except Exhausted:
            break
        seen.append(code.active_group(s))
        assert code.decode(s) == v
    assert seen[0] == 0 and seen[-1] == 1
    # the fifth cell is never touched
    assert s.levels[4] == 0


def test_mod_fresh_group_zero():
    code = ModularCode(8, 2, 4)
    s = S("1,1,1,1,0,0,0,0", 2)
    assert code.decode(s) == 0
    # group 0 is spent; a write of 3 lands in group 1
    s2 = code.update(s, 3)
    assert code.active_group(s2) == 1 and code.decode(s2) == 3


def test_mod_exhausted():
    code = ModularCode(2, 2, 2)
    s = code.update(code.initial_state(), 1)
    s = code.update(s, 0)
    with pytest.raises(Exhausted):
        code.update(s, 1)


def test_mod_rejects():
    with pytest.raises(ValueError):
        ModularCode(3, 4, 4)
    with pytest.raises(ValueError):
        ModularCode(4, 4, 1)


def brute_min_raise(cells, target, L):
    """Fewest band-bottom cells (excluding cell 0) whose raise reaches target."""
    j = cells[0]
    free = [i for i in range(1, L) if cells[i] == j]
    cur = sum(i * (c - j) for i, c in enumerate(cells)) % L
    for size in range(0, len(free) + 1):
        hits = [c for c in itertools.combinations(free, size) if (cur + sum(c)) % L == target]
        if hits:
            return size, min(hits)
    return None


@settings(max_examples=300)
@given(st.integers(2, 12).flatmap(lambda L: st.tuples(
    st.just(L), st.lists(st.booleans(), min_size=L - 1, max_size=L - 1), st.integers(0, L - 1))))
def test_mod_update_minimal_within_band(args):
    L, spent, target = args
    cells = [0] + [int(b) for b in spent]
    code = ModularCode(L, 3, L)
    s = CellState(tuple(cells), 3)
    if code.decode(s) == target:
        return
    if not any(cells):
        # the erased group needs a nonempty raise
        return
    want = brute_min_raise(cells, target, L)
    s2 = code.update(s, target)
    assert code.decode(s2) == target and is_above(s2, s)
    if want is not None:
        raised = tuple(i for i in range(L) if s2.levels[i] > s.levels[i])
        assert (len(raised), raised) == want
    else:
        assert s2.levels[0] == 1


def test_smallest_radix():
    assert smallest_radix(3, 8) == 2
    assert smallest_radix(3, 9) == 3
    assert smallest_radix(1, 7) == 7
    for n in range(1, 6):
        for L in range(2, 300):
            R = smallest_radix(n, L)
            assert R ** n >= L and (R == 2 or (R - 1) ** n < L)


def test_baserep():
    code = BaseRepCode(3, 8, 8)
    assert code.R == 2
    assert code.decode(S("1,0,1", 8)) == 5
    assert code.decode(code.initial_state()) == 0
    assert code.decode(S("3,3,2", 8)) == 3
    s = code.update(code.initial_state(), 5)
    assert str(s) == "1,0,1"
    s2 = code.update(s, 3)
    assert str(s2) == "3,3,2"
    assert all(b > a for a, b in zip(s.levels, s2.levels))
    small = BaseRepCode(3, 4, 8)
    s = small.update(small.update(small.initial_state(), 5), 3)
    assert small.band(s) == 1
    with pytest.raises(Exhausted):
        small.update(s, 1)


def test_choose_b():
    assert choose_b(16, 56) == 2
    assert choose_b(10, 7) == 1
    assert choose_b(16, 100) == 3
    # floor(8/b)^b peaks at 16, so 100 values never fit
    with pytest.raises(NoFeasibleB):
        choose_b(8, 100)
    for n in range(2, 40):
        for L in range(n + 1, 400, 7):
            feasible = [b for b in range(1, n + 1) if (n // b) ** b >= L]
            if feasible:
                assert choose_b(n, L) == feasible[0]
            else:
                with pytest.raises(NoFeasibleB):
                    choose_b(n, L)


def test_split_digits():
    code = SplitCode(16, 4, 56)
    assert (code.b, code.M) == (2, 8)
    assert code.to_digits(23) == (2, 7)
    assert code.from_digits((5, 5)) == 45
    assert code.decode(code.initial_state()) == 0


def test_split_untouched_group():
    code = SplitCode(16, 4, 56)
    s = code.update(code.initial_state(), 23)
    s2 = code.update(s, 17)  # (2,7) -> (2,1): group 0 keeps its digit
    assert s2.levels[:8] == s.levels[:8]
    assert code.digits_of(s2) == (2, 1)


def test_worked_example_states():
    code = SplitCode(16, 4, 56)
    expected = [
        ("0,0,1,0,0,0,0,0", "0,0,0,0,0,0,0,1"),
        ("0,0,1,1,0,0,0,0", "0,0,0,0,0,0,1,1"),
        ("0,0,1,1,1,0,0,1", "0,1,0,0,0,0,1,1"),
        ("0,0,1,1,1,1,1,1", "0,1,0,0,0,1,1,1"),
        ("1,2,1,1,1,1,1,1", "0,1,1,1,1,1,1,1"),
    ]
    s = code.initial_state()
    prev = s
    for v, (g0, g1) in zip([23, 45, 6, 27, 12], expected):
        s = code.update(s, v)
        assert str(s) == g0 + "," + g1
        assert is_above(s, prev)
        prev = s
    revlex = SplitCode(16, 4, 56, tiebreak="revlex")
    s = revlex.initial_state()
    for v in [23, 45, 6]:
        s = revlex.update(s, v)
    assert str(s).startswith("0,0,1,1,0,1,1,0")


def test_complete_graph_code_choice():
    assert isinstance(complete_graph_code(8, 4, 8), ModularCode)
    assert isinstance(complete_graph_code(16, 4, 56), SplitCode)


codes = st.one_of(
    st.tuples(st.integers(2, 10), st.integers(2, 5)).flatmap(
        lambda p: st.integers(2, p[0]).map(lambda L: ModularCode(p[0], p[1], L))),
    st.tuples(st.integers(1, 5), st.integers(2, 8), st.integers(2, 40)).filter(
        lambda p: smallest_radix(p[0], p[2]) <= p[1]).map(lambda p: BaseRepCode(*p)),
    st.sampled_from([(16, 4, 56), (9, 3, 20), (12, 2, 30), (8, 4, 15)]).map(lambda p: SplitCode(*p)),
)


@settings(max_examples=150, deadline=None)
@given(codes, st.integers(0, 2**32 - 1))
def test_contract_random_walk(code, seed):
    # run_sequence checks edge, monotonicity and decode after every rewrite
    graph = complete_graph(code.L)
    seq = random_walk_sequence(graph, seed, code.n * (code.q - 1) + 1)
    rep = run_sequence(code, graph, seq, trace=False)
    assert rep.t <= code.n * (code.q - 1)
    assert rep.t == len(seq) or rep.stop_reason.startswith("exhausted")
