"""Running codes against rewrite sequences and measuring how long they last.

``t`` for a code on a sequence is the number of rewrites applied before the
first one the code cannot realize. ``worst_case_t`` lets an adversary pick
every next value; ``optimal_game_value`` maximizes that over all codes for
tiny parameters.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import bounds
from .cells import CellState, is_above, raised_cells
from .codes import RewritingCode
from .errors import Exhausted, NotAnEdge, StateSpaceTooLarge
from .graphs import DataGraph

# running tally of every run_sequence call, for the global t <= n(q-1) check
RUN_STATS = {"runs": 0, "ub_violations": 0, "contract_violations": 0}


class ContractViolation(AssertionError):
    """A code broke decode(update(s, v)) == v or monotonicity."""


@dataclass
class RunReport:
    code_spec: str
    graph_spec: str
    seq_spec: str
    n: int
    q: int
    L: int
    t: int
    stop_reason: str
    ub: int
    lb: float | None = None
    seed: int | None = None
    trace: list = field(default_factory=list)
    bounds: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def check_rewrite(code: RewritingCode, graph: DataGraph, s: CellState, v: int, s2: CellState):
    cur = code.decode(s)
    if not graph.has_edge(cur, v):
        raise NotAnEdge(f"({cur}, {v}) is not an edge")
    if not is_above(s2, s):
        RUN_STATS["contract_violations"] += 1
        raise ContractViolation(f"{code!r}: update to {v} lowered a cell")
    got = code.decode(s2)
    if got != v:
        RUN_STATS["contract_violations"] += 1
        raise ContractViolation(f"{code!r}: update to {v} decodes to {got}")


def run_sequence(code: RewritingCode, graph: DataGraph, seq: Sequence[int], *,
                 code_spec: str = "", graph_spec: str = "", seq_spec: str = "",
                 trace: bool = True, state: CellState | None = None) -> RunReport:
    """Apply ``seq`` until the code gives up; every rewrite is checked inline."""
    s = code.initial_state() if state is None else state
    t = 0
    reason = "sequence-end"
    rows = []
    for v in seq:
        cur = code.decode(s)
        if not graph.has_edge(cur, v):
            raise NotAnEdge(f"sequence step {t + 1}: ({cur}, {v}) is not an edge")
        try:
            s2 = code.update(s, v)
        except Exhausted as exc:
            reason = f"exhausted: {exc}"
            break
        check_rewrite(code, graph, s, v, s2)
        t += 1
        if trace:
            row = {"write": t, "value": v, "raised": list(raised_cells(s, s2)),
                   "weight": s2.weight(), "state": str(s2)}
            row.update(code.annotate(s, s2))
            rows.append(row)
        s = s2
    ub = bounds.ub_trivial(code.n, code.q)
    RUN_STATS["runs"] += 1
    if t > ub:
        RUN_STATS["ub_violations"] += 1
        raise ContractViolation(f"t={t} exceeds n(q-1)={ub}")
    return RunReport(code_spec=code_spec, graph_spec=graph_spec or graph.name, seq_spec=seq_spec,
                     n=code.n, q=code.q, L=code.L, t=t, stop_reason=reason, ub=ub, trace=rows)


def random_walk_sequence(graph: DataGraph, seed: int, length: int, start: int = 0) -> list[int]:
    rng = np.random.default_rng(seed)
    out = []
    u = start
    for _ in range(length):
        nbrs = graph.neighbors(u)
        u = nbrs[int(rng.integers(len(nbrs)))]
        out.append(u)
    return out


def cyclic_sequence(L: int, length: int) -> list[int]:
    if L < 2:
        raise ValueError("cyclic sequence needs L >= 2")
    return [k % L for k in range(1, length + 1)]


def worst_case_t(code: RewritingCode, graph: DataGraph, cap: int = 1_000_000,
                 state: CellState | None = None) -> int:
    """Exact number of rewrites the code survives against a clairvoyant adversary."""
    memo: dict = {}

    def value(s: CellState, cur: int) -> int:
        key = (s.levels, cur)
        if key in memo:
            return memo[key]
        if len(memo) >= cap:
            raise StateSpaceTooLarge(f"more than {cap} game states")
        best = None
        for v in graph.neighbors(cur):
            try:
                s2 = code.update(s, v)
            except Exhausted:
                best = 0
                break
            check_rewrite(code, graph, s, v, s2)
            r = 1 + value(s2, v)
            if best is None or r < best:
                best = r
        memo[key] = 0 if best is None else best
        return memo[key]

    s0 = code.initial_state() if state is None else state
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * bounds.ub_trivial(code.n, code.q) + 1000))
    try:
        return value(s0, code.decode(s0))
    finally:
        sys.setrecursionlimit(limit)


def optimal_game_value(n: int, q: int, L: int, max_maps: int = 1 << 20) -> int:
    """Best worst-case rewrite count over every decode map on a complete graph.

    The encoder may jump to any strictly-above state with the right value.
    """
    nstates = q ** n
    if nstates > 64 or L > 4:
        raise StateSpaceTooLarge(f"oracle limited to q^n <= 64 and L <= 4 (got {nstates}, {L})")
    if L ** (nstates - 1) > max_maps:
        raise StateSpaceTooLarge(f"{L}^{nstates - 1} decode maps exceed {max_maps}")
    states = list(itertools.product(range(q), repeat=n))
    # sort by weight so every strictly-above state comes later
    states.sort(key=sum)
    index = {s: k for k, s in enumerate(states)}
    above = [[index[t] for t in states if t != s and all(a >= b for a, b in zip(t, s))]
             for s in states]
    best = 0
    order = range(nstates - 1, -1, -1)
    for rest in itertools.product(range(L), repeat=nstates - 1):
        F = (0,) + rest
        V = [0] * nstates
        for k in order:
            worst = None
            for v in range(L):
                if v == F[k]:
                    continue
                reach = [V[m] + 1 for m in above[k] if F[m] == v]
                got = max(reach) if reach else 0
                if worst is None or got < worst:
                    worst = got
                    if worst == 0:
                        break
            V[k] = worst or 0
        best = max(best, V[0])
    return best


def derive_seeds(master_seed: int, trials: int) -> list[int]:
    """Per-trial 64-bit seeds, a pure function of (master_seed, trial index)."""
    out = []
    for k in range(trials):
        ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(k,))
        out.append(int(ss.generate_state(1, np.uint64)[0]))
    return out


@dataclass
class Stats:
    mean: float
    std: float
    min: int
    max: int
    values: list
    seeds: list

    @classmethod
    def of(cls, values, seeds) -> "Stats":
        arr = np.asarray(values, dtype=float)
        return cls(float(arr.mean()), float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
                   int(arr.min()), int(arr.max()), list(values), list(seeds))


def monte_carlo_expectation(sampler: Callable[[int], RewritingCode], graph: DataGraph,
                            seq: Sequence[int], trials: int, master_seed: int) -> Stats:
    """t of independently sampled codes on one fixed sequence."""
    if trials < 1:
        raise ValueError("need at least one trial")
    seeds = derive_seeds(master_seed, trials)
    ts = [run_sequence(sampler(seed), graph, seq, trace=False).t for seed in seeds]
    return Stats.of(ts, seeds)


def balls_in_bins_draw(rng: np.random.Generator, capacities: Sequence[int]) -> int:
    """Balls that land in a bin with room before the first one hits a full bin."""
    caps = np.asarray(capacities)
    L = len(caps)
    throws = rng.integers(0, L, size=int(caps.sum()) + 1)
    first_over = len(throws)
    for b in range(L):
        pos = np.flatnonzero(throws == b)
        if len(pos) > caps[b]:
            first_over = min(first_over, int(pos[caps[b]]))
    return first_over


def balls_in_bins_oracle(L: int, capacities: Sequence[int] | int, master_seed: int,
                         trials: int) -> Stats:
    """Reference distribution for the robust code's stop-at-full rewrite count."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if isinstance(capacities, int):
        capacities = [capacities] * L
    if len(capacities) != L:
        raise ValueError("one capacity per bin")
    seeds = derive_seeds(master_seed, trials)
    draws = [balls_in_bins_draw(np.random.default_rng(seed), capacities) for seed in seeds]
    return Stats.of(draws, seeds)


@dataclass
class RobustTrial:
    trial: int
    seed: int
    t: int
    first_saturation: int | None
    stop_reason: str
    choices: list


def robust_trial(code, seq: Sequence[int], trial: int = 0) -> RobustTrial:
    """Run a robust code, recording the super cell raised by every single-raise rewrite."""
    s = code.initial_state()
    t = 0
    first_sat = None
    reason = "sequence-end"
    choices = []
    for v in seq:
        cur = code.decode(s)
        if v == cur:
            raise NotAnEdge(f"sequence repeats value {v}")
        try:
            s2 = code.update(s, v)
        except Exhausted as exc:
            reason = f"exhausted: {exc}"
            break
        if not is_above(s2, s) or code.decode(s2) != v:
            RUN_STATS["contract_violations"] += 1
            raise ContractViolation(f"{code!r}: bad rewrite to {v}")
        t += 1
        cells = raised_cells(s, s2)
        if len(cells) == 1:
            choices.append(code.supercell_of(cells[0]))
        if first_sat is None and any(h == c for h, c in zip(code.heights(s2), code.capacity)):
            first_sat = t
        s = s2
    RUN_STATS["runs"] += 1
    if t > bounds.ub_trivial(code.n, code.q):
        RUN_STATS["ub_violations"] += 1
        raise ContractViolation("t exceeds n(q-1)")
    return RobustTrial(trial, code.seed, t, first_sat, reason, choices)


def robust_eval(n: int, q: int, L: int, seq: Sequence[int], trials: int, master_seed: int,
                mode: str = "stop") -> list[RobustTrial]:
    from .robust import sample_robust_code

    seeds = derive_seeds(master_seed, trials)
    return [robust_trial(sample_robust_code(n, q, L, seed, mode=mode), seq, k)
            for k, seed in enumerate(seeds)]


def choices_before_saturation(trials: Sequence[RobustTrial]) -> list[list[int]]:
    """Per-trial super-cell choices, cut at the write that first filled a super cell."""
    out = []
    for tr in trials:
        stop = tr.first_saturation if tr.first_saturation is not None else len(tr.choices)
        out.append(list(tr.choices[:stop]))
    return out


def choice_uniformity(trials: Sequence[RobustTrial], L: int) -> dict:
    """Chi-square p-values for the pooled choice histogram and the lag-1 pair histogram."""
    from scipy.stats import chisquare

    runs = choices_before_saturation(trials)
    single = np.zeros(L, dtype=np.int64)
    pairs = np.zeros(L * L, dtype=np.int64)
    for ch in runs:
        for i in ch:
            single[i - 1] += 1
        for a, b in zip(ch, ch[1:]):
            pairs[(a - 1) * L + (b - 1)] += 1
    return {
        "choices": int(single.sum()),
        "histogram": single.tolist(),
        "p_single": float(chisquare(single).pvalue),
        "pairs": int(pairs.sum()),
        "p_pairs": float(chisquare(pairs).pvalue),
    }


def compare_to_oracle(ts: Sequence[int], oracle: Stats) -> float:
    """Two-sample Kolmogorov-Smirnov p-value of measured t against oracle draws."""
    from scipy.stats import ks_2samp

    return float(ks_2samp(list(ts), oracle.values).pvalue)
