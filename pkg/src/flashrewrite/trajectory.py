"""Trajectory code: an anchor register plus ``d`` edge-label registers.

Cell layout: ``[S_0 | S_1 | ... | S_d | unused | counter]``. The anchor
``S_0`` holds a full vertex; ``S_i`` holds the local label of the i-th
edge walked since the anchor was last written. The counter cells hold the
number of writes ``s`` (their level sum); the first write stores the
initial value 0 in the anchor, so the value is the anchor followed by
``(s-1) mod (d+1)`` labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds
from .cells import CellState
from .codes import ModularCode, RewritingCode, complete_graph_code
from .errors import CorruptState, Exhausted, InfeasibleLayout, LabelOutOfRange, NoFeasibleB
from .graphs import DataGraph


@dataclass
class TrajectoryLayout:
    n: int
    q: int
    L: int
    delta: int
    d: int
    sizes: tuple[int, ...]
    counter_cells: int
    t_target: int
    mode: str                      # "complete", "small-delta" or "large-delta"
    guarantee: bool = True         # False outside L <= 2^(n/16)
    codes: tuple = field(default=(), repr=False)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, pos = [], 0
        for size in self.sizes:
            out.append(pos)
            pos += size
        return tuple(out)

    @property
    def total_cells(self) -> int:
        return self.n + self.counter_cells

    @property
    def counter_capacity(self) -> int:
        return self.counter_cells * (self.q - 1)

    def register_bounds(self) -> list[Fraction]:
        out = [bounds.lb_register(self.sizes[0], self.q, self.L)]
        edge_alpha = max(self.delta, 2)
        for size in self.sizes[1:]:
            out.append(bounds.lb_register(size, self.q, edge_alpha))
        return out

    def composite_bound(self) -> Fraction:
        """(d+1) times the weakest register guarantee, capped by the counter."""
        reg = (self.d + 1) * min(self.register_bounds())
        return min(reg, Fraction(self.counter_capacity - 1))


def default_t_target(n: int, q: int) -> int:
    return bounds.ub_trivial(n, q)


def plan_layout(n: int, q: int, graph: DataGraph, t_target: int | None = None) -> TrajectoryLayout:
    L, delta = graph.L, graph.delta
    if L < 2:
        raise InfeasibleLayout("need at least two data values")
    if t_target is None:
        t_target = default_t_target(n, q)
    counter_cells = max(1, math.ceil(t_target / q))
    guarantee = math.log2(L) <= n / 16
    lg = bounds.log2c(L)
    if graph.is_complete():
        d, mode = 0, "complete"
        sizes = (n,)
    else:
        threshold = bounds.delta_threshold(n, L)
        if delta <= threshold:
            mode = "small-delta"
            denom = math.log2(n / lg)
            d = math.floor(lg / denom) if denom > 0 else 1
        else:
            mode = "large-delta"
            d = math.floor(lg / bounds.log2c(delta))
        d = max(d, 1)
        sizes = (n // 2,) + (n // (2 * d),) * d
    if any(size < 1 for size in sizes):
        raise InfeasibleLayout(f"n={n} leaves an empty register (sizes {sizes})")
    codes = []
    edge_alpha = max(delta, 2)
    try:
        codes.append(complete_graph_code(sizes[0], q, L))
        for size in sizes[1:]:
            if mode == "small-delta":
                if size < edge_alpha:
                    raise InfeasibleLayout(f"edge register of {size} cells cannot hold {edge_alpha} labels")
                codes.append(ModularCode(size, q, edge_alpha))
            else:
                codes.append(complete_graph_code(size, q, edge_alpha))
    except (NoFeasibleB, ValueError) as exc:
        if isinstance(exc, InfeasibleLayout):
            raise
        raise InfeasibleLayout(str(exc)) from None
    return TrajectoryLayout(n=n, q=q, L=L, delta=delta, d=len(sizes) - 1, sizes=sizes,
                            counter_cells=counter_cells, t_target=t_target, mode=mode,
                            guarantee=guarantee, codes=tuple(codes))


class TrajectoryCode(RewritingCode):

    def __init__(self, graph: DataGraph, layout: TrajectoryLayout):
        self.graph = graph
        self.layout = layout
        self.q = layout.q
        self.L = graph.L
        self.n = layout.total_cells

    @classmethod
    def build(cls, n: int, q: int, graph: DataGraph, t_target: int | None = None) -> "TrajectoryCode":
        return cls(graph, plan_layout(n, q, graph, t_target))

    def __repr__(self):
        lay = self.layout
        return f"TrajectoryCode(L={self.L}, d={lay.d}, sizes={lay.sizes}, counter={lay.counter_cells})"

    def _register(self, s: CellState, i: int) -> CellState:
        off = self.layout.offsets[i]
        return CellState(s.levels[off:off + self.layout.sizes[i]], self.q)

    def counter_read(self, s: CellState) -> int:
        return sum(s.levels[self.layout.n:])

    def _raise_counter(self, levels: list[int]):
        for i in range(self.layout.n, self.n):
            if levels[i] < self.q - 1:
                levels[i] += 1
                return
        raise Exhausted(f"{self!r}: counter full after {self.layout.counter_capacity} writes")

    def decode(self, s: CellState) -> int:
        self._check(s)
        writes = self.counter_read(s)
        v = self.layout.codes[0].decode(self._register(s, 0))
        if writes == 0:
            return v
        for i in range(1, (writes - 1) % (self.layout.d + 1) + 1):
            label = self.layout.codes[i].decode(self._register(s, i))
            try:
                v = self.graph.follow(v, label)
            except LabelOutOfRange:
                raise CorruptState(f"register {i} holds label {label}, vertex {v} has no such edge") from None
        return v

    def update(self, s: CellState, v: int) -> CellState:
        self._check(s)
        self._check_value(v)
        cur = self.decode(s)
        if v == cur:
            return s
        label = self.graph.edge_label(cur, v)
        levels = list(s.levels)
        writes = self.counter_read(s)
        if writes == 0:
            # the initial anchor store of 0: nothing to raise but the counter
            self._raise_counter(levels)
            writes = 1
        r = writes % (self.layout.d + 1)
        symbol = v if r == 0 else label
        sub = self._register(s, r)
        sub_code = self.layout.codes[r]
        if sub_code.decode(sub) != symbol:
            try:
                sub = sub_code.update(sub, symbol)
            except Exhausted as exc:
                raise Exhausted(f"{self!r}: register {r}: {exc}") from None
            off = self.layout.offsets[r]
            levels[off:off + len(sub)] = sub.levels
        self._raise_counter(levels)
        return s.raise_cells({i: b - a for i, (a, b) in enumerate(zip(s.levels, levels)) if b > a})

    def annotate(self, before: CellState, after: CellState) -> dict:
        writes = self.counter_read(after)
        r = (writes - 1) % (self.layout.d + 1)
        stored = self.layout.codes[r].decode(self._register(after, r))
        return {"register": r, "stored": stored, "counter": writes}
