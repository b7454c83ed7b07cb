"""Weight-indexed codes: the parametric (theta, a) family and the randomized
robust code built on super cells.

Both decode with the cell-state weight ``w`` selecting a coefficient row
and a running offset ``a_0 + ... + a_{w-1}``; the all-zero state decodes
to 0. Rewrites raise as little total level as possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cells import CellState
from .codes import RewritingCode
from .errors import Exhausted, SaturatedCell, Unreachable
from .residue import exact_k_multiset


@dataclass(frozen=True)
class UpdateVector:
    entries: tuple[int, ...]

    @property
    def diversity(self) -> int:
        return len(set(self.entries))


class ParametricCode(RewritingCode):
    """``F(c) = (sum_i theta[w-1][i] * c_i + sum_{k<w} a_k) mod L``."""

    def __init__(self, n: int, q: int, L: int, theta, a):
        rows = n * (q - 1)
        theta = tuple(tuple(int(x) for x in row) for row in theta)
        a = tuple(int(x) for x in a)
        if len(theta) != rows or any(len(row) != n for row in theta):
            raise ValueError(f"theta must be {rows} x {n}")
        if len(a) != rows:
            raise ValueError(f"a must have {rows} entries")
        if any(not 0 <= x < L for row in theta for x in row) or any(not 0 <= x < L for x in a):
            raise ValueError(f"theta and a entries must lie in 0..{L - 1}")
        self.n, self.q, self.L = n, q, L
        self.theta = theta
        self.a = a
        self._prefix = np.concatenate([[0], np.cumsum(a)]).astype(np.int64)

    @classmethod
    def identity(cls, n: int, q: int, L: int, a=None) -> "ParametricCode":
        """theta[w][i] = i (1-based cell number) mod L for every weight."""
        rows = n * (q - 1)
        row = tuple((i + 1) % L for i in range(n))
        if a is None:
            a = (0,) * rows
        return cls(n, q, L, (row,) * rows, a)

    @classmethod
    def random(cls, n: int, q: int, L: int, seed: int) -> "ParametricCode":
        rng = np.random.default_rng(seed)
        rows = n * (q - 1)
        return cls(n, q, L, rng.integers(0, L, size=(rows, n)), rng.integers(0, L, size=rows))

    def __repr__(self):
        return f"ParametricCode(n={self.n}, q={self.q}, L={self.L})"

    def offset(self, w: int) -> int:
        return int(self._prefix[w]) % self.L

    def _value(self, levels, w) -> int:
        if w == 0:
            return 0
        row = self.theta[w - 1]
        return (sum(t * c for t, c in zip(row, levels)) + self.offset(w)) % self.L

    def decode(self, s: CellState) -> int:
        self._check(s)
        return self._value(s.levels, s.weight())

    def update_vector(self, s: CellState) -> UpdateVector:
        self._check(s)
        if max(s.levels) > self.q - 2:
            raise SaturatedCell("update vector needs every level <= q-2")
        base = self.decode(s)
        return UpdateVector(tuple((self.decode(s.raise_cell(i)) - base) % self.L
                                  for i in range(self.n)))

    def plan(self, s: CellState, v: int) -> tuple[int, ...]:
        """Cheapest raise (sorted cell indices, repeats allowed) landing on ``v``."""
        levels, w = s.levels, s.weight()
        caps = [self.q - 1 - c for c in levels]
        room = sum(caps)
        for k in range(1, room + 1):
            row = self.theta[w + k - 1]
            fixed = sum(t * c for t, c in zip(row, levels)) + self.offset(w + k)
            pick = exact_k_multiset(row, caps, k, v - fixed, self.L)
            if pick is not None:
                return pick
        raise Unreachable(f"{self!r}: no state above the current one decodes to {v}")

    def update(self, s: CellState, v: int) -> CellState:
        self._check(s)
        self._check_value(v)
        if v == self.decode(s):
            return s
        return s.raise_cells(self.plan(s, v))


class RobustCode(RewritingCode):
    """Cells grouped into ``L`` super cells ``g_i = {j : j = i mod L}`` (1-based);
    ``F(c) = (sum_i i*h_i + sum_{k<w} a_k) mod L`` with ``a`` drawn uniformly.

    ``mode="stop"`` refuses a rewrite whose target super cell is full (the
    regime where each rewrite is one uniform ball); ``mode="continue"`` falls
    back to the cheapest multi-raise.
    """

    def __init__(self, n: int, q: int, L: int, a, seed: int | None = None, mode: str = "stop"):
        if not 2 <= L <= n:
            raise ValueError(f"robust code needs n >= L >= 2, got n={n}, L={L}")
        if mode not in ("stop", "continue"):
            raise ValueError(f"unknown mode {mode!r}")
        a = tuple(int(x) for x in a)
        if len(a) != n * (q - 1) or any(not 0 <= x < L for x in a):
            raise ValueError(f"a must have {n * (q - 1)} entries in 0..{L - 1}")
        self.n, self.q, self.L = n, q, L
        self.a = a
        self.seed = seed
        self.mode = mode
        self._prefix = np.concatenate([[0], np.cumsum(a)]).astype(np.int64)
        # 0-based cell j belongs to super cell ((j mod L) + 1), i.e. 1-based j+1 = i mod L
        self.groups = tuple(tuple(range(i - 1, n, L)) for i in range(1, L + 1))
        self.capacity = tuple(len(g) * (q - 1) for g in self.groups)

    def __repr__(self):
        return f"RobustCode(n={self.n}, q={self.q}, L={self.L}, seed={self.seed}, mode={self.mode})"

    def supercell_of(self, cell: int) -> int:
        return cell % self.L + 1

    def heights(self, s: CellState) -> tuple[int, ...]:
        return tuple(sum(s.levels[j] for j in g) for g in self.groups)

    def offset(self, w: int) -> int:
        return int(self._prefix[w]) % self.L

    def decode(self, s: CellState) -> int:
        self._check(s)
        w = s.weight()
        if w == 0:
            return 0
        h = self.heights(s)
        return (sum(i * hi for i, hi in enumerate(h, start=1)) + self.offset(w)) % self.L

    def supercell_update_vector(self, s: CellState) -> UpdateVector:
        """Decoded change from raising each super cell by one, measured by raising a cell in it."""
        base = self.decode(s)
        out = []
        for i in range(1, self.L + 1):
            levels = list(s.levels)
            self._raise_in(levels, i)
            out.append((self.decode(CellState(tuple(levels), self.q)) - base) % self.L)
        return UpdateVector(tuple(out))

    def choose_supercell(self, s: CellState, v: int) -> int:
        """Super cell (1..L) whose single raise turns ``F(s)`` into ``v``."""
        i = (v - self.decode(s) - self.a[s.weight()]) % self.L
        return i if i else self.L

    def _raise_in(self, levels: list[int], i: int):
        for j in self.groups[i - 1]:
            if levels[j] < self.q - 1:
                levels[j] += 1
                return
        raise AssertionError("super cell has no free cell")

    def plan(self, s: CellState, v: int) -> tuple[int, ...]:
        """Super cells (1-based, sorted, repeats allowed) raised by the cheapest rewrite."""
        h = self.heights(s)
        w = s.weight()
        if w < len(self.a):
            i = self.choose_supercell(s, v)
            if h[i - 1] < self.capacity[i - 1]:
                return (i,)
            if self.mode == "stop":
                raise Exhausted(f"{self!r}: super cell {i} is full at weight {w}")
        caps = [c - x for c, x in zip(self.capacity, h)]
        values = list(range(1, self.L + 1))
        cur = self.decode(s)
        for k in range(2, sum(caps) + 1):
            need = v - cur - (self.offset(w + k) - self.offset(w))
            pick = exact_k_multiset(values, caps, k, need, self.L)
            if pick is not None:
                return tuple(p + 1 for p in pick)
        raise Unreachable(f"{self!r}: no state above the current one decodes to {v}")

    def update(self, s: CellState, v: int) -> CellState:
        self._check(s)
        self._check_value(v)
        if v == self.decode(s):
            return s
        levels = list(s.levels)
        for i in self.plan(s, v):
            self._raise_in(levels, i)
        return s.raise_cells({j: b - a for j, (a, b) in enumerate(zip(s.levels, levels)) if b > a})

    def as_parametric(self) -> ParametricCode:
        """The same decoder written as a parametric code with theta[w][j] = j mod L."""
        return ParametricCode.identity(self.n, self.q, self.L, self.a)


def sample_robust_code(n: int, q: int, L: int, seed: int, mode: str = "stop") -> RobustCode:
    if n < L:
        raise ValueError(f"robust code is defined for n >= L, got n={n}, L={L}")
    rng = np.random.default_rng(seed)
    a = rng.integers(0, L, size=n * (q - 1))
    return RobustCode(n, q, L, a, seed=seed, mode=mode)
