"""Rewriting codes for a complete data graph.

* ``ModularCode``  - cells carry a residue ``sum i*(c_i - c_0) mod L``,
  used in bands of two adjacent levels (needs ``2 <= L <= n``).
* ``BaseRepCode``  - writes the radix-R digits of the value into a fresh
  band of R levels on every rewrite.
* ``SplitCode``    - splits the value into ``b`` digits of radix
  ``floor(n/b)`` and keeps one ``ModularCode`` per digit.

These are also the register sub-codes of the trajectory code.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

from .cells import CellState, new_state
from .errors import DimensionMismatch, Exhausted, NoFeasibleB
from .residue import min_cardinality_subset


class RewritingCode(ABC):
    """Decode/update pair over ``n`` cells of ``q`` levels storing ``0..L-1``.

    ``update(s, v)`` must return a state above ``s`` that decodes to ``v``;
    it raises ``Exhausted`` when it cannot.
    """

    n: int
    q: int
    L: int

    @abstractmethod
    def decode(self, s: CellState) -> int:
        ...

    @abstractmethod
    def update(self, s: CellState, v: int) -> CellState:
        ...

    def initial_state(self) -> CellState:
        return new_state(self.n, self.q)

    def annotate(self, before: CellState, after: CellState) -> dict:
        """Extra trace columns for one write; most codes have none."""
        return {}

    def _check(self, s: CellState):
        if s.n != self.n or s.q != self.q:
            raise DimensionMismatch(f"state has n={s.n},q={s.q}; code wants n={self.n},q={self.q}")

    def _check_value(self, v: int):
        if not 0 <= v < self.L:
            raise ValueError(f"value {v} outside 0..{self.L - 1}")


class ModularCode(RewritingCode):
    """Groups of ``L`` cells, each decoding ``sum_{i} i*(c_i - c_0) mod L``.

    Inside a group the band is ``c_0``: cells at level ``c_0`` are free, cells
    at ``c_0 + 1`` are spent. Only the highest group holding a nonzero cell
    is live; earlier groups are used up.

    Among equally small raise sets the lexicographically smallest wins;
    ``tiebreak="revlex"`` takes the largest instead and exists only so the
    golden example can be shown to depend on the tie rule.
    """

    def __init__(self, n: int, q: int, L: int, tiebreak: str = "lex"):
        if not 2 <= L <= n:
            raise ValueError(f"modular code needs 2 <= L <= n, got L={L}, n={n}")
        if q < 2:
            raise ValueError(f"q must be >= 2, got {q}")
        if tiebreak not in ("lex", "revlex"):
            raise ValueError(f"unknown tiebreak {tiebreak!r}")
        self.n, self.q, self.L = n, q, L
        self.groups = n // L
        self.tiebreak = tiebreak

    def __repr__(self):
        return f"ModularCode(n={self.n}, q={self.q}, L={self.L})"

    def _group(self, levels, g):
        return levels[g * self.L:(g + 1) * self.L]

    def active_group(self, s: CellState) -> int:
        for g in range(self.groups - 1, -1, -1):
            if any(self._group(s.levels, g)):
                return g
        return 0

    def group_value(self, cells) -> int:
        c0 = cells[0]
        return sum(i * (c - c0) for i, c in enumerate(cells)) % self.L

    def decode(self, s: CellState) -> int:
        self._check(s)
        return self.group_value(self._group(s.levels, self.active_group(s)))

    def _min_set(self, free, delta, nonempty=False):
        pick = min_cardinality_subset(free, delta, self.L, nonempty,
                                      largest=self.tiebreak == "revlex")
        return None if pick is None else [free[k] for k in pick]

    def _rewrite_group(self, cells: list[int], target: int, fresh: bool) -> list[int] | None:
        """New levels for one group realizing ``target``, or None if the group is spent."""
        q, L = self.q, self.L
        j = cells[0]
        if j <= q - 2:
            delta = (target - self.group_value(cells)) % L
            free = [i for i in range(1, L) if cells[i] == j]
            pick = self._min_set(free, delta, nonempty=fresh)
            if pick is not None:
                out = list(cells)
                for i in pick:
                    out[i] = j + 1
                return out
        # band j cannot take the write: lift every cell to j+1, which reads as 0
        if j + 1 <= q - 1:
            out = [j + 1] * L
            if target == 0:
                return out
            if j + 1 <= q - 2:
                out[target] = j + 2
                return out
        return None

    def update(self, s: CellState, v: int) -> CellState:
        self._check(s)
        self._check_value(v)
        if v == self.decode(s):
            return s
        levels = list(s.levels)
        g = self.active_group(s)
        fresh = not any(self._group(levels, g))
        while g < self.groups:
            cells = list(self._group(levels, g))
            out = self._rewrite_group(cells, v, fresh)
            if out is not None:
                levels[g * self.L:(g + 1) * self.L] = out
                return s.raise_cells({i: b - a for i, (a, b) in enumerate(zip(s.levels, levels)) if b > a})
            g += 1
            fresh = True
        raise Exhausted(f"{self!r}: all {self.groups} groups spent")


def smallest_radix(n: int, L: int) -> int:
    """Smallest R >= 2 with R**n >= L (the exact integer ceil of L**(1/n))."""
    R = 2
    while R ** n < L:
        R += 1
    return R


class BaseRepCode(RewritingCode):
    """Radix-R digits written into a fresh band of R levels per rewrite.

    Band ``k`` uses levels ``kR..kR+R-1``; the band of a written state is
    ``max(c) // R`` and the all-zero state means nothing is written yet.
    """

    def __init__(self, n: int, q: int, L: int):
        if n < 1 or L < 2:
            raise ValueError(f"need n >= 1 and L >= 2, got n={n}, L={L}")
        self.n, self.q, self.L = n, q, L
        self.R = smallest_radix(n, L)
        if self.R > q:
            raise ValueError(f"L={L} does not fit in {n} cells of {q} levels")

    def __repr__(self):
        return f"BaseRepCode(n={self.n}, q={self.q}, L={self.L}, R={self.R})"

    def band(self, s: CellState) -> int:
        """Current band, or -1 for the untouched all-zero state."""
        if not any(s.levels):
            return -1
        return max(s.levels) // self.R

    def decode(self, s: CellState) -> int:
        self._check(s)
        R = self.R
        return sum((c % R) * R ** i for i, c in enumerate(s.levels)) % self.L

    def digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.n):
            v, d = divmod(v, self.R)
            out.append(d)
        return out

    def update(self, s: CellState, v: int) -> CellState:
        self._check(s)
        self._check_value(v)
        if v == self.decode(s):
            return s
        k = self.band(s) + 1
        if k * self.R + self.R - 1 > self.q - 1:
            raise Exhausted(f"{self!r}: band {k} would need level {k * self.R + self.R - 1}")
        target = [k * self.R + d for d in self.digits(v)]
        return s.raise_cells({i: t - c for i, (c, t) in enumerate(zip(s.levels, target)) if t > c})


def choose_b(n: int, L: int) -> int:
    """Smallest b >= 1 with floor(n/b)**b >= L."""
    if L <= n:
        return 1
    for b in range(1, n + 1):
        if (n // b) ** b >= L:
            return b
    raise NoFeasibleB(f"no b has floor({n}/b)^b >= {L}")


class SplitCode(RewritingCode):
    """Value written as ``b`` digits of radix ``M = floor(n/b)``.

    Group 0 (cells ``0..M-1``) holds the most significant digit; each group
    is a ``ModularCode`` over ``M`` cells with alphabet ``M``.
    """

    def __init__(self, n: int, q: int, L: int, tiebreak: str = "lex"):
        self.n, self.q, self.L = n, q, L
        self.b = choose_b(n, L)
        self.M = n // self.b
        if self.M < 2:
            raise NoFeasibleB(f"digit radix {self.M} too small for n={n}, L={L}")
        self.inner = ModularCode(self.M, q, self.M, tiebreak=tiebreak)

    def __repr__(self):
        return f"SplitCode(n={self.n}, q={self.q}, L={self.L}, b={self.b})"

    def _slice(self, levels, g):
        return CellState(levels[g * self.M:(g + 1) * self.M], self.q)

    def to_digits(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.b):
            v, d = divmod(v, self.M)
            out.append(d)
        return tuple(reversed(out))

    def from_digits(self, digits) -> int:
        v = 0
        for d in digits:
            v = v * self.M + d
        return v

    def digits_of(self, s: CellState) -> tuple[int, ...]:
        self._check(s)
        return tuple(self.inner.decode(self._slice(s.levels, g)) for g in range(self.b))

    def decode(self, s: CellState) -> int:
        return self.from_digits(self.digits_of(s))

    def update(self, s: CellState, v: int) -> CellState:
        self._check(s)
        self._check_value(v)
        old = self.digits_of(s)
        new = self.to_digits(v)
        levels = list(s.levels)
        for g, (a, b) in enumerate(zip(old, new)):
            if a == b:
                continue
            sub = self._slice(levels, g)
            try:
                sub = self.inner.update(sub, b)
            except Exhausted as exc:
                raise Exhausted(f"{self!r}: digit group {g}: {exc}") from None
            levels[g * self.M:(g + 1) * self.M] = sub.levels
        return s.raise_cells({i: b - a for i, (a, b) in enumerate(zip(s.levels, levels)) if b > a})


def complete_graph_code(n: int, q: int, L: int) -> RewritingCode:
    """The register code for a complete graph on ``L`` values in ``n`` cells:
    modular when it fits, else split."""
    if L <= n:
        return ModularCode(n, q, L)
    return SplitCode(n, q, L)
