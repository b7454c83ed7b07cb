"""Flash cells whose levels may only go up between erasures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, OverLevel


@dataclass(frozen=True)
class CellState:
    """An immutable vector of ``n`` cell levels, each in ``0..q-1``."""

    levels: tuple[int, ...]
    q: int

    def __post_init__(self):
        levels = tuple(int(x) for x in self.levels)
        object.__setattr__(self, "levels", levels)
        if self.q < 2:
            raise ValueError(f"q must be >= 2, got {self.q}")
        if len(levels) < 1:
            raise ValueError("a state needs at least one cell")
        for i, c in enumerate(levels):
            if not 0 <= c <= self.q - 1:
                raise OverLevel(f"cell {i} has level {c}, outside 0..{self.q - 1}")

    @property
    def n(self) -> int:
        return len(self.levels)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def __iter__(self):
        return iter(self.levels)

    def __str__(self):
        return format_levels(self.levels)

    def weight(self) -> int:
        return sum(self.levels)

    def raise_cell(self, i: int, amount: int = 1) -> "CellState":
        if amount < 1:
            raise ValueError(f"raise amount must be positive, got {amount}")
        new = self.levels[i] + amount
        if new > self.q - 1:
            raise OverLevel(f"cell {i}: {self.levels[i]} + {amount} exceeds {self.q - 1}")
        levels = list(self.levels)
        levels[i] = new
        return CellState(tuple(levels), self.q)

    def raise_cells(self, increments: dict[int, int] | Iterable[int]) -> "CellState":
        """Apply several raises at once.

        ``increments`` is either a mapping cell -> amount or an iterable of
        cell indices (repeats count as repeated unit raises).
        """
        if not isinstance(increments, dict):
            counts: dict[int, int] = {}
            for i in increments:
                counts[i] = counts.get(i, 0) + 1
            increments = counts
        levels = list(self.levels)
        for i, amount in increments.items():
            if amount < 0:
                raise ValueError("levels never decrease")
            if levels[i] + amount > self.q - 1:
                raise OverLevel(f"cell {i}: {levels[i]} + {amount} exceeds {self.q - 1}")
            levels[i] += amount
        return CellState(tuple(levels), self.q)

    def is_above(self, other: "CellState") -> bool:
        return is_above(self, other)


def new_state(n: int, q: int) -> CellState:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    return CellState((0,) * n, q)


def weight(s: CellState) -> int:
    return s.weight()


def raise_level(s: CellState, i: int, amount: int = 1) -> CellState:
    return s.raise_cell(i, amount)


def is_above(s2: CellState, s1: CellState) -> bool:
    """True iff every level of ``s2`` is at least the matching level of ``s1``."""
    if s2.n != s1.n or s2.q != s1.q:
        raise DimensionMismatch(f"cannot compare n={s2.n},q={s2.q} with n={s1.n},q={s1.q}")
    return all(a >= b for a, b in zip(s2.levels, s1.levels))


def raised_cells(before: CellState, after: CellState) -> tuple[int, ...]:
    """Indices whose level went up, each repeated once per unit raised."""
    out = []
    for i, (a, b) in enumerate(zip(before.levels, after.levels)):
        out.extend([i] * (b - a))
    return tuple(out)


def format_levels(levels: Sequence[int]) -> str:
    return ",".join(str(c) for c in levels)


def parse_levels(text: str, q: int) -> CellState:
    return CellState(tuple(int(x) for x in text.split(",")), q)
