"""Residue dynamic programs used by the encoders.

All searches return the lexicographically smallest sorted tuple of item
indices among the optimal choices, so traces are reproducible.
"""

from __future__ import annotations

from typing import Sequence


def exact_k_multiset(values: Sequence[int], caps: Sequence[int], k: int,
                     target: int, L: int) -> tuple[int, ...] | None:
    """Pick exactly ``k`` items (item ``i`` at most ``caps[i]`` times) whose
    values sum to ``target`` mod ``L``.

    Returns the lexicographically smallest sorted index tuple, or None.
    """
    target %= L
    if k < 0:
        return None
    m = len(values)
    # best[j][r]: smallest tuple of j picks from items[i:] with residue r
    best: list[list[tuple[int, ...] | None]] = [[None] * L for _ in range(k + 1)]
    best[0][0] = ()
    for i in range(m - 1, -1, -1):
        val = values[i] % L
        cap = min(caps[i], k)
        if cap <= 0:
            continue
        new = [row[:] for row in best]
        for j in range(1, k + 1):
            row = new[j]
            for r in range(L):
                cand = row[r]
                for x in range(1, min(cap, j) + 1):
                    rest = best[j - x][(r - x * val) % L]
                    if rest is None:
                        continue
                    t = (i,) * x + rest
                    if cand is None or t < cand:
                        cand = t
                row[r] = cand
        best = new
    return best[k][target]


def min_cardinality_subset(values: Sequence[int], target: int, L: int,
                           nonempty: bool = False, largest: bool = False) -> tuple[int, ...] | None:
    """Smallest set of distinct items whose values sum to ``target`` mod ``L``.

    Ties go to the lexicographically smallest sorted index tuple, or the
    largest with ``largest=True``. With ``target == 0`` the empty set wins
    unless ``nonempty`` is set.
    """
    sign = -1 if largest else 1

    def key(entry):
        return entry[0], tuple(sign * x for x in entry[1])

    target %= L
    if target == 0 and not nonempty:
        return ()
    # best[r]: (size, indices) of the best nonempty subset of items[i:]
    best: list[tuple[int, tuple[int, ...]] | None] = [None] * L
    for i in range(len(values) - 1, -1, -1):
        val = values[i] % L
        new = best[:]
        for r in range(L):
            rest = best[(r - val) % L]
            if rest is not None:
                cand = (rest[0] + 1, (i,) + rest[1])
                if new[r] is None or key(cand) < key(new[r]):
                    new[r] = cand
        single = (1, (i,))
        if new[val] is None or key(single) < key(new[val]):
            new[val] = single
        best = new
    return None if best[target] is None else best[target][1]
