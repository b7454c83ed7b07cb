"""Closed-form guarantees and upper bounds on the number of rewrites.

Exact constants come back as ``Fraction``; callers floor at the point of
comparison. Logarithms are base 2, and a log argument below 2 is clamped
so that ``log`` never drops under 1.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .codes import choose_b, smallest_radix
from .errors import NoFeasibleB


def log2c(x: float) -> float:
    """log2 clamped to >= 1 (formulas divide by log L)."""
    return math.log2(x) if x >= 2 else 1.0


def is_power_of_two(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


def modular_regime(n: int, L: int) -> bool:
    return 2 <= L <= n


def split_regime(n: int, L: int) -> bool:
    return n <= L and math.log2(L) <= n / 16


def lb_modular(n: int, q: int, L: int) -> Fraction:
    """floor(n/L) * (L+4)(q-1)/4.

    The per-band count (L+4)/4 comes from an XOR-based analysis; the
    residue-mod-L code meets it for L a power of two (checked by exhaustive
    adversary in the tests) and can fall short by one per band otherwise.
    """
    b0 = n // L
    return Fraction(b0 * (L + 4) * (q - 1), 4)


def lb_modular_uniform(n: int, q: int) -> Fraction:
    return Fraction(n * (q - 1), 8)


def lb_baserep(q: int, c: float) -> Fraction:
    """q / ceil(c), with the radix clamped to at least 2."""
    radix = max(2, math.ceil(c))
    return Fraction(q, radix)


def lb_baserep_code(n: int, q: int, L: int) -> Fraction:
    """Same guarantee with the radix taken exactly as the smallest R with R^n >= L."""
    return Fraction(q, smallest_radix(n, L))


def lb_split(n: int, q: int, L: int) -> float:
    """n(q-1) log(n/log L) / (16 log L); meaningful only in ``split_regime``."""
    lg = log2c(L)
    return n * (q - 1) * math.log2(n / lg) / (16 * lg)


def lb_split_code(n: int, q: int, L: int) -> Fraction:
    """Guarantee of the split code itself: its weakest digit group."""
    b = choose_b(n, L)
    M = n // b
    return lb_modular(M, q, M)


def ub_trivial(n: int, q: int) -> int:
    return n * (q - 1)


def _largest_below(f, limit: int, cap: int) -> int:
    """Largest r in [0, cap] with f(r) < limit (f increasing on r >= 1), 0 if f(1) fails."""
    if cap < 1 or f(1) >= limit:
        return 0
    lo, hi = 1, 2
    while hi <= cap and f(hi) < limit:
        lo, hi = hi, hi * 2
    hi = min(hi, cap + 1)
    # f(lo) < limit; hi is past the answer or past the cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) < limit:
            lo = mid
        else:
            hi = mid
    return lo


def max_r(n: int, L: int) -> int:
    """Largest r with C(r+n-1, r) < L-1 (0 when even r=1 fails).

    For n=1 the binomial is constantly 1, so r is capped at L-2, the
    count for a single cell.
    """
    return _largest_below(lambda r: math.comb(r + n - 1, r), L - 1, L - 2)


def ub_complete(n: int, q: int, L: int) -> int:
    return n * (q - 1) // (max_r(n, L) + 1)


def max_r_sound(n: int, L: int) -> int:
    """Largest r with C(n+r, r) - 1 < L-1: states within r unit raises miss some value.

    ``max_r`` counts only states exactly r raises away; the two agree in
    the large-n regime but ``max_r`` can overshoot for small n.
    """
    return _largest_below(lambda r: math.comb(n + r, r) - 1, L - 1, L - 2)


def ub_complete_sound(n: int, q: int, L: int) -> int:
    return n * (q - 1) // (max_r_sound(n, L) + 1)


def delta_threshold(n: int, L: int) -> int:
    """floor(n log(n/log L) / (2 log L)); Delta at or below it selects the small-Delta layout."""
    lg = log2c(L)
    return math.floor(n * math.log2(n / lg) / (2 * lg) + 1e-9)


def b_upper_estimate(n: int, L: int) -> float:
    """2 log L / log(n / log L); the split code's digit count stays below it in the split regime."""
    lg = log2c(L)
    return 2 * lg / math.log2(n / lg)


def r_growth_direction(n: int, L: int, c: float = 0.1) -> bool:
    """Direction check only: r >= c * log L / log(n / log L)."""
    lg = log2c(L)
    return max_r(n, L) >= c * lg / math.log2(n / lg)


def lb_register(n: int, q: int, L: int) -> Fraction:
    """Guarantee of the complete-graph register code chosen for (n, q, L)."""
    if L <= n:
        return lb_modular(n, q, L)
    return lb_split_code(n, q, L)


@dataclass
class RobustRegime:
    nq: int
    L_log_L: float
    ratio: float
    c: float
    epsilon: float
    met: bool


def robust_regime(n: int, q: int, L: int, epsilon: float, c: float | None = None) -> RobustRegime:
    """Report nq against L log L. The constant c(eps) is unknown, so it is a
    parameter (default 1/eps)."""
    if c is None:
        c = 1.0 / epsilon
    lll = L * log2c(L)
    ratio = n * q / lll
    return RobustRegime(n * q, lll, ratio, c, epsilon, ratio >= c)


def _frac(x):
    if isinstance(x, Fraction):
        return {"exact": f"{x.numerator}/{x.denominator}", "value": float(x)}
    return x


@dataclass
class BoundsReport:
    n: int
    q: int
    L: int
    ub_trivial: int
    r: int
    ub_complete: int | None
    r_sound: int
    ub_complete_sound: int | None
    lb_modular: Fraction | None
    lb_modular_uniform: Fraction | None
    lb_baserep: Fraction | None
    lb_split: float | None
    lb_split_code: Fraction | None
    b: int | None
    delta: int | None = None
    delta_threshold: int | None = None
    robust: RobustRegime | None = None
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, dict) and k == "robust":
                out[k] = v
            else:
                out[k] = _frac(v)
        return out


def bounds_report(n: int, q: int, L: int, delta: int | None = None,
                  epsilon: float | None = None) -> BoundsReport:
    if n < 1 or q < 2 or L < 2:
        raise ValueError(f"need n >= 1, q >= 2, L >= 2 (got n={n}, q={q}, L={L})")
    notes = []
    flags = {
        "modular_regime": modular_regime(n, L),
        "modular_bound_proven": modular_regime(n, L) and is_power_of_two(L),
        "split_regime": split_regime(n, L),
        "complete_ub_applies": n < L - 1,
        "baserep_regime": L >= 2 ** (n / 16) and L <= q ** n,
    }
    if L < 4:
        notes.append("log L clamped to 1")
    try:
        b = choose_b(n, L)
        lb_sc = lb_split_code(n, q, L) if L > n else None
    except NoFeasibleB:
        b, lb_sc = None, None
        notes.append("no feasible digit count b for the split code")
    lb_br = None
    if L <= q ** n:
        lb_br = lb_baserep_code(n, q, L)
    report = BoundsReport(
        n=n, q=q, L=L,
        ub_trivial=ub_trivial(n, q),
        r=max_r(n, L),
        ub_complete=ub_complete(n, q, L) if n < L - 1 else None,
        r_sound=max_r_sound(n, L),
        ub_complete_sound=ub_complete_sound(n, q, L) if n < L - 1 else None,
        lb_modular=lb_modular(n, q, L) if L <= n else None,
        lb_modular_uniform=lb_modular_uniform(n, q) if L <= n else None,
        lb_baserep=lb_br,
        lb_split=lb_split(n, q, L) if n <= L else None,
        lb_split_code=lb_sc,
        b=b,
        flags=flags,
        notes=notes,
    )
    if delta is not None:
        report.delta = delta
        report.delta_threshold = delta_threshold(n, L)
        flags["small_delta"] = delta <= report.delta_threshold
    if epsilon is not None:
        report.robust = robust_regime(n, q, L, epsilon)
    return report
