"""Independent reference computations shared by the tests."""

import itertools
from fractions import Fraction
from math import factorial


def fit_probabilities(capacities):
    """P(the first k uniform throws overflow no bin), exactly, for k = 0..sum(capacities).

    Counts sequences via k! [x^k] prod_b sum_{j<=c_b} x^j / j!.
    """
    L = len(capacities)
    poly = [Fraction(1)]
    for c in capacities:
        term = [Fraction(1, factorial(j)) for j in range(c + 1)]
        out = [Fraction(0)] * (len(poly) + c)
        for i, a in enumerate(poly):
            if a:
                for j, b in enumerate(term):
                    out[i + j] += a * b
        poly = out
    return [poly[k] * factorial(k) / Fraction(L) ** k for k in range(len(poly))]


def expected_fits(capacities):
    """E[number of throws before the first one lands in a full bin]."""
    probs = fit_probabilities(capacities)
    return sum(probs[1:], Fraction(0))


def fits_cdf(capacities):
    """P(B <= k) for k = 0..sum(capacities), B the count above."""
    probs = fit_probabilities(capacities) + [Fraction(0)]
    return [1 - probs[k + 1] for k in range(len(probs) - 1)]


def birthday_expectation(L):
    """Capacities all one: E = sum_{k=1}^{L} prod_{i<k} (L-i)/L."""
    total, p = Fraction(0), Fraction(1)
    for k in range(1, L + 1):
        p *= Fraction(L - (k - 1), L)
        total += p
    return total


def naive_game(code, graph, s=None, cur=0):
    """Unmemoized minimax over adversary choices (tiny codes only)."""
    from flashrewrite.errors import Exhausted

    if s is None:
        s = code.initial_state()
    best = None
    for v in graph.neighbors(cur):
        try:
            s2 = code.update(s, v)
        except Exhausted:
            return 0
        r = 1 + naive_game(code, graph, s2, v)
        best = r if best is None else min(best, r)
    return best or 0


def brute_optimal(n, q, L):
    """Max over decode maps of the adversary game, by direct recursion per map."""
    states = list(itertools.product(range(q), repeat=n))
    best = 0
    for rest in itertools.product(range(L), repeat=len(states) - 1):
        F = dict(zip(states, (0,) + rest))

        memo = {}

        def value(s):
            if s in memo:
                return memo[s]
            worst = None
            for v in range(L):
                if v == F[s]:
                    continue
                options = [1 + value(t) for t in states
                           if t != s and F[t] == v and all(a >= b for a, b in zip(t, s))]
                got = max(options, default=0)
                worst = got if worst is None else min(worst, got)
            memo[s] = worst
            return worst

        best = max(best, value(states[0]))
    return best
