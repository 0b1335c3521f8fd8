"""Matchings of cycle graphs and the Lucas-sequence identities they obey.

A matching of the P-cycle (vertices 0..P-1, edges (k, k+1 mod P)) is a
set of pairwise non-adjacent edges.  The number of matchings with r
edges is (P/(P-r)) C(P-r, r), and the total over all r is the Lucas
number L_P.  Weighted sums over matchings evaluate through the Lucas
polynomials, which is what the estimate for large rings relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidMatchingError, ParameterError


@dataclass(frozen=True)
class Matching:
    """A matching of the P-cycle, stored as sorted edges (k, k+1 mod P).

    Edges are validated on construction: each must be a cycle edge and
    no two may share a vertex.
    """

    cycle_length: int
    edges: tuple

    def __post_init__(self):
        p = self.cycle_length
        if p < 3:
            raise ParameterError("cycle length must be >= 3")
        seen = set()
        canon = []
        for e in self.edges:
            if len(e) != 2:
                raise InvalidMatchingError(f"edge {e!r} is not a pair")
            a, b = e
            if not (0 <= a < p and 0 <= b < p):
                raise InvalidMatchingError(f"edge {e!r} has vertices outside the cycle")
            if b != (a + 1) % p:
                if a == (b + 1) % p:
                    a, b = b, a
                else:
                    raise InvalidMatchingError(f"edge {e!r} is not a cycle edge")
            if a in seen or b in seen:
                raise InvalidMatchingError(f"edge ({a}, {b}) shares a vertex "
                                           "with another edge")
            seen.add(a)
            seen.add(b)
            canon.append((a, b))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def size(self):
        return len(self.edges)

    def matched_vertices(self):
        return frozenset(v for e in self.edges for v in e)

    def is_perfect(self):
        return 2 * self.size == self.cycle_length


def cycle_matchings(p, size=None):
    """All matchings of the P-cycle, optionally restricted to r edges.

    Matchings are returned sorted by size then lexicographically, with
    the empty matching first.
    """
    if p < 3:
        raise ParameterError("cycle length must be >= 3")
    edges = [(k, (k + 1) % p) for k in range(p)]
    found = []

    def extend(next_edge, chosen, used):
        if next_edge == p:
            found.append(Matching(p, tuple(chosen)))
            return
        extend(next_edge + 1, chosen, used)
        a, b = edges[next_edge]
        if a not in used and b not in used:
            chosen.append((a, b))
            extend(next_edge + 1, chosen, used | {a, b})
            chosen.pop()

    extend(0, [], frozenset())
    found.sort(key=lambda m: (m.size, m.edges))
    if size is not None:
        found = [m for m in found if m.size == size]
    return found


def matching_count(p, r):
    """Number of r-edge matchings of the P-cycle: (P/(P-r)) C(P-r, r)."""
    if p < 3:
        raise ParameterError("cycle length must be >= 3")
    if r < 0 or 2 * r > p:
        return 0
    if r == 0:
        return 1
    count = Fraction(p, p - r) * math.comb(p - r, r)
    assert count.denominator == 1
    return int(count)


@lru_cache(maxsize=None)
def fibonacci_number(n):
    """F_n with F_1 = F_2 = 1."""
    if n < 1:
        raise ParameterError("fibonacci index must be >= 1")
    if n <= 2:
        return 1
    return fibonacci_number(n - 1) + fibonacci_number(n - 2)


@lru_cache(maxsize=None)
def lucas_number(n):
    """L_n with L_1 = 1, L_2 = 3; equals the matching count of the n-cycle."""
    if n < 1:
        raise ParameterError("lucas index must be >= 1")
    if n == 1:
        return 1
    if n == 2:
        return 3
    return lucas_number(n - 1) + lucas_number(n - 2)


def lucas_polynomial(n, x):
    """Lucas polynomial L_n(x): L_1 = x, L_2 = x^2 + 2, then the usual
    two-term recurrence.  Works for numeric or Fraction arguments."""
    if n < 1:
        raise ParameterError("lucas index must be >= 1")
    if n == 1:
        return x
    prev, cur = x, x * x + 2
    for _ in range(n - 2):
        prev, cur = cur, x * cur + prev
    return cur


def matching_sum(p, weight):
    """sum_r (number of r-edge matchings) * weight**r.

    For weight S > 0 this equals S**(P/2) * L_P(S**-1/2); the closed
    form is exercised against the direct sum in the tests.
    """
    if p < 3:
        raise ParameterError("cycle length must be >= 3")
    return sum(matching_count(p, r) * weight ** r for r in range(p // 2 + 1))
