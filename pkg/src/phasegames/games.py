"""Cooperative multiplayer games with phase-structured win conditions.

Each game class bundles the input promise, the input distribution, and
the referee's win predicate.  Players are indexed 0..N-1.  Inputs are
always full-length tuples (one entry per player, zero for players the
game never challenges); outputs are per-player bits, digits, or bit
triples depending on the game.

``enumerate_inputs`` yields ``(inputs, weight)`` pairs with exact
Fraction weights summing to 1, so averaged win probabilities computed
from them are exact up to the state amplitudes themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .combinatorics import Matching, cycle_matchings
from .errors import CapacityError, GeometryError, ParameterError

MAX_ENUMERATED_INPUTS = 2 ** 24


def _check_enumeration(size):
    if size > MAX_ENUMERATED_INPUTS:
        raise CapacityError(
            f"promise set of {size} inputs exceeds the enumeration cap "
            f"{MAX_ENUMERATED_INPUTS}; sample instead")


def _check_marked(marked, num_players, minimum):
    marked = tuple(marked)
    if len(marked) < minimum:
        raise ParameterError(f"need at least {minimum} challenged players")
    if list(marked) != sorted(set(marked)):
        raise ParameterError("challenged players must be strictly increasing")
    if marked[0] < 0 or marked[-1] >= num_players:
        raise ParameterError("challenged player index out of range")
    return marked


def _as_bits(values, length, what):
    values = tuple(values)
    if len(values) != length:
        raise ParameterError(f"{what} must have length {length}")
    for v in values:
        if v not in (0, 1):
            raise ParameterError(f"{what} entries must be bits")
    return values


@dataclass(frozen=True)
class ParityGame:
    """N players each get a bit, promised to have even total.

    The team wins when the sum of the output bits has the same parity
    as half the input total.  Inputs are uniform over the promise set.
    """

    num_players: int

    def __post_init__(self):
        if self.num_players < 3:
            raise ParameterError("parity game needs at least 3 players")

    def enumerate_inputs(self):
        n = self.num_players
        _check_enumeration(2 ** (n - 1))
        weight = Fraction(1, 2 ** (n - 1))
        out = []
        for code in range(2 ** n):
            bits = tuple((code >> (n - 1 - j)) & 1 for j in range(n))
            if sum(bits) % 2 == 0:
                out.append((bits, weight))
        return out

    def judge(self, inputs, outputs):
        a = _as_bits(inputs, self.num_players, "inputs")
        b = _as_bits(outputs, self.num_players, "outputs")
        if sum(a) % 2:
            raise ParameterError("inputs violate the even-total promise")
        return sum(b) % 2 == (sum(a) // 2) % 2

    def sample_input(self, rng):
        free = rng.integers(0, 2, size=self.num_players - 1)
        last = int(free.sum()) % 2
        return tuple(int(v) for v in free) + (last,)


@dataclass(frozen=True)
class MarkedParityGame:
    """Parity game challenging only a marked subset of the players.

    Marked players receive bits with even total, drawn Bernoulli(alpha)
    conditioned on the promise; everyone else receives 0.  All N players
    answer with a bit, and the full output total must match half the
    input total mod 2.  ``alpha`` may be a Fraction for exact weights.
    """

    num_players: int
    marked: tuple
    alpha: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.num_players < 3:
            raise ParameterError("need at least 3 players")
        object.__setattr__(self, "marked",
                           _check_marked(self.marked, self.num_players, 3))
        a = self.alpha
        if not (0 < a < 1):
            raise ParameterError("alpha must lie strictly between 0 and 1")

    @property
    def num_marked(self):
        return len(self.marked)

    def input_weight(self, inputs):
        """Exact promise-conditioned Bernoulli weight of a full input tuple."""
        a = _as_bits(inputs, self.num_players, "inputs")
        for j, v in enumerate(a):
            if v and j not in self.marked:
                raise ParameterError("unchallenged player received a nonzero input")
        s = sum(a)
        if s % 2:
            raise ParameterError("inputs violate the even-total promise")
        p, q = self.alpha, 1 - self.alpha
        return 2 * p ** s * q ** (self.num_marked - s) \
            / (1 + (q - p) ** self.num_marked)

    def enumerate_inputs(self):
        out = []
        p = len(self.marked)
        _check_enumeration(2 ** (p - 1))
        for code in range(2 ** p):
            mbits = tuple((code >> (p - 1 - j)) & 1 for j in range(p))
            if sum(mbits) % 2:
                continue
            full = [0] * self.num_players
            for pos, v in zip(self.marked, mbits):
                full[pos] = v
            full = tuple(full)
            out.append((full, self.input_weight(full)))
        return out

    def judge(self, inputs, outputs):
        a = _as_bits(inputs, self.num_players, "inputs")
        b = _as_bits(outputs, self.num_players, "outputs")
        self.input_weight(a)  # validates promise and support
        return sum(b) % 2 == (sum(a) // 2) % 2

    def sample_input(self, rng):
        p = len(self.marked)
        alpha = float(self.alpha)
        while True:
            mbits = (rng.random(p) < alpha).astype(int)
            if int(mbits.sum()) % 2 == 0:
                break
        full = [0] * self.num_players
        for pos, v in zip(self.marked, mbits):
            full[pos] = int(v)
        return tuple(full)


@dataclass(frozen=True)
class ModuloGame:
    """Digit game: inputs in 0..D-1 with total divisible by D.

    The team answers with digits mod M and wins when the output total is
    congruent to (input total)/D mod M.  D = M = 2 recovers the parity
    game.  Inputs are uniform over the promise set of size D**(N-1).
    """

    num_players: int
    divisor: int
    modulus: int

    def __post_init__(self):
        if self.num_players < 2:
            raise ParameterError("modulo game needs at least 2 players")
        if self.divisor < 2 or self.modulus < 2:
            raise ParameterError("divisor and modulus must be at least 2")

    def _check_digits(self, values, base, what):
        values = tuple(values)
        if len(values) != self.num_players:
            raise ParameterError(f"{what} must have length {self.num_players}")
        for v in values:
            if not (0 <= v < base):
                raise ParameterError(f"{what} entries must be digits below {base}")
        return values

    def enumerate_inputs(self):
        n, d = self.num_players, self.divisor
        _check_enumeration(d ** (n - 1))
        weight = Fraction(1, d ** (n - 1))
        out = []
        for code in range(d ** n):
            digs = tuple((code // d ** (n - 1 - j)) % d for j in range(n))
            if sum(digs) % d == 0:
                out.append((digs, weight))
        return out

    def judge(self, inputs, outputs):
        a = self._check_digits(inputs, self.divisor, "inputs")
        b = self._check_digits(outputs, self.modulus, "outputs")
        if sum(a) % self.divisor:
            raise ParameterError("inputs violate the divisibility promise")
        return sum(b) % self.modulus == (sum(a) // self.divisor) % self.modulus

    def sample_input(self, rng):
        free = rng.integers(0, self.divisor, size=self.num_players - 1)
        last = (-int(free.sum())) % self.divisor
        return tuple(int(v) for v in free) + (last,)


@dataclass(frozen=True)
class PolygonGame:
    """Matching game on a P-cycle of marked players inside a ring of N.

    Marked players receive arbitrary bits (no promise, uniform over all
    2**P strings); unmarked players receive 0.  Every player answers
    with a bit triple.  The team wins when all applicable referee
    conditions hold:

    1. every player's triple sums to 0 mod 2;
    2. the middle bits of all N triples sum to 0 mod 2;
    3. if the input is all zero, the first bits of all N triples sum
       to 0 mod 2;
    4. for every matching of the marked cycle whose vertex pattern
       equals the input, a signed sum over the matching (first bit of
       the left endpoint and third bit of the right endpoint of each
       matched edge, first bits of unmatched marked players, third bits
       along ring segments under matched edges, first bits along all
       other segments) must equal the number of matched edges mod 2.

    Inputs that are not the pattern of any matching and not all-zero
    are judged on conditions 1 and 2 alone.
    """

    num_players: int
    marked: tuple

    def __post_init__(self):
        if self.num_players < 3:
            raise ParameterError("polygon game needs at least 3 players")
        object.__setattr__(self, "marked",
                           _check_marked(self.marked, self.num_players, 3))

    @classmethod
    def ring(cls, p):
        """Standalone polygon: every one of the p players is marked."""
        return cls(p, tuple(range(p)))

    @property
    def num_marked(self):
        return len(self.marked)

    def marked_bits(self, inputs):
        a = _as_bits(inputs, self.num_players, "inputs")
        for j, v in enumerate(a):
            if v and j not in self.marked:
                raise ParameterError("unchallenged player received a nonzero input")
        return tuple(a[pos] for pos in self.marked)

    def full_input(self, marked_bits):
        marked_bits = _as_bits(marked_bits, self.num_marked, "marked bits")
        full = [0] * self.num_players
        for pos, v in zip(self.marked, marked_bits):
            full[pos] = v
        return tuple(full)

    def enumerate_inputs(self):
        p = self.num_marked
        _check_enumeration(2 ** p)
        weight = Fraction(1, 2 ** p)
        out = []
        for code in range(2 ** p):
            mbits = tuple((code >> (p - 1 - j)) & 1 for j in range(p))
            out.append((self.full_input(mbits), weight))
        return out

    def input_for_matching(self, matching: Matching):
        """Full input tuple whose marked pattern is the matching's vertices."""
        if matching.cycle_length != self.num_marked:
            raise ParameterError("matching lives on a different cycle")
        mbits = [0] * self.num_marked
        for v in matching.matched_vertices():
            mbits[v] = 1
        return self.full_input(mbits)

    def matchings_for_input(self, inputs):
        """All nonempty matchings whose vertex pattern equals the input."""
        mbits = self.marked_bits(inputs)
        hits = []
        for m in cycle_matchings(self.num_marked):
            if m.size == 0:
                continue
            pattern = [0] * self.num_marked
            for v in m.matched_vertices():
                pattern[v] = 1
            if tuple(pattern) == mbits:
                hits.append(m)
        return hits

    def is_pattern_input(self, inputs):
        return bool(self.matchings_for_input(inputs))

    def segment_players(self, k):
        """Ring players strictly between marked neighbor k and k+1, cyclic."""
        p = self.num_marked
        start = self.marked[k]
        stop = self.marked[(k + 1) % p]
        out = []
        j = (start + 1) % self.num_players
        while j != stop:
            out.append(j)
            j = (j + 1) % self.num_players
        return tuple(out)

    def judge(self, inputs, outputs):
        a = _as_bits(inputs, self.num_players, "inputs")
        mbits = self.marked_bits(a)
        triples = tuple(tuple(t) for t in outputs)
        if len(triples) != self.num_players:
            raise ParameterError("need one output triple per player")
        for t in triples:
            _as_bits(t, 3, "output triple")
        for t in triples:
            if sum(t) % 2:
                return False
        if sum(t[1] for t in triples) % 2:
            return False
        if all(v == 0 for v in mbits):
            return sum(t[0] for t in triples) % 2 == 0
        for m in self.matchings_for_input(a):
            matched = m.matched_vertices()
            lhs = 0
            for (k, kp) in m.edges:
                lhs += triples[self.marked[k]][0]
                lhs += triples[self.marked[kp]][2]
            for k in range(self.num_marked):
                if k not in matched:
                    lhs += triples[self.marked[k]][0]
            for k in range(self.num_marked):
                seg = self.segment_players(k)
                slot = 2 if (k, (k + 1) % self.num_marked) in m.edges else 0
                for l in seg:
                    lhs += triples[l][slot]
            if lhs % 2 != m.size % 2:
                return False
        return True

    def sample_input(self, rng):
        mbits = rng.integers(0, 2, size=self.num_marked)
        return self.full_input(tuple(int(v) for v in mbits))


@dataclass(frozen=True)
class ToricGame:
    """Loop game on a toric lattice: teams act on vertical cycles.

    Each of the T teams owns the vertical bonds of one column and gets a
    bit; the total is promised even.  The referee reads one bit from
    each vertical bond of ``dual_row`` and the team wins when those bits
    sum to half the input total mod 2.  Inputs are uniform over the
    promise set.

    The lattice object must provide ``team_loop_bonds(col)`` and
    ``dual_loop_bonds(row)`` bond lists (see the lattice class in the
    models module).
    """

    lattice: object
    team_columns: tuple
    dual_row: int = 0

    def __post_init__(self):
        cols = tuple(self.team_columns)
        if len(cols) < 3:
            raise ParameterError("need at least 3 teams")
        if list(cols) != sorted(set(cols)):
            raise ParameterError("team columns must be strictly increasing")
        if cols[0] < 0 or cols[-1] >= self.lattice.lx:
            raise ParameterError("team column out of range")
        if not (0 <= self.dual_row < self.lattice.ly):
            raise ParameterError("dual row out of range")
        dual = set(self.lattice.dual_loop_bonds(self.dual_row))
        for col in cols:
            shared = dual & set(self.lattice.team_loop_bonds(col))
            if len(shared) != 1:
                raise GeometryError(
                    f"readout loop must cross team column {col} in exactly "
                    f"one bond, found {len(shared)}")
        object.__setattr__(self, "team_columns", cols)

    @property
    def num_teams(self):
        return len(self.team_columns)

    def enumerate_inputs(self):
        t = self.num_teams
        _check_enumeration(2 ** (t - 1))
        weight = Fraction(1, 2 ** (t - 1))
        out = []
        for code in range(2 ** t):
            bits = tuple((code >> (t - 1 - j)) & 1 for j in range(t))
            if sum(bits) % 2 == 0:
                out.append((bits, weight))
        return out

    def judge(self, inputs, outputs):
        a = _as_bits(inputs, self.num_teams, "inputs")
        y = _as_bits(outputs, self.lattice.lx, "outputs")
        if sum(a) % 2:
            raise ParameterError("inputs violate the even-total promise")
        return sum(y) % 2 == (sum(a) // 2) % 2

    def sample_input(self, rng):
        free = rng.integers(0, 2, size=self.num_teams - 1)
        last = int(free.sum()) % 2
        return tuple(int(v) for v in free) + (last,)
