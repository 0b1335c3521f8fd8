"""Exact classical baselines for the nonlocal games.

Deterministic strategies suffice for optimal classical play (randomized
strategies are convex mixtures), so the optimum over a finite game is a
finite maximization.  This module provides three layers:

* closed-form optima and bounds where they are known,
* an exhaustive vectorized search over all deterministic strategies with
  exact integer scoring (the optimum comes back as a Fraction),
* a phase-sum upper bound on the digit game that decays with the number
  of players.

The search space is the product of per-player local maps.  Players are
ordered most significant first, and within each player the map entries
are ordered by local input; strategy index order is therefore exactly
lexicographic order on serialized strategies, which makes "first
maximizer found" the canonical witness.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .combinatorics import fibonacci_number
from .errors import (CapacityError, ContractViolationError, ParameterError)
from .freefermion import classical_parity_value
from .games import (MarkedParityGame, ModuloGame, ParityGame, PolygonGame,
                    ToricGame)

MAX_SEARCH_SPACE = 2 ** 32
LONG_SEARCH_THRESHOLD = 2 ** 24
MAX_SCORE_DENOMINATOR = 2 ** 62
DEFAULT_CHUNK = 2 ** 17

# Bit-triple codes with even parity: first bit is the most significant.
EVEN_TRIPLE_CODES = (0, 3, 5, 6)

RESTRICTION_FULL = "full"
RESTRICTION_EVEN_TRIPLES = "condition1-respecting"


def _decode_triple(code: int) -> Tuple[int, int, int]:
    if not 0 <= code < 8:
        raise ParameterError("triple codes live in 0..7")
    return ((code >> 2) & 1, (code >> 1) & 1, code & 1)


@dataclass(frozen=True)
class ClassicalStrategy:
    """Deterministic strategy: one output code per admissible local input.

    ``local_inputs[j]`` lists player j's admissible inputs in increasing
    order and ``tables[j]`` holds the matching output codes.  Codes are
    bits for parity-style games, residues for the digit game, and 3-bit
    triple codes (first bit most significant) for the polygon game.
    """

    local_inputs: Tuple[Tuple[int, ...], ...]
    tables: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.local_inputs) != len(self.tables):
            raise ParameterError("one table per player required")
        for ins, outs in zip(self.local_inputs, self.tables):
            if len(ins) != len(outs):
                raise ParameterError("table must cover every local input")
            if list(ins) != sorted(set(ins)):
                raise ParameterError("local inputs must be strictly increasing")
            for o in outs:
                if o < 0:
                    raise ParameterError("output codes must be nonnegative")

    @property
    def num_players(self) -> int:
        return len(self.tables)

    def output_for(self, player: int, value: int) -> int:
        ins = self.local_inputs[player]
        try:
            return self.tables[player][ins.index(value)]
        except ValueError:
            raise ParameterError(
                f"strategy has no entry for input {value} of player {player}")


@dataclass(frozen=True)
class StrategyEvaluation:
    """Exact win probability plus the list of inputs the strategy loses."""

    value: Fraction
    losing_inputs: Tuple[tuple, ...]

    @property
    def num_losses(self) -> int:
        return len(self.losing_inputs)


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an exhaustive strategy search.

    ``optimal_count`` counts every tied maximizer; ``witness`` is the
    lexicographically smallest of them and re-evaluates exactly to
    ``optimum``.  ``examined`` is the full space size; ``pruned`` counts
    strategies discarded before their last input because they could no
    longer reach the incumbent.
    """

    game_label: str
    space_size: int
    optimum: Fraction
    optimal_count: int
    witness: ClassicalStrategy
    examined: int
    pruned: int
    restriction: str
    seconds: float

    def to_csv_row(self) -> Tuple[str, ...]:
        return (self.game_label, str(self.space_size),
                str(self.optimum.numerator), str(self.optimum.denominator),
                str(self.optimal_count), format(self.seconds, ".3f"))


@dataclass(frozen=True)
class ClassicalBound:
    """Interval bracketing an optimal classical win probability."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ParameterError("bounds must satisfy 0 <= lower <= upper <= 1")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Optional[Fraction]:
        return self.lower if self.exact else None


def game_label(game) -> str:
    if isinstance(game, ParityGame):
        return f"parity-n{game.num_players}"
    if isinstance(game, MarkedParityGame):
        a = Fraction(game.alpha)
        return (f"marked-n{game.num_players}-p{game.num_marked}"
                f"-alpha{a.numerator}-{a.denominator}")
    if isinstance(game, ModuloGame):
        return (f"modulo-n{game.num_players}-d{game.divisor}"
                f"-m{game.modulus}")
    if isinstance(game, PolygonGame):
        return f"polygon-n{game.num_players}-p{game.num_marked}"
    if isinstance(game, ToricGame):
        return f"toric-t{game.num_teams}"
    raise ParameterError(f"unsupported game type {type(game).__name__}")


# ---------------------------------------------------------------------------
# Closed forms


def marked_classical_value(num_marked: int, alpha) -> Fraction:
    """Optimal classical value of the weighted parity game on P sites.

    The advantage over 1/2 decays with the per-site factor
    alpha^2 + (1-alpha)^2; odd P gains one bare factor of 1-alpha.
    At alpha = 1/2 this reduces to the uniform parity optimum exactly.
    """
    if num_marked < 3:
        raise ParameterError("need at least 3 challenged players")
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ParameterError("alpha must lie strictly between 0 and 1")
    beta = 1 - alpha
    base = alpha * alpha + beta * beta
    denom = 1 + (beta - alpha) ** num_marked
    if num_marked % 2 == 0:
        advantage = base ** (num_marked // 2) / denom
    else:
        advantage = base ** ((num_marked - 1) // 2) * beta / denom
    return Fraction(1, 2) + advantage


def toric_classical_value(num_teams: int) -> Fraction:
    """Optimal classical value of the loop game with T teams.

    Only one readout bond per team reaches the referee, so the game
    collapses to parity on T bits and inherits its optimum.
    """
    if num_teams < 3:
        raise ParameterError("need at least 3 teams")
    return classical_parity_value(num_teams)


def polygon_classical_bounds(num_marked: int) -> ClassicalBound:
    """Classical bracket for the matching game on a P-cycle.

    Even cycles are won with certainty.  Odd cycles cannot be won on
    every input; the upper bound concedes one losing input, and the
    lower bound is achieved by a strategy losing F_{P-1} inputs.
    """
    if num_marked < 3:
        raise ParameterError("polygon needs at least 3 marked players")
    if num_marked % 2 == 0:
        return ClassicalBound(Fraction(1), Fraction(1))
    scale = 2 ** num_marked
    lower = 1 - Fraction(fibonacci_number(num_marked - 1), scale)
    upper = 1 - Fraction(1, scale)
    return ClassicalBound(lower, upper)


def closed_form_bounds(game) -> ClassicalBound:
    """Best known closed-form bracket for a game's classical optimum."""
    if isinstance(game, ParityGame):
        v = classical_parity_value(game.num_players)
        return ClassicalBound(v, v)
    if isinstance(game, MarkedParityGame):
        v = marked_classical_value(game.num_marked, game.alpha)
        return ClassicalBound(v, v)
    if isinstance(game, ToricGame):
        v = toric_classical_value(game.num_teams)
        return ClassicalBound(v, v)
    if isinstance(game, PolygonGame):
        return polygon_classical_bounds(game.num_marked)
    if isinstance(game, ModuloGame):
        if game.divisor == 2 and game.modulus == 2:
            # Bit-for-bit the parity game, including its optimum.
            v = classical_parity_value(game.num_players) \
                if game.num_players >= 3 else Fraction(1)
            return ClassicalBound(v, v)
        raise ParameterError(
            "no closed form for this digit game; combine exhaustive_search "
            "with modulo_classical_upper_bound")
    raise ParameterError(f"unsupported game type {type(game).__name__}")


# ---------------------------------------------------------------------------
# Strategy construction and exact evaluation


def _local_inputs(game) -> Tuple[Tuple[int, ...], ...]:
    if isinstance(game, ParityGame):
        return ((0, 1),) * game.num_players
    if isinstance(game, (MarkedParityGame, PolygonGame)):
        return tuple((0, 1) if j in game.marked else (0,)
                     for j in range(game.num_players))
    if isinstance(game, ModuloGame):
        return (tuple(range(game.divisor)),) * game.num_players
    if isinstance(game, ToricGame):
        return ((0, 1),) * game.num_teams
    raise ParameterError(f"unsupported game type {type(game).__name__}")


def strategy_from_tables(game, tables: Sequence[Sequence[int]]) -> ClassicalStrategy:
    """Wrap raw per-player output tables for ``game``."""
    return ClassicalStrategy(_local_inputs(game),
                             tuple(tuple(t) for t in tables))


def constant_strategy(game, output_code: int = 0) -> ClassicalStrategy:
    """Strategy answering ``output_code`` regardless of input."""
    ins = _local_inputs(game)
    return ClassicalStrategy(ins, tuple((output_code,) * len(t) for t in ins))


def polygon_reference_strategy(game: PolygonGame) -> ClassicalStrategy:
    """Near-optimal ring strategy losing F_{P-1} inputs on odd cycles.

    Every player except the last answers the fixed even triple (1,1,0);
    the last player answers (0,0,0) on input 0 and (1,0,1) on input 1.
    """
    if not isinstance(game, PolygonGame):
        raise ParameterError("reference strategy is defined for polygon games")
    if game.num_marked != game.num_players:
        raise ParameterError("reference strategy needs the standalone ring")
    tables = [(0b110, 0b110)] * (game.num_players - 1)
    tables.append((0b000, 0b101))
    return strategy_from_tables(game, tables)


def _judge_outputs(game, strategy: ClassicalStrategy, inputs: tuple):
    """Convert per-player output codes into what the game's judge reads."""
    if isinstance(game, PolygonGame):
        return tuple(_decode_triple(strategy.output_for(j, inputs[j]))
                     for j in range(game.num_players))
    if isinstance(game, ToricGame):
        row = [0] * game.lattice.lx
        for i, col in enumerate(game.team_columns):
            row[col] = strategy.output_for(i, inputs[i])
        return tuple(row)
    return tuple(strategy.output_for(j, inputs[j])
                 for j in range(len(inputs)))


def evaluate_strategy(game, strategy: ClassicalStrategy) -> StrategyEvaluation:
    """Exact win probability of ``strategy`` with a per-input loss census.

    The value is a Fraction whenever the game's input weights are
    rational (all uniform games, and the weighted game with a Fraction
    alpha).
    """
    total = Fraction(0)
    losses = []
    for inputs, weight in game.enumerate_inputs():
        if game.judge(inputs, _judge_outputs(game, strategy, inputs)):
            total = total + weight
        else:
            losses.append(inputs)
    return StrategyEvaluation(total, tuple(losses))


# ---------------------------------------------------------------------------
# Vectorized exhaustive search


@dataclass(frozen=True)
class _PolygonConditions:
    """Referee checks for one polygon input, reduced to XOR masks."""

    all_zero: bool
    # Each matching contributes (players read on the first bit, players
    # read on the third bit, required parity).
    matchings: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], int], ...]


class _SearchPlan:
    """Static description of a search space and its scoring data."""

    def __init__(self, game, restriction: str):
        if restriction not in (RESTRICTION_FULL, RESTRICTION_EVEN_TRIPLES):
            raise ParameterError(f"unknown restriction {restriction!r}")
        if restriction == RESTRICTION_EVEN_TRIPLES \
                and not isinstance(game, PolygonGame):
            raise ParameterError(
                "the even-triple restriction applies to polygon games only")
        self.game = game
        self.restriction = restriction
        self.local_inputs = _local_inputs(game)
        self.slots = len(self.local_inputs)

        if isinstance(game, PolygonGame):
            self.kind = "polygon"
            if restriction == RESTRICTION_EVEN_TRIPLES:
                self.out_codes = EVEN_TRIPLE_CODES
            else:
                self.out_codes = tuple(range(8))
        elif isinstance(game, ModuloGame):
            self.kind = "sum"
            self.modulus = game.modulus
            self.out_codes = tuple(range(game.modulus))
        else:
            self.kind = "sum"
            self.modulus = 2
            self.out_codes = (0, 1)
        self.out_base = len(self.out_codes)

        self.entries = [len(t) for t in self.local_inputs]
        self.k = [self.out_base ** e for e in self.entries]
        self.space = math.prod(self.k)
        self.strides = []
        acc = 1
        for kj in reversed(self.k):
            self.strides.append(acc)
            acc *= kj
        self.strides.reverse()

        self._prepare_inputs()

    def _prepare_inputs(self):
        raw = self.game.enumerate_inputs()
        weights = [w for _, w in raw]
        for w in weights:
            if not isinstance(w, Fraction):
                raise ParameterError(
                    "exact search needs rational input weights; "
                    "use a Fraction alpha")
        den = math.lcm(*[w.denominator for w in weights])
        if den > MAX_SCORE_DENOMINATOR:
            raise CapacityError(
                f"input weights need denominator {den}, beyond exact "
                f"integer scoring range")
        nums = [int(w * den) for w in weights]
        if sum(nums) != den:
            raise ContractViolationError("input weights must sum to one")
        self.denominator = den
        self.weight_numerators = nums
        self.input_tuples = [a for a, _ in raw]
        # Position of each player's actual input within their local table.
        self.entry_pos = [
            tuple(self.local_inputs[j].index(self._slot_value(a, j))
                  for j in range(self.slots))
            for a in self.input_tuples
        ]
        if self.kind == "sum":
            self.targets = [self._sum_target(a) for a in self.input_tuples]
        else:
            self.conditions = [self._polygon_conditions(a)
                               for a in self.input_tuples]
        # Weight still ahead of each input, for pruning.
        rem = 0
        self.remaining_after = [0] * len(nums)
        for i in range(len(nums) - 1, -1, -1):
            self.remaining_after[i] = rem
            rem += nums[i]

    def _slot_value(self, a: tuple, j: int) -> int:
        return a[j]

    def _sum_target(self, a: tuple) -> int:
        game = self.game
        if isinstance(game, ModuloGame):
            return (sum(a) // game.divisor) % game.modulus
        return (sum(a) // 2) % 2

    def _polygon_conditions(self, a: tuple) -> _PolygonConditions:
        game = self.game
        mbits = game.marked_bits(a)
        if all(v == 0 for v in mbits):
            return _PolygonConditions(True, ())
        mats = []
        for m in game.matchings_for_input(a):
            firsts, thirds = [], []
            matched = m.matched_vertices()
            for (k, kp) in m.edges:
                firsts.append(game.marked[k])
                thirds.append(game.marked[kp])
            for k in range(game.num_marked):
                if k not in matched:
                    firsts.append(game.marked[k])
            for k in range(game.num_marked):
                seg = game.segment_players(k)
                if (k, (k + 1) % game.num_marked) in m.edges:
                    thirds.extend(seg)
                else:
                    firsts.extend(seg)
            mats.append((tuple(firsts), tuple(thirds), m.size % 2))
        return _PolygonConditions(False, tuple(mats))

    # -- chunk scoring ----------------------------------------------------

    def decode_maps(self, idx: np.ndarray) -> List[np.ndarray]:
        return [(idx // self.strides[j]) % self.k[j]
                for j in range(self.slots)]

    def _chunk_outputs(self, maps: List[np.ndarray], i: int,
                       j: int) -> np.ndarray:
        e = self.entry_pos[i][j]
        power = self.out_base ** (self.entries[j] - 1 - e)
        return (maps[j] // power) % self.out_base

    def win_mask(self, maps: List[np.ndarray], i: int) -> np.ndarray:
        if self.kind == "sum":
            acc = np.zeros(maps[0].shape, dtype=np.int64)
            for j in range(self.slots):
                acc += self._chunk_outputs(maps, i, j)
            return (acc % self.modulus) == self.targets[i]
        return self._polygon_win(maps, i)

    def _polygon_win(self, maps: List[np.ndarray], i: int) -> np.ndarray:
        lookup = np.asarray(self.out_codes, dtype=np.int64)
        triples = [np.take(lookup, self._chunk_outputs(maps, i, j))
                   for j in range(self.slots)]
        ok = np.ones(maps[0].shape, dtype=bool)
        if self.restriction == RESTRICTION_FULL:
            for t in triples:
                parity = ((t >> 2) ^ (t >> 1) ^ t) & 1
                ok &= parity == 0
        middle = np.zeros(maps[0].shape, dtype=np.int64)
        for t in triples:
            middle ^= (t >> 1) & 1
        ok &= middle == 0
        cond = self.conditions[i]
        if cond.all_zero:
            first = np.zeros(maps[0].shape, dtype=np.int64)
            for t in triples:
                first ^= (t >> 2) & 1
            ok &= first == 0
            return ok
        for firsts, thirds, target in cond.matchings:
            acc = np.zeros(maps[0].shape, dtype=np.int64)
            for j in firsts:
                acc ^= (triples[j] >> 2) & 1
            for j in thirds:
                acc ^= triples[j] & 1
            ok &= acc == target
        return ok

    def decode_strategy(self, index: int) -> ClassicalStrategy:
        tables = []
        for j in range(self.slots):
            code = (index // self.strides[j]) % self.k[j]
            row = []
            for e in range(self.entries[j]):
                power = self.out_base ** (self.entries[j] - 1 - e)
                row.append(self.out_codes[(code // power) % self.out_base])
            tables.append(tuple(row))
        return ClassicalStrategy(self.local_inputs, tuple(tables))

    def strategy_score(self, strategy: ClassicalStrategy) -> int:
        """Exact integer numerator of a strategy's value, via the judge."""
        value = evaluate_strategy(self.game, strategy).value
        num = value * self.denominator
        if num.denominator != 1:
            raise ContractViolationError("seed score must be integral")
        return int(num)

    def validate_in_space(self, strategy: ClassicalStrategy):
        if strategy.local_inputs != self.local_inputs:
            raise ParameterError("seed strategy has the wrong input structure")
        allowed = set(self.out_codes)
        for row in strategy.tables:
            for o in row:
                if o not in allowed:
                    raise ParameterError(
                        "seed strategy uses outputs outside the searched space")


@dataclass
class _PartitionOutcome:
    best: int
    count: int
    witness_index: Optional[int]
    pruned: int


def _search_partition(plan: _SearchPlan, lo: int, hi: int, incumbent: int,
                      chunk_size: int) -> _PartitionOutcome:
    best = -1
    count = 0
    witness = None
    pruned = 0
    floor = incumbent
    num_inputs = len(plan.weight_numerators)
    for start in range(lo, hi, chunk_size):
        idx = np.arange(start, min(start + chunk_size, hi), dtype=np.int64)
        maps = plan.decode_maps(idx)
        scores = np.zeros(idx.shape, dtype=np.int64)
        for i in range(num_inputs):
            scores += plan.weight_numerators[i] * plan.win_mask(maps, i)
            remaining = plan.remaining_after[i]
            if floor > 0 and i + 1 < num_inputs:
                keep = scores + remaining >= floor
                frac = keep.mean() if keep.size else 1.0
                if frac < 0.7:
                    pruned += int(keep.size - keep.sum())
                    idx = idx[keep]
                    scores = scores[keep]
                    maps = [m[keep] for m in maps]
                    if idx.size == 0:
                        break
        if idx.size == 0:
            continue
        chunk_best = int(scores.max())
        if chunk_best > best:
            best = chunk_best
            count = int((scores == chunk_best).sum())
            witness = int(idx[int(np.argmax(scores))])
        elif chunk_best == best:
            count += int((scores == chunk_best).sum())
        floor = max(floor, best)
    return _PartitionOutcome(best, count, witness, pruned)


def exhaustive_search(game, restriction: str = RESTRICTION_FULL, *,
                      partitions: int = 1, allow_long: bool = False,
                      seed_strategy: Optional[ClassicalStrategy] = None,
                      chunk_size: int = DEFAULT_CHUNK) -> SearchResult:
    """Exact optimum over every deterministic strategy of ``game``.

    ``restriction`` may narrow polygon outputs to even triples, which
    shrinks the space sixteen-fold per player without touching the
    optimum whenever an odd triple would have lost its own input anyway
    (checked empirically on small cycles rather than assumed).

    Ties are all counted and the witness is the lexicographically
    smallest maximizer.  ``seed_strategy`` only seeds the pruning floor;
    it must live inside the searched space.  The search is statically
    partitioned and the outcome is independent of ``partitions`` and
    ``chunk_size``.

    Spaces larger than 2**24 need ``allow_long=True``; spaces larger
    than 2**32 are refused outright.
    """
    started = time.perf_counter()
    if partitions < 1:
        raise ParameterError("partitions must be at least 1")
    if chunk_size < 1:
        raise ParameterError("chunk_size must be at least 1")
    plan = _SearchPlan(game, restriction)
    if plan.space > MAX_SEARCH_SPACE:
        raise CapacityError(
            f"strategy space holds {plan.space} maps, beyond the 2^32 limit")
    if plan.space > LONG_SEARCH_THRESHOLD and not allow_long:
        raise ParameterError(
            f"strategy space holds {plan.space} maps; pass allow_long=True "
            f"to run a search this large")

    incumbent = 0
    if seed_strategy is not None:
        plan.validate_in_space(seed_strategy)
        incumbent = plan.strategy_score(seed_strategy)

    bounds = np.linspace(0, plan.space, partitions + 1, dtype=np.int64)
    ranges = [(int(bounds[i]), int(bounds[i + 1]))
              for i in range(partitions) if bounds[i] < bounds[i + 1]]
    if partitions == 1 or len(ranges) <= 1:
        outcomes = [_search_partition(plan, lo, hi, incumbent, chunk_size)
                    for lo, hi in ranges]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            futures = [pool.submit(_search_partition, plan, lo, hi,
                                   incumbent, chunk_size)
                       for lo, hi in ranges]
            outcomes = [f.result() for f in futures]

    best, count, witness_index, pruned = -1, 0, None, 0
    for out in outcomes:
        pruned += out.pruned
        if out.best > best:
            best, count, witness_index = out.best, out.count, out.witness_index
        elif out.best == best:
            count += out.count
    if witness_index is None:
        raise ContractViolationError("search returned no maximizer")

    witness = plan.decode_strategy(witness_index)
    optimum = Fraction(best, plan.denominator)
    check = evaluate_strategy(game, witness)
    if check.value != optimum:
        raise ContractViolationError(
            f"witness re-evaluates to {check.value}, search said {optimum}")
    return SearchResult(
        game_label=game_label(game),
        space_size=plan.space,
        optimum=optimum,
        optimal_count=count,
        witness=witness,
        examined=plan.space,
        pruned=pruned,
        restriction=restriction,
        seconds=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Digit-game upper bound


def modulo_phase_sum_maximum(divisor: int, modulus: int,
                             chunk_size: int = 2 ** 18) -> float:
    """Largest phase-weighted response sum of a single digit player.

    Maximizes |sum_d exp(2 pi i d (k - n/M) / D) w^(n b(d))| over the
    nonzero twist n, the shift k, and all M^D single-digit reply rules
    b, with w the order-M root of unity.  The result controls how fast
    the classical bound below decays with the number of players.
    """
    if divisor < 2 or modulus < 2:
        raise ParameterError("divisor and modulus must be at least 2")
    rules = modulus ** divisor
    if rules > 2 ** 24:
        raise CapacityError(
            f"enumerating {rules} reply rules is beyond the 2^24 limit")
    out_phase_row = np.exp(2j * np.pi * np.arange(modulus) / modulus)
    best = 0.0
    for n in range(1, modulus):
        out_phase = out_phase_row ** n
        for k in range(divisor):
            base = np.exp(2j * np.pi * np.arange(divisor)
                          * (k - n / modulus) / divisor)
            for start in range(0, rules, chunk_size):
                codes = np.arange(start, min(start + chunk_size, rules),
                                  dtype=np.int64)
                acc = np.zeros(codes.shape, dtype=np.complex128)
                for d in range(divisor):
                    digit = (codes // modulus ** (divisor - 1 - d)) % modulus
                    acc += base[d] * out_phase[digit]
                local = float(np.abs(acc).max())
                if local > best:
                    best = local
    return best


def modulo_classical_upper_bound(divisor: int, modulus: int,
                                 num_players: int,
                                 phase_sum: Optional[float] = None) -> float:
    """Upper bound on the classical value of the digit game.

    Equals 1/M + ((M-1)/M) * s * (s/D)^(N-1) with s the phase-sum
    maximum; it decreases in N whenever s < D.  Pass a precomputed
    ``phase_sum`` to skip the enumeration.
    """
    if num_players < 1:
        raise ParameterError("need at least one player")
    s = modulo_phase_sum_maximum(divisor, modulus) \
        if phase_sum is None else float(phase_sum)
    return 1.0 / modulus + (modulus - 1) / modulus \
        * s * (s / divisor) ** (num_players - 1)
