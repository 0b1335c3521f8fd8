"""Quantum strategies for the phase games and their analytic values.

Four protocol families, one per game family:

* parity: each challenged player applies the half-power phase gate for
  their bit, everyone applies a Hadamard, and all players announce
  their measured bit.
* modulo: each player applies a fractional clock power encoding their
  digit, then the discrete Fourier gate, and announces the measured
  clock digit.
* cluster: each player holds two qubits of a ring cluster state and
  measures them in bases set by their bit, announcing a derived bit
  triple.
* toric: teams with input 1 apply the diagonal square root of their
  column's loop operator (the projector decomposition, applied as one
  diagonal operator), the readout row is Hadamard-rotated, and the row
  bits are announced.

Every family has a brute-force oracle (exact Born-rule branch
enumeration averaged over the game's input distribution) plus analytic
formulas whose agreement with the oracle is part of the contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import lucas_number, lucas_polynomial, matching_sum
from .errors import (ContractViolationError, IncompatibleProtocolError,
                     ParameterError)
from .games import (MarkedParityGame, ModuloGame, ParityGame, PolygonGame,
                    ToricGame)
from .models import ToricSpec, cluster_stabilizer
from .statevec import (OperatorString, PureState, SiteOperator, apply_unitary,
                       enumerate_measurement_branches, expectation, fourier,
                       hadamard, phase_power, clock_power, x_string)

ORACLE_ERROR_BOUND = 1e-12
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class ProtocolReport:
    """Win probability of a state under one protocol, with provenance.

    ``method`` is "analytic" or "branch-enumeration"; ``per_input``
    pairs each admissible input with its conditional win probability in
    lexicographic input order.
    """

    game: str
    state_label: str
    value: float
    method: str
    per_input: tuple
    error_bound: float

    def __post_init__(self):
        if not -1e-9 <= self.value <= 1.0 + 1e-9:
            raise ContractViolationError(
                f"win probability {self.value} outside [0, 1]")

    def to_csv_row(self):
        """Flat record: game, state, method, value, error bound."""
        return (self.game, self.state_label, self.method,
                format(self.value, ".12g"), format(self.error_bound, ".3g"))

    def to_text(self):
        lines = [f"game: {self.game}",
                 f"state: {self.state_label}",
                 f"method: {self.method}",
                 f"value: {self.value:.12g} +/- {self.error_bound:.3g}"]
        if self.per_input:
            lines.append("per-input:")
        for inputs, prob in self.per_input:
            lines.append(f"  {''.join(str(v) for v in inputs)}: {prob:.12g}")
        return "\n".join(lines)


def protocol_for_game(game):
    """The protocol family that plays a given game; the matrix is
    explicit and mismatches elsewhere raise, never coerce."""
    if isinstance(game, (ParityGame, MarkedParityGame)):
        return "parity"
    if isinstance(game, ModuloGame):
        return "modulo"
    if isinstance(game, PolygonGame):
        return "cluster"
    if isinstance(game, ToricGame):
        return "toric"
    raise ParameterError(f"unknown game {type(game).__name__}")


def _require_protocol(game, protocol):
    expected = protocol_for_game(game)
    if protocol != expected:
        raise IncompatibleProtocolError(
            f"game {type(game).__name__} is played by the {expected!r} "
            f"protocol, not {protocol!r}")


def _require_qubits(state):
    if state.local_dim != 2:
        raise ParameterError("this protocol needs a qubit register")


# ---------------------------------------------------------------- parity

def run_parity_protocol(state: PureState, inputs):
    """Gate sequence of the parity strategy for one input, then branches.

    Site j gets diag(1, i**a_j) followed by a Hadamard; the returned
    branches are full computational measurements whose labels are the
    players' announced bits.
    """
    _require_qubits(state)
    inputs = tuple(inputs)
    if len(inputs) != state.num_sites:
        raise ParameterError("one input per site required")
    h = hadamard()
    for j, a in enumerate(inputs):
        state = apply_unitary(state, j, h @ phase_power(int(a)))
    return enumerate_measurement_branches(state, prune=0.0)


def parity_input_observable(inputs):
    """The +/-1 observable whose mean gives the per-input win edge.

    Conjugating the all-site flip through the phase gates and folding in
    the target parity gives (-1)^(sum/2) times a product of X (bit 0)
    and -Y (bit 1) factors; the conditional win probability is
    (1 + expectation) / 2 for every state.
    """
    inputs = tuple(int(a) for a in inputs)
    if sum(inputs) % 2:
        raise ParameterError("inputs violate the even-total promise")
    sign = -1.0 if (sum(inputs) // 2) % 2 else 1.0
    factors = {}
    x = SiteOperator(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
    minus_y = SiteOperator(np.array([[0.0, 1j], [-1j, 0.0]]))
    for j, a in enumerate(inputs):
        factors[j] = minus_y if a else x
    return OperatorString(sign, factors)


def parity_fidelity_value(state: PureState):
    """Exact parity-game value from the two extreme amplitudes.

    Averaging the per-input observables over the promise distribution
    kills every term except the all-zeros/all-ones coherence, leaving
    1/2 + Re(c_first conj(c_last)).
    """
    _require_qubits(state)
    c = state.amplitudes
    return float(0.5 + np.real(c[0] * np.conj(c[-1])))


def marked_stabilizer_value(state: PureState, game: MarkedParityGame):
    """Exact value of the marked parity game at uniform bit weights.

    The averaged observable is the cat-state stabilizer: all-site flip
    restricted to basis pairs whose marked bits are aligned.  Defined
    only at alpha = 1/2; other weights reweight the per-input oracle
    values instead.
    """
    _require_qubits(state)
    if state.num_sites != game.num_players:
        raise ParameterError("state size must match the player count")
    if game.alpha != Fraction(1, 2):
        raise ParameterError("stabilizer value is defined at alpha = 1/2")
    n = state.num_sites
    c = state.amplitudes
    dim = c.size
    idx = np.arange(dim)
    marked_mask = 0
    for j in game.marked:
        marked_mask |= 1 << (n - 1 - j)
    sub = idx & marked_mask
    aligned = (sub == 0) | (sub == marked_mask)
    val = np.sum(np.conj(c[aligned]) * c[dim - 1 - idx[aligned]])
    if abs(val.imag) > 1e-10:
        raise ContractViolationError(
            f"stabilizer mean has imaginary part {val.imag:.2e}")
    return float(0.5 * (1.0 + val.real))


def marked_three_site_value(state: PureState, game: MarkedParityGame):
    """Three challenged players, flip-symmetric states: the value
    collapses to (5 + sum of the three marked ZZ correlators) / 8."""
    if game.num_marked != 3:
        raise ParameterError("this reduction is for exactly 3 challenged players")
    flip = expectation(state, x_string(range(state.num_sites)))
    if abs(flip - 1.0) > 1e-8:
        raise ParameterError("state must be even under the all-site flip")
    i, j, k = game.marked
    zz = 0.0
    for pair in ((i, j), (i, k), (j, k)):
        val = expectation(state, OperatorString(
            1.0, {pair[0]: _pauli_z_op(), pair[1]: _pauli_z_op()}))
        zz += val.real
    return float((5.0 + zz) / 8.0)


def _pauli_z_op():
    return SiteOperator(np.diag([1.0, -1.0]).astype(complex))


def marked_closed_form_value(m, p, alpha=Fraction(1, 2)):
    """Order-parameter estimate of the marked game value.

    For magnetization m and P challenged players with bit weight alpha,
    the two aligned basis clusters contribute
    ((1-alpha) + alpha m)^P and ((1-alpha) - alpha m)^P against the
    promise normalization 1 + (1 - 2 alpha)^P.  Uniform weights reduce
    to 1/2 (1 + ((1+m)/2)^P + ((1-m)/2)^P).
    """
    m = float(m)
    alpha = float(alpha)
    if not 0.0 <= m <= 1.0:
        raise ParameterError("magnetization must lie in [0, 1]")
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie strictly between 0 and 1")
    if p < 3:
        raise ParameterError("need at least 3 challenged players")
    beta = 1.0 - alpha
    num = (beta + alpha * m) ** p + (beta - alpha * m) ** p
    return 0.5 * (1.0 + num / (1.0 + (beta - alpha) ** p))


# ---------------------------------------------------------------- modulo

def run_modulo_protocol(state: PureState, inputs, divisor):
    """Digit-encoding strategy for the modulo game, one input.

    Site j applies the clock power with exponent -a_j / divisor, then
    the Fourier gate; branches are clock-basis measurements of every
    site, read as the players' digits.
    """
    m = state.local_dim
    if divisor < 2:
        raise ParameterError("divisor must be at least 2")
    inputs = tuple(int(a) for a in inputs)
    if len(inputs) != state.num_sites:
        raise ParameterError("one input per site required")
    w = fourier(m)
    for j, a in enumerate(inputs):
        if not 0 <= a < divisor:
            raise ParameterError("inputs must be digits below the divisor")
        state = apply_unitary(state, j, w @ clock_power(m, -a / divisor))
    return enumerate_measurement_branches(state, prune=0.0)


def modulo_block_value(state: PureState):
    """Exact modulo-game value of a qudit register via the block sum.

    Basis strings fall into blocks along the all-ones shift direction;
    each block of length M - max(y) starting at a min-zero string y
    contributes the squared coherent sum of its amplitudes, and the
    value is the block total over M.  Independent of the divisor.
    """
    m = state.local_dim
    n = state.num_sites
    c = state.amplitudes
    digits = np.stack([state.site_digits(s) for s in range(n)], axis=1)
    mins = digits.min(axis=1)
    maxes = digits.max(axis=1)
    shift_step = (m ** n - 1) // (m - 1)  # index offset of the all-ones shift
    total = 0.0
    for start in np.nonzero(mins == 0)[0]:
        block = 0.0j
        for l in range(m - int(maxes[start])):
            block += c[start + l * shift_step]
        total += abs(block) ** 2
    return float(total / m)


# --------------------------------------------------------------- cluster

def _cluster_site_gates(bit):
    h = hadamard()
    if bit == 0:
        return h, h
    return h @ phase_power(1).dagger(), h


def run_cluster_protocol(state: PureState, game: PolygonGame, inputs):
    """Two-qubit measurement strategy for the polygon game, one input.

    Player i owns qubits 2i and 2i+1.  On input 0 both qubits are
    Hadamard-measured; on input 1 the left qubit first undoes the S
    phase.  Branch labels are the 2N measured bits; use
    :func:`cluster_outputs` to map them to announced triples.
    """
    _require_qubits(state)
    if state.num_sites != 2 * game.num_players:
        raise ParameterError("need two qubits per player")
    a = tuple(int(v) for v in inputs)
    game.marked_bits(a)  # validates length and support
    for i, bit in enumerate(a):
        left, right = _cluster_site_gates(bit)
        state = apply_unitary(state, 2 * i, left)
        state = apply_unitary(state, 2 * i + 1, right)
    return enumerate_measurement_branches(state, prune=0.0)


def cluster_outputs(inputs, labels):
    """Announced bit triples from the 2N measured bits.

    Input 0 players announce (left, right, left xor right); input 1
    players announce (left xor right, right, left).
    """
    inputs = tuple(int(v) for v in inputs)
    if len(labels) != 2 * len(inputs):
        raise ParameterError("need two measured bits per player")
    triples = []
    for i, bit in enumerate(inputs):
        l, r = labels[2 * i], labels[2 * i + 1]
        if bit == 0:
            triples.append((l, r, l ^ r))
        else:
            triples.append((l ^ r, r, l))
    return tuple(triples)


def polygon_edge_operator(game: PolygonGame, k):
    """Stabilizer string for edge k of the challenged cycle: the product
    of ring-cluster stabilizers on the right qubits from challenged
    player k through the player before challenged player k+1."""
    p = game.num_marked
    if not 0 <= k < p:
        raise ParameterError("edge index out of range")
    n2 = 2 * game.num_players
    players = (game.marked[k],) + game.segment_players(k)
    op = cluster_stabilizer(2 * players[0] + 1, n2)
    for j in players[1:]:
        op = op * cluster_stabilizer(2 * j + 1, n2)
    return op


def polygon_flip_even(game: PolygonGame):
    """Product of X over every player's left qubit."""
    return x_string(tuple(2 * i for i in range(game.num_players)))


def polygon_flip_odd(game: PolygonGame):
    """Product of X over every player's right qubit."""
    return x_string(tuple(2 * i + 1 for i in range(game.num_players)))


def polygon_matching_operator(game: PolygonGame, matching):
    """Stabilizer tested by one matching: the edge strings of its edges
    times the left-qubit flip (the empty matching gives the flip alone)."""
    if matching.cycle_length != game.num_marked:
        raise ParameterError("matching lives on a different cycle")
    op = polygon_flip_even(game)
    for (k, _) in matching.edges:
        op = polygon_edge_operator(game, k) * op
    return op


def polygon_stabilizer_value(state: PureState, game: PolygonGame):
    """Matching-stabilizer estimate of the polygon game value.

    1 - (L_P - 1)/2^(P+1) + 2^-(P+1) sum over nonempty matchings of the
    matching-stabilizer mean.  Exact for states stabilized by both
    whole-ring flips when no two matchings share a vertex pattern (odd
    P); for even P the two perfect matchings share the all-ones input
    and the estimate counts them independently.
    """
    _require_qubits(state)
    if state.num_sites != 2 * game.num_players:
        raise ParameterError("need two qubits per player")
    p = game.num_marked
    total = 0.0
    from .combinatorics import cycle_matchings
    for m in cycle_matchings(p):
        if m.size == 0:
            continue
        val = expectation(state, polygon_matching_operator(game, m))
        if abs(val.imag) > 1e-9:
            raise ContractViolationError(
                f"matching stabilizer mean has imaginary part {val.imag:.2e}")
        total += val.real
    lp = lucas_number(p)
    return float(1.0 - (lp - 1) / 2 ** (p + 1) + total / 2 ** (p + 1))


def polygon_dichotomic_value(state: PureState, game: PolygonGame):
    """Exact polygon value by averaging per-input condition products.

    Each input's win indicator is the product over its conditions
    (right-flip parity; left-flip parity for the all-zero input; one
    stabilizer per matching of the input's pattern) of (1 + O)/2,
    expanded into a subset sum of expectations.  Valid for any state.
    """
    _require_qubits(state)
    if state.num_sites != 2 * game.num_players:
        raise ParameterError("need two qubits per player")
    total = Fraction(0)
    value = 0.0
    for inputs, weight in game.enumerate_inputs():
        conds = [polygon_flip_odd(game)]
        if all(v == 0 for v in inputs):
            conds.append(polygon_flip_even(game))
        for m in game.matchings_for_input(inputs):
            conds.append(polygon_matching_operator(game, m))
        prob = 0.0
        for mask in range(2 ** len(conds)):
            op = None
            for i, cond in enumerate(conds):
                if (mask >> i) & 1:
                    op = cond if op is None else op * cond
            term = 1.0 if op is None else expectation(state, op).real
            prob += term
        value += float(weight) * prob / 2 ** len(conds)
        total += weight
    if total != 1:
        raise ContractViolationError("input weights do not sum to 1")
    return float(value)


def polygon_estimate_value(s, p):
    """Polygon value if every matching stabilizer averaged to S.

    1 - (L_P - S^(P/2) L_P(S^(-1/2))) / 2^(P+1); the S -> 0 limit is
    1 - (L_P - 1)/2^(P+1).  Equals the direct matching sum
    sum_r count(P, r) S^r by the Lucas-polynomial identity.
    """
    if not 0.0 <= s <= 1.0:
        raise ParameterError("stabilizer mean must lie in [0, 1]")
    if p < 3:
        raise ParameterError("need a cycle of at least 3")
    lp = lucas_number(p)
    if s == 0.0:
        weighted = 1.0
    else:
        weighted = s ** (p / 2.0) * lucas_polynomial(p, 1.0 / math.sqrt(s))
    return float(1.0 - (lp - weighted) / 2 ** (p + 1))


def polygon_estimate_criterion(s):
    """Growth-rate comparison deciding large-P advantage.

    Returns ((1 + sqrt(1 + 4S))/2, golden ratio); the estimate beats
    the classical value for large P only when the first entry reaches
    the second, which happens exactly at S = 1.
    """
    if not 0.0 <= s <= 1.0:
        raise ParameterError("stabilizer mean must lie in [0, 1]")
    return (1.0 + math.sqrt(1.0 + 4.0 * s)) / 2.0, GOLDEN_RATIO


# ----------------------------------------------------------------- toric

def _loop_parity_mask(state, bonds):
    idx = np.arange(state.amplitudes.size)
    parity = np.zeros_like(idx)
    n = state.num_sites
    for b in bonds:
        parity ^= (idx >> (n - 1 - b)) & 1
    return parity


def apply_loop_root(state: PureState, bonds):
    """Diagonal square root of a Z loop: phase i on odd loop parity.

    This is the projector decomposition (even projector plus i times
    the odd projector) evaluated as one diagonal operator.
    """
    parity = _loop_parity_mask(state, bonds)
    amps = state.amplitudes * np.where(parity, 1j, 1.0)
    return PureState(state.num_sites, 2, amps)


def run_toric_protocol(state: PureState, game: ToricGame, inputs):
    """Loop strategy for the toric game, one input.

    Teams with bit 1 apply the diagonal square root of their column
    loop; every readout-row bond is Hadamard-rotated and measured, and
    the branch labels are the announced row bits.
    """
    _require_qubits(state)
    lat = game.lattice
    if state.num_sites != lat.num_bonds:
        raise ParameterError("state does not live on this lattice")
    a = tuple(int(v) for v in inputs)
    if len(a) != game.num_teams:
        raise ParameterError("one input per team required")
    for team, bit in zip(game.team_columns, a):
        if bit:
            state = apply_loop_root(state, lat.team_loop_bonds(team))
    read = lat.dual_loop_bonds(game.dual_row)
    h = hadamard()
    for b in read:
        state = apply_unitary(state, b, h)
    return enumerate_measurement_branches(state, sites=read, prune=0.0)


def toric_exact_value(state: PureState, game: ToricGame):
    """Exact toric-game value as a stabilizer average.

    1/2 plus 2^-T times the sum, over even input strings, of the mean
    of (product of column loops on set bits) times the readout dual
    loop, after conjugation by the applied loop roots; the conjugation
    reduces every term to that single mixed loop expectation.
    """
    from .models import dual_loop_operator, team_loop_operator
    _require_qubits(state)
    lat = game.lattice
    if state.num_sites != lat.num_bonds:
        raise ParameterError("state does not live on this lattice")
    t = game.num_teams
    total = 0.0
    for inputs, _ in game.enumerate_inputs():
        op = dual_loop_operator(lat, game.dual_row)
        for team, bit in zip(game.team_columns, inputs):
            if bit:
                op = team_loop_operator(lat, team) * op
        total += expectation(state, op).real
    return float(0.5 + total / 2 ** t)


@dataclass(frozen=True)
class ToricPerturbativeRecord:
    """Leading-order loop means and the advantage windows they imply."""

    w_estimate: float
    v_estimate: float
    w_star: float
    team_spacing_bound: float
    hx_bound: float
    hz_bound: float


def toric_perturbative_record(spec: ToricSpec) -> ToricPerturbativeRecord:
    """Second-order loop estimates and break-even windows.

    Column loops decay like exp(-2 Ly (hx/4K)^2) and the readout dual
    loop like exp(-2 Lx (hz/4K')^2); the column mean must stay above
    sqrt(2) - 1 for an advantage, giving the team-spacing bound
    4 ln2 (K'/hz)^2 and field windows shrinking as the inverse square
    root of the transverse lattice size.
    """
    lat = spec.lattice
    w_est = math.exp(-2.0 * lat.ly * (spec.hx / (4.0 * spec.k)) ** 2)
    v_est = math.exp(-2.0 * lat.lx * (spec.hz / (4.0 * spec.kprime)) ** 2)
    w_star = math.sqrt(2.0) - 1.0
    log_w_star = abs(math.log(w_star))
    if spec.hz == 0.0:
        spacing = math.inf
    else:
        spacing = 4.0 * math.log(2.0) * (spec.kprime / spec.hz) ** 2
    hx_bound = 4.0 * spec.k * math.sqrt(log_w_star / (2.0 * lat.ly))
    hz_bound = 4.0 * spec.kprime * math.sqrt(log_w_star / (2.0 * lat.lx))
    return ToricPerturbativeRecord(w_est, v_est, w_star, spacing,
                                   hx_bound, hz_bound)


# ----------------------------------------------------------------- oracle

def _oracle_parity(state, game):
    per_input = []
    value = 0.0
    for inputs, weight in game.enumerate_inputs():
        branches = run_parity_protocol(state, inputs)
        prob = sum(br.probability for br in branches
                   if game.judge(inputs, br.labels))
        per_input.append((inputs, prob))
        value += float(weight) * prob
    return value, tuple(per_input)


def _oracle_modulo(state, game):
    if state.local_dim != game.modulus:
        raise ParameterError("register local dimension must equal the modulus")
    per_input = []
    value = 0.0
    for inputs, weight in game.enumerate_inputs():
        branches = run_modulo_protocol(state, inputs, game.divisor)
        prob = sum(br.probability for br in branches
                   if game.judge(inputs, br.labels))
        per_input.append((inputs, prob))
        value += float(weight) * prob
    return value, tuple(per_input)


def _oracle_cluster(state, game):
    per_input = []
    value = 0.0
    for inputs, weight in game.enumerate_inputs():
        branches = run_cluster_protocol(state, game, inputs)
        prob = sum(br.probability for br in branches
                   if game.judge(inputs, cluster_outputs(inputs, br.labels)))
        per_input.append((inputs, prob))
        value += float(weight) * prob
    return value, tuple(per_input)


def _oracle_toric(state, game):
    per_input = []
    value = 0.0
    for inputs, weight in game.enumerate_inputs():
        branches = run_toric_protocol(state, game, inputs)
        prob = sum(br.probability for br in branches
                   if game.judge(inputs, br.labels))
        per_input.append((inputs, prob))
        value += float(weight) * prob
    return value, tuple(per_input)


def oracle_win_probability(state: PureState, game, protocol=None,
                           state_label="state") -> ProtocolReport:
    """Exact expected win probability by brute-force branch enumeration.

    Runs the protocol gate sequence for every admissible input, sums
    the Born probabilities of the winning branches, and averages with
    the game's exact input weights.  ``protocol`` may be passed to
    assert the intended pairing; mismatches raise.
    """
    expected = protocol_for_game(game)
    if protocol is not None:
        _require_protocol(game, protocol)
    if expected == "parity":
        value, per_input = _oracle_parity(state, game)
    elif expected == "modulo":
        value, per_input = _oracle_modulo(state, game)
    elif expected == "cluster":
        value, per_input = _oracle_cluster(state, game)
    else:
        value, per_input = _oracle_toric(state, game)
    value = min(max(value, 0.0), 1.0)
    return ProtocolReport(game=type(game).__name__, state_label=state_label,
                          value=value, method="branch-enumeration",
                          per_input=per_input,
                          error_bound=ORACLE_ERROR_BOUND)


def analytic_report(state: PureState, game, state_label="state") -> ProtocolReport:
    """Closed-form protocol value packaged as a ProtocolReport.

    Parity-family reports carry exact per-input probabilities from the
    input observables; the other families report the exact average and
    leave per-input resolution to the enumeration method.
    """
    kind = protocol_for_game(game)
    per_input = ()
    if kind == "parity":
        per = []
        value = 0.0
        for inputs, weight in game.enumerate_inputs():
            obs = parity_input_observable(inputs)
            prob = 0.5 * (1.0 + expectation(state, obs).real)
            per.append((inputs, prob))
            value += float(weight) * prob
        per_input = tuple(per)
    elif kind == "modulo":
        if state.local_dim != game.modulus:
            raise ParameterError(
                "register local dimension must equal the modulus")
        value = modulo_block_value(state)
    elif kind == "cluster":
        value = polygon_dichotomic_value(state, game)
    else:
        value = toric_exact_value(state, game)
    value = min(max(float(value), 0.0), 1.0)
    return ProtocolReport(game=type(game).__name__, state_label=state_label,
                          value=value, method="analytic",
                          per_input=per_input,
                          error_bound=ORACLE_ERROR_BOUND)


def enumerate_plays(state: PureState, game, inputs):
    """Referee-visible outcomes of one round: (outputs, probability) pairs.

    Outputs arrive in the exact shape the game's judge consumes, so a
    transcript sampler only has to draw from the returned distribution.
    """
    kind = protocol_for_game(game)
    if kind == "parity":
        branches = run_parity_protocol(state, inputs)
        return [(br.labels, br.probability) for br in branches]
    if kind == "modulo":
        branches = run_modulo_protocol(state, inputs, game.divisor)
        return [(br.labels, br.probability) for br in branches]
    if kind == "cluster":
        branches = run_cluster_protocol(state, game, inputs)
        return [(cluster_outputs(inputs, br.labels), br.probability)
                for br in branches]
    branches = run_toric_protocol(state, game, inputs)
    return [(br.labels, br.probability) for br in branches]
