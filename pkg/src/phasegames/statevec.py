"""Dense statevector simulation for small qudit registers.

States live on ``num_sites`` sites of equal local dimension ``local_dim``
(2 for qubits, M for clock models).  Amplitudes are stored as a flat
complex vector indexed so that site 0 is the most significant base-M
digit: basis label ``(d_0, ..., d_{n-1})`` maps to index
``sum_j d_j * M**(n-1-j)``.  The register size is capped at 2**22
amplitudes.

Operators are either single-site matrices (:class:`SiteOperator`) or
scalar multiples of tensor products of single-site matrices
(:class:`OperatorString`).  Measurements are projective, either in the
computational basis or of a tuple of commuting Hermitian involutions,
and return explicit branch lists with Born probabilities.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (CapacityError, ContractViolationError, ParameterError)

MAX_AMPLITUDES = 2 ** 22
NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
DEFAULT_PRUNE = 1e-12

# dimension cap for dense involution/commutation checks on operator tuples
_CHECK_DIM_CAP = 2 ** 12


def _require(cond, exc, msg):
    if not cond:
        raise exc(msg)


@dataclass(frozen=True)
class PureState:
    """Normalized pure state of a small qudit register.

    Amplitudes are copied on construction and frozen; the squared norm
    must be 1 within ``NORM_TOL``.  Use :meth:`normalized` to build a
    state from an unnormalized vector.
    """

    num_sites: int
    local_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _require(self.num_sites >= 1, ParameterError, "need at least one site")
        _require(self.local_dim >= 2, ParameterError, "local dimension must be >= 2")
        dim = self.local_dim ** self.num_sites
        if dim > MAX_AMPLITUDES:
            raise CapacityError(
                f"register of {self.num_sites} sites with local dimension "
                f"{self.local_dim} needs {dim} amplitudes (cap {MAX_AMPLITUDES})")
        amps = np.asarray(self.amplitudes, dtype=complex)
        _require(amps.shape == (dim,), ParameterError,
                 f"amplitude vector must have length {dim}, got {amps.shape}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        _require(abs(norm2 - 1.0) <= NORM_TOL, ParameterError,
                 f"state not normalized: |psi|^2 = {norm2!r}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, num_sites, local_dim, amplitudes):
        """Build a state from an unnormalized amplitude vector."""
        amps = np.asarray(amplitudes, dtype=complex)
        norm = float(np.linalg.norm(amps))
        _require(norm > 0.0, ParameterError, "cannot normalize the zero vector")
        return cls(num_sites, local_dim, amps / norm)

    @property
    def dim(self):
        return self.local_dim ** self.num_sites

    def index_of(self, labels):
        """Basis index of a digit tuple (site 0 most significant)."""
        labels = tuple(labels)
        _require(len(labels) == self.num_sites, ParameterError,
                 "label tuple length must equal num_sites")
        idx = 0
        for d in labels:
            _require(0 <= d < self.local_dim, ParameterError,
                     f"digit {d} out of range for local dimension {self.local_dim}")
            idx = idx * self.local_dim + d
        return idx

    def labels_of(self, index):
        """Digit tuple of a basis index; inverse of :meth:`index_of`."""
        _require(0 <= index < self.dim, ParameterError, "basis index out of range")
        out = []
        for j in range(self.num_sites - 1, -1, -1):
            out.append((index // self.local_dim ** j) % self.local_dim)
        return tuple(out)

    def site_digits(self, site):
        """Array over all basis indices of the digit at ``site``."""
        _require(0 <= site < self.num_sites, ParameterError, "site out of range")
        stride = self.local_dim ** (self.num_sites - 1 - site)
        return (np.arange(self.dim) // stride) % self.local_dim

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def _site_digit_array(num_sites, local_dim, site):
    stride = local_dim ** (num_sites - 1 - site)
    return (np.arange(local_dim ** num_sites) // stride) % local_dim


@dataclass(frozen=True)
class SiteOperator:
    """A single-site operator, stored as a dense local matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        _require(m.ndim == 2 and m.shape[0] == m.shape[1] and m.shape[0] >= 2,
                 ParameterError, "site operator must be a square matrix of size >= 2")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def local_dim(self):
        return self.matrix.shape[0]

    def is_unitary(self, tol=UNITARY_TOL):
        m = self.matrix
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(self.local_dim))) <= tol)

    def dagger(self):
        return SiteOperator(self.matrix.conj().T)

    def __matmul__(self, other):
        _require(self.local_dim == other.local_dim, ParameterError,
                 "local dimensions differ")
        return SiteOperator(self.matrix @ other.matrix)


def pauli_x():
    return SiteOperator(np.array([[0, 1], [1, 0]]))


def pauli_y():
    return SiteOperator(np.array([[0, -1j], [1j, 0]]))


def pauli_z():
    return SiteOperator(np.array([[1, 0], [0, -1]]))


def hadamard():
    return SiteOperator(np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def phase_power(a):
    """diag(1, i**a): the qubit phase gate raised to a half-integer power.

    a = 0 is the identity, a = 1 the S gate, a = 2 the Z gate.
    """
    return SiteOperator(np.diag([1.0, 1j ** a]))


def clock(m):
    """Diagonal clock operator C|k> = w**k |k> with w = exp(2 pi i / m)."""
    w = cmath.exp(2j * cmath.pi / m)
    return SiteOperator(np.diag([w ** k for k in range(m)]))


def clock_power(m, t):
    """C**t for real t: diag(exp(2 pi i k t / m)).  Reduces to
    :func:`phase_power` at m = 2, t = a/2."""
    return SiteOperator(np.diag([cmath.exp(2j * cmath.pi * k * t / m)
                                 for k in range(m)]))


def shift(m):
    """Cyclic shift S|k> = |k+1 mod m>."""
    mat = np.zeros((m, m), dtype=complex)
    for k in range(m):
        mat[(k + 1) % m, k] = 1.0
    return SiteOperator(mat)


def fourier(m):
    """Discrete Fourier gate W|k> = m**-1/2 sum_y w**(ky) |y>."""
    w = cmath.exp(2j * cmath.pi / m)
    mat = np.array([[w ** (k * y) for k in range(m)] for y in range(m)])
    return SiteOperator(mat / math.sqrt(m))


def projector(level, m=2):
    """Projector onto computational level ``level`` of an m-level site."""
    _require(0 <= level < m, ParameterError, "projector level out of range")
    mat = np.zeros((m, m), dtype=complex)
    mat[level, level] = 1.0
    return SiteOperator(mat)


_IDENTITY_CACHE = {}


def identity(m=2):
    if m not in _IDENTITY_CACHE:
        _IDENTITY_CACHE[m] = SiteOperator(np.eye(m))
    return _IDENTITY_CACHE[m]


@dataclass(frozen=True)
class OperatorString:
    """A scalar multiple of a tensor product of single-site operators.

    ``factors`` maps site index to :class:`SiteOperator`; sites absent
    from the map carry the identity.  Strings multiply by composing the
    local matrices, so products of Pauli strings track their phases
    exactly.
    """

    coefficient: complex
    factors: Mapping[int, SiteOperator]

    def __post_init__(self):
        fdict = dict(self.factors)
        dims = {op.local_dim for op in fdict.values()}
        _require(len(dims) <= 1, ParameterError,
                 "all factors must share one local dimension")
        for site in fdict:
            _require(site >= 0, ParameterError, "negative site index")
        object.__setattr__(self, "factors", fdict)
        object.__setattr__(self, "coefficient", complex(self.coefficient))

    @property
    def support(self):
        return tuple(sorted(self.factors))

    def dagger(self):
        return OperatorString(self.coefficient.conjugate(),
                              {s: op.dagger() for s, op in self.factors.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return OperatorString(self.coefficient * other, self.factors)
        merged = dict(self.factors)
        for site, op in other.factors.items():
            merged[site] = merged[site] @ op if site in merged else op
        return OperatorString(self.coefficient * other.coefficient, merged)

    __rmul__ = __mul__

    def apply(self, state: PureState) -> np.ndarray:
        """Return the (generally unnormalized) vector coeff * O |psi>."""
        return self.apply_to_array(state.amplitudes, state.num_sites,
                                   state.local_dim)

    def apply_to_array(self, amps, num_sites, local_dim):
        for site in self.factors:
            _require(site < num_sites, ParameterError,
                     f"factor site {site} outside register of {num_sites}")
        out = np.asarray(amps, dtype=complex).reshape([local_dim] * num_sites)
        for site, op in self.factors.items():
            _require(op.local_dim == local_dim, ParameterError,
                     "factor local dimension does not match the state")
            out = np.moveaxis(np.tensordot(op.matrix, out, axes=([1], [site])),
                              0, site)
        return self.coefficient * out.reshape(-1)

    def to_dense(self, num_sites, local_dim):
        """Dense matrix on the full register.  Capped; intended for
        oracle-style checks on small registers."""
        dim = local_dim ** num_sites
        if dim > _CHECK_DIM_CAP:
            raise CapacityError(
                f"dense form of a string on {num_sites} sites needs a "
                f"{dim}x{dim} matrix (cap {_CHECK_DIM_CAP})")
        mat = np.array([[self.coefficient]], dtype=complex)
        eye = np.eye(local_dim)
        for site in range(num_sites):
            local = self.factors[site].matrix if site in self.factors else eye
            mat = np.kron(mat, local)
        return mat


def pauli_string(factors: Mapping[int, str], coefficient=1.0):
    """Build an :class:`OperatorString` from letters ``X``, ``Y``, ``Z``."""
    table = {"X": pauli_x(), "Y": pauli_y(), "Z": pauli_z()}
    ops = {}
    for site, letter in factors.items():
        _require(letter in table, ParameterError, f"unknown Pauli letter {letter!r}")
        ops[site] = table[letter]
    return OperatorString(coefficient, ops)


def x_string(sites: Iterable[int], coefficient=1.0):
    return pauli_string({s: "X" for s in sites}, coefficient)


def z_string(sites: Iterable[int], coefficient=1.0):
    return pauli_string({s: "Z" for s in sites}, coefficient)


def make_named_state(kind, num_sites, local_dim=2, label=None):
    """Construct one of the named reference states.

    Kinds
    -----
    ``ghz-plus``, ``ghz-minus``
        (|0...0> +- |1...1>)/sqrt(2) on qubits.
    ``ghz-qudit``
        m**-1/2 sum_k |k...k> for any local dimension.
    ``x-polarized``
        Product of |+> on every qubit.
    ``cluster``
        Ring cluster state: |+>**n with a CZ on every ring edge.
        Requires an even number of sites >= 6 (two qubits per player).
    ``computational-basis``
        Basis state selected by ``label`` (digit sequence).
    """
    _require(num_sites >= 1, ParameterError, "need at least one site")
    dim = local_dim ** num_sites
    if dim > MAX_AMPLITUDES:
        raise CapacityError(f"state of dimension {dim} exceeds cap {MAX_AMPLITUDES}")

    if kind in ("ghz-plus", "ghz-minus"):
        _require(local_dim == 2, ParameterError, f"{kind} is defined on qubits")
        amps = np.zeros(dim, dtype=complex)
        sign = 1.0 if kind == "ghz-plus" else -1.0
        amps[0] = 1 / math.sqrt(2)
        amps[dim - 1] = sign / math.sqrt(2)
        return PureState(num_sites, 2, amps)

    if kind == "ghz-qudit":
        amps = np.zeros(dim, dtype=complex)
        step = (dim - 1) // (local_dim - 1)  # |k...k| = k * (1 + m + m^2 + ...)
        for k in range(local_dim):
            amps[k * step] = 1 / math.sqrt(local_dim)
        return PureState(num_sites, local_dim, amps)

    if kind == "x-polarized":
        _require(local_dim == 2, ParameterError, "x-polarized is defined on qubits")
        amps = np.full(dim, 2.0 ** (-num_sites / 2), dtype=complex)
        return PureState(num_sites, 2, amps)

    if kind == "cluster":
        _require(local_dim == 2, ParameterError, "cluster is defined on qubits")
        _require(num_sites % 2 == 0 and num_sites >= 6, ParameterError,
                 "cluster ring needs an even number of sites >= 6")
        amps = np.full(dim, 2.0 ** (-num_sites / 2), dtype=complex)
        for u in range(num_sites):
            v = (u + 1) % num_sites
            both = (_site_digit_array(num_sites, 2, u)
                    & _site_digit_array(num_sites, 2, v)) == 1
            amps = amps * np.where(both, -1.0, 1.0)
        return PureState(num_sites, 2, amps)

    if kind == "computational-basis":
        _require(label is not None, ParameterError,
                 "computational-basis needs a digit label")
        if isinstance(label, str):
            label = tuple(int(ch) for ch in label)
        amps = np.zeros(dim, dtype=complex)
        amps[_index_of(label, num_sites, local_dim)] = 1.0
        return PureState(num_sites, local_dim, amps)

    raise ParameterError(f"unknown named state {kind!r}")


def _index_of(labels, num_sites, local_dim):
    labels = tuple(labels)
    _require(len(labels) == num_sites, ParameterError,
             "label tuple length must equal num_sites")
    idx = 0
    for d in labels:
        _require(0 <= d < local_dim, ParameterError, "digit out of range")
        idx = idx * local_dim + d
    return idx


def apply_unitary(state: PureState, site, op: SiteOperator) -> PureState:
    """Apply a single-site unitary; preserves the norm exactly."""
    _require(0 <= site < state.num_sites, ParameterError, "site out of range")
    _require(op.local_dim == state.local_dim, ParameterError,
             "operator local dimension does not match the state")
    if not op.is_unitary():
        raise ContractViolationError("apply_unitary requires a unitary matrix")
    out = OperatorString(1.0, {site: op}).apply(state)
    # renormalize away accumulated rounding, which stays ~1e-16 per gate
    return PureState.normalized(state.num_sites, state.local_dim, out)


def expectation(state: PureState, string: OperatorString) -> complex:
    """<psi| coeff * O |psi> for a product-operator string."""
    return complex(np.vdot(state.amplitudes, string.apply(state)))


def inner_product(bra: PureState, ket: PureState) -> complex:
    """<bra|ket>, conjugating the first argument."""
    _require(bra.num_sites == ket.num_sites and bra.local_dim == ket.local_dim,
             ParameterError, "states live on different registers")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


@dataclass(frozen=True)
class Branch:
    """One projective-measurement outcome: labels, probability, post state."""

    labels: tuple
    probability: float
    state: PureState


@dataclass(frozen=True)
class MeasurementBranches:
    """All surviving branches of a projective measurement.

    Branches with probability below the prune threshold are dropped but
    accounted for: ``pruned_count`` and ``pruned_probability`` report
    what was removed, so retained + pruned probability sums to 1.
    """

    branches: tuple
    pruned_count: int
    pruned_probability: float

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def total_probability(self):
        return float(sum(b.probability for b in self.branches))


def enumerate_measurement_branches(state: PureState, sites=None, basis="computational",
                                   prune=DEFAULT_PRUNE) -> MeasurementBranches:
    """Enumerate projective measurement branches with Born probabilities.

    ``basis="computational"`` measures the listed sites (default all) in
    the computational basis; outcome labels are digit tuples.  Passing a
    sequence of :class:`OperatorString` measures that tuple of commuting
    Hermitian involutions jointly; outcome labels are bits ``y`` with
    measured value ``(-1)**y``.  Branches below ``prune`` probability are
    dropped and reported in the result.
    """
    if basis == "computational":
        if sites is None:
            sites = tuple(range(state.num_sites))
        sites = tuple(sites)
        for s in sites:
            _require(0 <= s < state.num_sites, ParameterError, "site out of range")
        _require(len(set(sites)) == len(sites), ParameterError, "repeated site")
        return _computational_branches(state, sites, prune)
    ops = tuple(basis)
    _require(len(ops) >= 1, ParameterError, "empty operator tuple")
    _check_involution_tuple(state, ops)
    return _involution_branches(state, ops, prune)


def _computational_branches(state, sites, prune):
    m = state.local_dim
    digit_arrays = [state.site_digits(s) for s in sites]
    n_out = m ** len(sites)
    probs = state.probabilities()
    branches = []
    pruned_count = 0
    pruned_prob = 0.0
    for code in range(n_out):
        labels = tuple((code // m ** (len(sites) - 1 - j)) % m
                       for j in range(len(sites)))
        mask = np.ones(state.dim, dtype=bool)
        for arr, d in zip(digit_arrays, labels):
            mask &= arr == d
        p = float(probs[mask].sum())
        if p <= prune:
            pruned_count += 1
            pruned_prob += p
            continue
        post = np.where(mask, state.amplitudes, 0.0)
        branches.append(Branch(labels, p, PureState.normalized(
            state.num_sites, m, post)))
    return MeasurementBranches(tuple(branches), pruned_count, pruned_prob)


def _check_involution_tuple(state, ops):
    support = sorted({s for op in ops for s in op.support})
    dim = state.local_dim ** len(support)
    if dim > _CHECK_DIM_CAP:
        raise CapacityError(
            "operator tuple support too large for the commutation check")
    relabel = {s: i for i, s in enumerate(support)}
    dense = []
    for op in ops:
        small = OperatorString(op.coefficient,
                               {relabel[s]: f for s, f in op.factors.items()})
        dense.append(small.to_dense(len(support), state.local_dim))
    eye = np.eye(dim)
    for i, a in enumerate(dense):
        if np.max(np.abs(a - a.conj().T)) > 1e-10:
            raise ContractViolationError(
                f"measurement operator {i} is not Hermitian")
        if np.max(np.abs(a @ a - eye)) > 1e-10:
            raise ContractViolationError(
                f"measurement operator {i} is not an involution")
        for j in range(i):
            if np.max(np.abs(a @ dense[j] - dense[j] @ a)) > 1e-10:
                raise ContractViolationError(
                    f"measurement operators {j} and {i} do not commute")


def _involution_branches(state, ops, prune):
    frames = [(tuple(), state.amplitudes, 1.0)]
    pruned_count = 0
    pruned_prob = 0.0
    n, m = state.num_sites, state.local_dim
    for op in ops:
        new_frames = []
        for labels, amps, weight in frames:
            acted = op.apply_to_array(amps, n, m)
            for bit in (0, 1):
                sign = 1.0 if bit == 0 else -1.0
                proj = 0.5 * (amps + sign * acted)
                p = float(np.sum(np.abs(proj) ** 2))
                if p <= prune:
                    pruned_count += 1
                    pruned_prob += p
                    continue
                new_frames.append((labels + (bit,), proj, p))
        frames = new_frames
    branches = [Branch(labels, p, PureState.normalized(n, m, amps))
                for labels, amps, p in frames]
    return MeasurementBranches(tuple(branches), pruned_count, pruned_prob)
