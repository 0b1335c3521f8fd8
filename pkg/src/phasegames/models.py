"""Hamiltonians, ground states, and order parameters.

Four model families: the tilted-field Ising ring, its M-level clock
generalization, the toric code with uniform perturbing fields, and a
ring cluster chain with a transverse-field perturbation.  Hamiltonians
are stored as sums of :class:`~.statevec.OperatorString` terms and are
applied matrix-free; eigensolves route to a dense solver for dimension
up to 4096 and to an iterative Lanczos solver above that.  Residuals
are always checked.

Ground states needed by game evaluations come from
:func:`model_ground_state`, which resolves near-degenerate multiplets
by diagonalizing the model's symmetry inside the lowest cluster, and
from :func:`adiabatic_toric_state`, which continues the ideal toric cat
state into the perturbed ground space by projection.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import (CapacityError, ContractViolationError, ConvergenceError,
                     GeometryError, NoSolutionError, ParameterError)
from .statevec import (MAX_AMPLITUDES, OperatorString, PureState, SiteOperator,
                       clock, expectation, pauli_x, pauli_z, shift, x_string,
                       z_string)

DENSE_DIM_CAP = 4096
RESIDUAL_TOL = 1e-8
DEGENERACY_TOL = 1e-8
GAMMA_FLOOR = 1e-6


def _require(cond, exc, msg):
    if not cond:
        raise exc(msg)


@dataclass(frozen=True)
class ToricLattice:
    """Square-lattice torus with qubits on bonds.

    Bonds are indexed 0..2*lx*ly-1: horizontal bond (x, y), joining
    vertex (x, y) to (x+1, y), has index y*lx + x; vertical bond (x, y),
    joining (x, y) to (x, y+1), has index lx*ly + y*lx + x.  All
    coordinates are periodic.
    """

    lx: int
    ly: int

    def __post_init__(self):
        _require(self.lx >= 2 and self.ly >= 2, ParameterError,
                 "torus needs lx >= 2 and ly >= 2")

    @property
    def num_bonds(self):
        return 2 * self.lx * self.ly

    def horizontal_bond(self, x, y):
        return (y % self.ly) * self.lx + (x % self.lx)

    def vertical_bond(self, x, y):
        return self.lx * self.ly + (y % self.ly) * self.lx + (x % self.lx)

    def plaquette_bonds(self, x, y):
        """The four bonds bounding the square with lower-left vertex (x, y)."""
        return (self.horizontal_bond(x, y), self.vertical_bond(x + 1, y),
                self.horizontal_bond(x, y + 1), self.vertical_bond(x, y))

    def star_bonds(self, x, y):
        """The four bonds meeting at vertex (x, y)."""
        return (self.horizontal_bond(x, y), self.horizontal_bond(x - 1, y),
                self.vertical_bond(x, y), self.vertical_bond(x, y - 1))

    def team_loop_bonds(self, col):
        """Vertical bonds of one column: a non-contractible Z loop."""
        return tuple(self.vertical_bond(col, y) for y in range(self.ly))

    def dual_loop_bonds(self, row=0):
        """Vertical bonds of one row: a horizontal dual X loop, crossing
        every column's vertical loop in exactly one bond."""
        return tuple(self.vertical_bond(x, row) for x in range(self.lx))

    def horizontal_z_loop_bonds(self, row=0):
        """Horizontal bonds of one row: the other non-contractible Z loop."""
        return tuple(self.horizontal_bond(x, row) for x in range(self.lx))

    def vertical_dual_loop_bonds(self, col=0):
        """Horizontal bonds of one column: the vertical dual X loop."""
        return tuple(self.horizontal_bond(col, y) for y in range(self.ly))

    def bond_vertices(self, bond):
        _require(0 <= bond < self.num_bonds, ParameterError, "bond out of range")
        area = self.lx * self.ly
        if bond < area:
            x, y = bond % self.lx, bond // self.lx
            return ((x, y), ((x + 1) % self.lx, y))
        b = bond - area
        x, y = b % self.lx, b // self.lx
        return ((x, y), (x, (y + 1) % self.ly))


@dataclass(frozen=True)
class IsingSpec:
    """Tilted-field Ising ring: H = -J sum ZZ - gamma sum X - h sum Z."""

    num_sites: int
    j: float = 1.0
    gamma: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        _require(self.num_sites >= 2, ParameterError, "need at least 2 sites")
        _require(self.j > 0, ParameterError, "coupling j must be positive")
        _require(self.gamma >= 0, ParameterError, "gamma must be nonnegative")


@dataclass(frozen=True)
class ClockSpec:
    """M-level clock ring.

    H = -(j/2) sum (C+_j C_{j+1} + h.c.) - (gamma/2) sum (S_j + S+_j)
        - (h/2) sum (C_j + C+_j).
    At levels = 2 this is exactly :class:`IsingSpec` term by term.
    """

    num_sites: int
    levels: int
    j: float = 1.0
    gamma: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        _require(self.num_sites >= 2, ParameterError, "need at least 2 sites")
        _require(self.levels >= 2, ParameterError, "need at least 2 levels")
        _require(self.j > 0, ParameterError, "coupling j must be positive")
        _require(self.gamma >= 0, ParameterError, "gamma must be nonnegative")


@dataclass(frozen=True)
class ToricSpec:
    """Toric code with uniform fields:
    H = -k sum_p (prod Z) - kprime sum_s (prod X) - hx sum X - hz sum Z."""

    lattice: ToricLattice
    k: float = 1.0
    kprime: float = 1.0
    hx: float = 0.0
    hz: float = 0.0

    def __post_init__(self):
        _require(self.k > 0 and self.kprime > 0, ParameterError,
                 "stabilizer couplings must be positive")


@dataclass(frozen=True)
class ClusterChainSpec:
    """Ring cluster chain on 2 * num_players qubits.

    H = -sum_u Z_{u-1} X_u Z_{u+1} - lam * sum_u X_u.  The transverse
    field is a generic symmetric perturbation used to sweep the string
    order away from its fixed-point value of 1.
    """

    num_players: int
    lam: float = 0.0

    def __post_init__(self):
        _require(self.num_players >= 3, ParameterError, "need at least 3 players")


@dataclass(frozen=True)
class Hamiltonian:
    """Sum of operator strings with matrix-free application."""

    num_sites: int
    local_dim: int
    terms: tuple

    @property
    def dim(self):
        return self.local_dim ** self.num_sites

    def apply(self, vec):
        vec = np.asarray(vec, dtype=complex)
        out = np.zeros_like(vec)
        for term in self.terms:
            out += term.apply_to_array(vec, self.num_sites, self.local_dim)
        return out

    def to_dense(self):
        if self.dim > DENSE_DIM_CAP:
            raise CapacityError(
                f"dense Hamiltonian of dimension {self.dim} exceeds cap "
                f"{DENSE_DIM_CAP}; use the iterative path")
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        basis = np.eye(self.dim, dtype=complex)
        # columns assembled by applying to basis vectors in blocks; fine at this cap
        for start in range(0, self.dim, 512):
            stop = min(start + 512, self.dim)
            block = np.zeros((self.dim, stop - start), dtype=complex)
            for term in self.terms:
                for c in range(start, stop):
                    block[:, c - start] += term.apply_to_array(
                        basis[:, c], self.num_sites, self.local_dim)
            mat[:, start:stop] = block
        return mat

    def to_linear_operator(self):
        return scipy.sparse.linalg.LinearOperator(
            (self.dim, self.dim), matvec=self.apply, dtype=complex)

    def energy(self, state: PureState):
        val = sum(expectation(state, term) for term in self.terms)
        return float(np.real(val))


def build_hamiltonian(spec) -> Hamiltonian:
    """Assemble the operator-string sum for any of the model specs."""
    if isinstance(spec, IsingSpec):
        return _build_ising(spec)
    if isinstance(spec, ClockSpec):
        return _build_clock(spec)
    if isinstance(spec, ToricSpec):
        return _build_toric(spec)
    if isinstance(spec, ClusterChainSpec):
        return _build_cluster_chain(spec)
    raise ParameterError(f"unknown model spec {type(spec).__name__}")


def _check_dim(num_sites, local_dim):
    if local_dim ** num_sites > MAX_AMPLITUDES:
        raise CapacityError(
            f"Hilbert space {local_dim}**{num_sites} exceeds the register cap")


def _build_ising(spec: IsingSpec) -> Hamiltonian:
    n = spec.num_sites
    _check_dim(n, 2)
    terms = []
    for u in range(n):
        terms.append(z_string((u, (u + 1) % n), -spec.j))
        terms.append(x_string((u,), -spec.gamma))
        terms.append(z_string((u,), -spec.h))
    return Hamiltonian(n, 2, tuple(terms))


def _build_clock(spec: ClockSpec) -> Hamiltonian:
    n, m = spec.num_sites, spec.levels
    _check_dim(n, m)
    c, s = clock(m), shift(m)
    cd, sd = c.dagger(), s.dagger()
    terms = []
    for u in range(n):
        v = (u + 1) % n
        terms.append(OperatorString(-spec.j / 2, {u: cd, v: c}))
        terms.append(OperatorString(-spec.j / 2, {u: c, v: cd}))
        terms.append(OperatorString(-spec.gamma / 2, {u: s}))
        terms.append(OperatorString(-spec.gamma / 2, {u: sd}))
        terms.append(OperatorString(-spec.h / 2, {u: c}))
        terms.append(OperatorString(-spec.h / 2, {u: cd}))
    return Hamiltonian(n, m, tuple(terms))


def _build_toric(spec: ToricSpec) -> Hamiltonian:
    lat = spec.lattice
    _check_dim(lat.num_bonds, 2)
    terms = []
    for x in range(lat.lx):
        for y in range(lat.ly):
            terms.append(z_string(lat.plaquette_bonds(x, y), -spec.k))
            terms.append(x_string(lat.star_bonds(x, y), -spec.kprime))
    for b in range(lat.num_bonds):
        terms.append(x_string((b,), -spec.hx))
        terms.append(z_string((b,), -spec.hz))
    return Hamiltonian(lat.num_bonds, 2, tuple(terms))


def cluster_stabilizer(site, num_qubits):
    """Z X Z centered on ``site`` of a periodic qubit ring."""
    return OperatorString(1.0, {(site - 1) % num_qubits: pauli_z(),
                                site: pauli_x(),
                                (site + 1) % num_qubits: pauli_z()})


def _build_cluster_chain(spec: ClusterChainSpec) -> Hamiltonian:
    n = 2 * spec.num_players
    _check_dim(n, 2)
    terms = []
    for u in range(n):
        terms.append(-1.0 * cluster_stabilizer(u, n))
        terms.append(x_string((u,), -spec.lam))
    return Hamiltonian(n, 2, tuple(terms))


@dataclass(frozen=True)
class GroundStateResult:
    """Lowest eigenpairs of a Hamiltonian with convergence evidence."""

    energies: np.ndarray
    states: tuple
    method: str
    residuals: np.ndarray


def ground_state(ham: Hamiltonian, k=1, method="auto",
                 maxiter=None) -> GroundStateResult:
    """Lowest ``k`` eigenpairs.

    ``method`` is "dense" (explicit matrix, exact solver), "iterative"
    (matrix-free restarted Lanczos), or "auto", which routes to the
    dense solver for dimension <= 4096 and the iterative one above.
    Every returned pair is residual-checked to 1e-8.
    """
    _require(k >= 1, ParameterError, "need k >= 1")
    _require(k < ham.dim, ParameterError, "k must be below the space dimension")
    if method == "auto":
        method = "dense" if ham.dim <= DENSE_DIM_CAP else "iterative"
    if method == "dense":
        mat = ham.to_dense()
        herm = np.max(np.abs(mat - mat.conj().T))
        _require(herm < 1e-10, ContractViolationError,
                 f"Hamiltonian not Hermitian (defect {herm:.2e})")
        w, v = scipy.linalg.eigh(mat, subset_by_index=[0, k - 1])
    elif method == "iterative":
        op = ham.to_linear_operator()
        ncv = min(ham.dim - 1, max(4 * k + 10, 40))
        try:
            w, v = scipy.sparse.linalg.eigsh(op, k=k, which="SA", ncv=ncv,
                                             maxiter=maxiter)
        except scipy.sparse.linalg.ArpackNoConvergence as err:
            raise ConvergenceError(f"iterative eigensolver stalled: {err}")
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    else:
        raise ParameterError(f"unknown eigensolver method {method!r}")

    residuals = np.empty(k)
    states = []
    for i in range(k):
        vec = v[:, i] / np.linalg.norm(v[:, i])
        residuals[i] = float(np.linalg.norm(ham.apply(vec) - w[i] * vec))
        states.append(PureState(ham.num_sites, ham.local_dim, vec))
    if np.any(residuals > RESIDUAL_TOL):
        raise ConvergenceError(
            f"eigenpair residuals {residuals} exceed {RESIDUAL_TOL}")
    return GroundStateResult(np.asarray(w, dtype=float), tuple(states),
                             method, residuals)


def _symmetry_operator(spec):
    if isinstance(spec, IsingSpec):
        return x_string(range(spec.num_sites))
    if isinstance(spec, ClockSpec):
        s = shift(spec.levels)
        return OperatorString(1.0, {u: s for u in range(spec.num_sites)})
    return None


def model_ground_state(spec, method="auto") -> PureState:
    """Symmetry-resolved ground state for game evaluation.

    For Ising and clock specs with h = 0 the exact ground multiplet is
    asymptotically degenerate at small gamma; within the lowest cluster
    of eigenstates this resolves the global flip (Ising) or cyclic
    relabeling (clock) symmetry and returns the trivial-representation
    state, which is the adiabatic continuation of the unique
    large-gamma ground state.  Transverse fields below 1e-6 are
    rejected: the resolution is ill-conditioned against the exactly
    degenerate point.
    """
    if isinstance(spec, (IsingSpec, ClockSpec)):
        _require(spec.gamma >= GAMMA_FLOOR, ParameterError,
                 f"transverse field {spec.gamma} below the supported floor "
                 f"{GAMMA_FLOOR}; evaluate the gamma -> 0 limit analytically")
        multiplet = 2 if isinstance(spec, IsingSpec) else spec.levels
    elif isinstance(spec, ClusterChainSpec):
        multiplet = 1
    else:
        raise ParameterError(
            "toric ground states go through adiabatic_toric_state")
    ham = build_hamiltonian(spec)
    k = min(multiplet + 1, ham.dim - 1)
    result = ground_state(ham, k=k, method=method)
    cluster = [i for i in range(k)
               if result.energies[i] - result.energies[0] < DEGENERACY_TOL]
    if len(cluster) == 1:
        return result.states[0]
    sym = _symmetry_operator(spec)
    span = np.column_stack([result.states[i].amplitudes for i in cluster])
    small = span.conj().T @ np.column_stack(
        [sym.apply_to_array(span[:, i], ham.num_sites, ham.local_dim)
         for i in range(len(cluster))])
    vals, vecs = np.linalg.eig(small)
    pick = int(np.argmin(np.abs(vals - 1.0)))
    _require(abs(vals[pick] - 1.0) < 1e-6, ConvergenceError,
             "no trivial-representation state found in the ground multiplet")
    vec = span @ vecs[:, pick]
    return PureState.normalized(ham.num_sites, ham.local_dim, vec)


def plaquette_operator(lattice, x, y):
    return z_string(lattice.plaquette_bonds(x, y))


def star_operator(lattice, x, y):
    return x_string(lattice.star_bonds(x, y))


def team_loop_operator(lattice, col):
    return z_string(lattice.team_loop_bonds(col))


def dual_loop_operator(lattice, row=0):
    return x_string(lattice.dual_loop_bonds(row))


def toric_ideal_state(lattice: ToricLattice, sector=(0, 0)) -> PureState:
    """Exact toric-code ground state in a loop sector.

    Sector (0, 0) is the projection of the all-zeros product state onto
    the star-stabilized subspace; sector (0, 1) applies the horizontal
    dual loop.  Both have every plaquette and star at +1.
    """
    _require(sector in ((0, 0), (0, 1)), ParameterError,
             "supported sectors: (0, 0) and (0, 1)")
    n = lattice.num_bonds
    _check_dim(n, 2)
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    for x in range(lattice.lx):
        for y in range(lattice.ly):
            psi = psi + star_operator(lattice, x, y).apply_to_array(psi, n, 2)
    psi /= np.linalg.norm(psi)
    if sector == (0, 1):
        psi = dual_loop_operator(lattice).apply_to_array(psi, n, 2)
    return PureState(n, 2, psi)


def toric_game_state(lattice: ToricLattice) -> PureState:
    """The cat over sectors (0,0) and (0,1): the +1 eigenstate of the
    horizontal dual loop used by the toric game protocol."""
    a = toric_ideal_state(lattice, (0, 0)).amplitudes
    b = toric_ideal_state(lattice, (0, 1)).amplitudes
    return PureState.normalized(lattice.num_bonds, 2, a + b)


def adiabatic_toric_state(result: GroundStateResult, lattice: ToricLattice,
                          reference: Optional[PureState] = None) -> PureState:
    """Continue an ideal toric state into a perturbed ground space.

    ``result`` must carry the 4 lowest states of a perturbed toric
    Hamiltonian.  ``reference`` (the game cat when omitted; pass a
    sector state to keep column loops sharp) is projected onto their
    span and normalized.  A projection norm below 0.5 triggers a
    warning: the ground space has rotated too far for the continuation
    to mean much.
    """
    _require(len(result.states) == 4, ParameterError,
             "adiabatic continuation needs the 4 lowest states")
    if reference is None:
        reference = toric_game_state(lattice)
    target = reference.amplitudes
    span = np.column_stack([s.amplitudes for s in result.states])
    coeffs = span.conj().T @ target
    norm = float(np.linalg.norm(coeffs))
    if norm < 0.5:
        warnings.warn(
            f"toric ground space overlaps the ideal cat with norm {norm:.3f}; "
            "outside the perturbative regime", stacklevel=2)
    return PureState.normalized(lattice.num_bonds, 2, span @ coeffs)


def mean_field_magnetization(g, h=0.0, tol=1e-12):
    """Self-consistent magnetization m = (m+h)/sqrt((m+h)^2 + g^2).

    For h = 0 this is sqrt(1-g^2) in the ordered phase and 0 beyond it.
    For h > 0 the ordered branch is followed by fixed-point iteration.
    """
    _require(g >= 0 and h >= 0, ParameterError, "g and h must be nonnegative")
    if h == 0.0:
        return math.sqrt(1.0 - g * g) if g < 1.0 else 0.0
    m = 1.0
    for _ in range(10000):
        new = (m + h) / math.hypot(m + h, g)
        if abs(new - m) < tol:
            return new
        m = new
    raise ConvergenceError("mean-field fixed point did not settle")


def mean_field_state(kind, num_sites, g, h=0.0) -> PureState:
    """Product or cat mean-field ground state of the tilted Ising ring.

    ``broken``: product of single-site states tilted by the
    self-consistent angle.  ``even-cat``: the flip-symmetric two-term
    superposition, defined for h = 0 and g <= 1 only.
    """
    _require(num_sites >= 1, ParameterError, "need at least one site")
    if kind == "broken":
        m = mean_field_magnetization(g, h)
        theta = math.atan2(g, m + h)
        site = np.array([math.cos(theta / 2), math.sin(theta / 2)])
        amps = np.array([1.0])
        for _ in range(num_sites):
            amps = np.kron(amps, site)
        return PureState.normalized(num_sites, 2, amps)
    if kind == "even-cat":
        _require(h == 0.0, ParameterError, "even-cat is defined at h = 0")
        if g > 1.0:
            raise NoSolutionError(
                "no ferromagnetic mean-field solution for g > 1")
        m = mean_field_magnetization(g, 0.0)
        theta = math.atan2(g, m)
        up = np.array([math.cos(theta / 2), math.sin(theta / 2)])
        down = np.array([math.sin(theta / 2), math.cos(theta / 2)])
        a = np.array([1.0])
        b = np.array([1.0])
        for _ in range(num_sites):
            a = np.kron(a, up)
            b = np.kron(b, down)
        return PureState.normalized(num_sites, 2, a + b)
    raise ParameterError(f"unknown mean-field kind {kind!r}")


def _real_expectation(state, string):
    val = expectation(state, string)
    if abs(val.imag) > 1e-10:
        raise ContractViolationError(
            f"expected a real expectation, got imaginary part {val.imag:.2e}")
    return float(val.real)


def z_loop_is_closed(lattice: ToricLattice, bonds):
    """A Z string commutes with every star iff each vertex meets an even
    number of its bonds."""
    count = {}
    for b in bonds:
        for vert in lattice.bond_vertices(b):
            count[vert] = count.get(vert, 0) + 1
    return all(c % 2 == 0 for c in count.values())


def x_loop_is_closed(lattice: ToricLattice, bonds):
    """An X string commutes with every plaquette iff each plaquette
    shares an even number of bonds with it."""
    bonds = set(bonds)
    for x in range(lattice.lx):
        for y in range(lattice.ly):
            if len(bonds & set(lattice.plaquette_bonds(x, y))) % 2:
                return False
    return True


def wilson_loop_expectation(state: PureState, lattice: ToricLattice,
                            bonds, kind="z"):
    """Expectation of a product of Z (or X) over a closed bond set."""
    bonds = tuple(bonds)
    _require(len(set(bonds)) == len(bonds), ParameterError, "repeated bond")
    if kind == "z":
        _require(z_loop_is_closed(lattice, bonds), GeometryError,
                 "bond set is not a closed loop on the lattice")
        return _real_expectation(state, z_string(bonds))
    if kind == "x":
        _require(x_loop_is_closed(lattice, bonds), GeometryError,
                 "bond set is not a closed loop on the dual lattice")
        return _real_expectation(state, x_string(bonds))
    raise ParameterError("loop kind must be 'z' or 'x'")


@dataclass(frozen=True)
class OrderParameters:
    """Model-appropriate diagnostics; fields are None when undefined."""

    magnetization: Optional[tuple] = None
    zz_pairs: Optional[dict] = None
    string_order: Optional[tuple] = None
    team_loops: Optional[tuple] = None
    dual_loops: Optional[tuple] = None


def order_parameters(state: PureState, spec) -> OrderParameters:
    """Measure the order parameters named by the model family.

    Ising and clock: per-site magnetization and all two-site
    correlators (Hermitian combinations for clock).  Cluster chain: the
    stabilizer string order on every site.  Toric: each column's Z loop
    and each row's dual X loop.
    """
    if isinstance(spec, IsingSpec):
        n = spec.num_sites
        mag = tuple(_real_expectation(state, z_string((u,))) for u in range(n))
        zz = {(i, j): _real_expectation(state, z_string((i, j)))
              for i in range(n) for j in range(i + 1, n)}
        return OrderParameters(magnetization=mag, zz_pairs=zz)
    if isinstance(spec, ClockSpec):
        n, m = spec.num_sites, spec.levels
        c = clock(m)
        cd = c.dagger()
        mag = []
        for u in range(n):
            val = expectation(state, OperatorString(0.5, {u: c})) \
                + expectation(state, OperatorString(0.5, {u: cd}))
            mag.append(float(np.real(val)))
        zz = {}
        for i in range(n):
            for j in range(i + 1, n):
                val = expectation(state, OperatorString(0.5, {i: cd, j: c})) \
                    + expectation(state, OperatorString(0.5, {i: c, j: cd}))
                zz[(i, j)] = float(np.real(val))
        return OrderParameters(magnetization=tuple(mag), zz_pairs=zz)
    if isinstance(spec, ClusterChainSpec):
        n = 2 * spec.num_players
        so = tuple(_real_expectation(state, cluster_stabilizer(u, n))
                   for u in range(n))
        return OrderParameters(string_order=so)
    if isinstance(spec, ToricSpec):
        lat = spec.lattice
        team = tuple(wilson_loop_expectation(state, lat,
                                             lat.team_loop_bonds(c), "z")
                     for c in range(lat.lx))
        dual = tuple(wilson_loop_expectation(state, lat,
                                             lat.dual_loop_bonds(r), "x")
                     for r in range(lat.ly))
        return OrderParameters(team_loops=team, dual_loops=dual)
    raise ParameterError(f"unknown model spec {type(spec).__name__}")
