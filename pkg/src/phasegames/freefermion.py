"""Exact and asymptotic win probabilities for the Ising-ring parity game.

The transverse-field Ising ring maps to free fermions, so the overlap
between its symmetric ground state and the two-term cat it becomes at
vanishing transverse field is a finite product over positive momenta.
The parity-game win probability of the ground state is one half plus
half that overlap, which this module evaluates together with the finite
and asymptotic break-even fields against the best classical strategy,
and a collection of closed-form approximations.

Quantities carrying a numerical tolerance are returned as
:class:`FloatWithError`, a NamedTuple of value and absolute error bound
that still behaves like a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np
import scipy.integrate
import scipy.optimize

from .errors import BracketError, ConvergenceError, ParameterError
from .models import mean_field_magnetization

EXACT_ERROR = 1e-13
FINITE_THRESHOLD_TOL = 1e-8
ASYMPTOTIC_THRESHOLD_TOL = 1e-6


class FloatWithError(NamedTuple):
    """A float plus an absolute error bound; coerces like a float."""

    value: float
    abs_error: float

    def __float__(self):
        return float(self.value)


def _check_field(g):
    if not g > 0:
        raise ParameterError(
            f"transverse field must be positive, got {g}; the g -> 0 limit "
            "is the exact cat state with win probability 1")


def momenta(n):
    """Positive momenta of the even-parity fermion sector: (2m+1) pi / n."""
    if n < 2:
        raise ParameterError("need at least 2 sites")
    return np.array([(2 * m + 1) * math.pi / n for m in range(n // 2)])


def dispersion(g, k):
    """Single-particle energy sqrt(1 + g^2 - 2 g cos k)."""
    _check_field(g)
    k = np.asarray(k, dtype=float)
    return np.sqrt(1.0 + g * g - 2.0 * g * np.cos(k))


def bogoliubov_angle(g, k):
    """Rotation angle with sin = sin k / eps and cos = (g - cos k) / eps."""
    _check_field(g)
    k = np.asarray(k, dtype=float)
    return np.arctan2(np.sin(k), g - np.cos(k))


def ground_overlap(n, g):
    """Squared overlap of the ground state at field g with the zero-field
    symmetric cat, as a product over positive momenta.

    Each momentum contributes cos^2 of half the Bogoliubov angle
    difference, which simplifies to (1 + (1 - g cos k)/eps)/2.  The
    product is exact at finite n for the flip-even ground state.
    """
    _check_field(g)
    k = momenta(n)
    eps = dispersion(g, k)
    factors = 0.5 * (1.0 + (1.0 - g * np.cos(k)) / eps)
    return float(np.prod(factors))


def win_probability(n, g):
    """Parity-game value of the size-n ground state at field g."""
    return 0.5 * (1.0 + ground_overlap(n, g))


def classical_parity_value(n):
    """Best classical win probability for the n-player parity game."""
    if n < 2:
        raise ParameterError("need at least 2 players")
    return Fraction(1, 2) + Fraction(1, 2 ** ((n + 1) // 2))


def threshold_finite(n, lo=1.0, hi=2.5):
    """Field where the size-n ground state stops beating classical play.

    Solves win_probability(n, g) = 1/2 + 2^(-ceil(n/2)) by bisection
    to 1e-8.  The comparison runs in overlap space (ground_overlap
    against twice the classical edge) so large n does not lose the
    tiny advantages to rounding against 1/2.  Raises BracketError when
    [lo, hi] does not bracket a sign change.
    """
    target = 2.0 ** (1 - (n + 1) // 2)

    def gap(g):
        return ground_overlap(n, g) - target

    flo, fhi = gap(lo), gap(hi)
    if flo == 0.0:
        return FloatWithError(lo, FINITE_THRESHOLD_TOL)
    if fhi == 0.0:
        return FloatWithError(hi, FINITE_THRESHOLD_TOL)
    if flo * fhi > 0:
        raise BracketError(
            f"no sign change of the advantage on [{lo}, {hi}] for n={n}")
    root = scipy.optimize.bisect(gap, lo, hi, xtol=FINITE_THRESHOLD_TOL)
    return FloatWithError(float(root), FINITE_THRESHOLD_TOL)


def _gl_nodes(num):
    x, w = np.polynomial.legendre.leggauss(num)
    # map [-1, 1] to [0, pi]
    return 0.5 * math.pi * (x + 1.0), 0.5 * math.pi * w


def _asymptotic_integrand(g, k):
    eps = np.sqrt(1.0 + g * g - 2.0 * g * np.cos(k))
    val = np.log1p((1.0 - g * np.cos(k)) / eps)
    if g > 1.0:
        # remove the integrable log singularity at k = 0; the subtracted
        # term integrates to zero over [0, pi]
        val = val - 2.0 * np.log(2.0 * np.sin(0.5 * k))
    return val


def _asymptotic_integral(g):
    k1, w1 = _gl_nodes(128)
    k2, w2 = _gl_nodes(256)
    i1 = float(w1 @ _asymptotic_integrand(g, k1))
    i2 = float(w2 @ _asymptotic_integrand(g, k2))
    if abs(i1 - i2) <= 1e-9:
        return i2
    val, err = scipy.integrate.quad(lambda k: _asymptotic_integrand(g, k),
                                    0.0, math.pi, limit=200)
    if err > 1e-9:
        raise ConvergenceError(
            f"momentum integral did not converge at g={g} (err {err:.2e})")
    return val


def threshold_asymptotic():
    """Large-n limit of the break-even field.

    Per site, the log of the overlap product tends to a momentum
    integral, and break-even against the classical value makes that
    integral vanish.  The root is bisected to 1e-6 on [1.2, 1.9].
    """
    lo, hi = 1.2, 1.9
    flo, fhi = _asymptotic_integral(lo), _asymptotic_integral(hi)
    if flo * fhi > 0:
        raise BracketError("asymptotic advantage integral does not change "
                           "sign on [1.2, 1.9]")
    root = scipy.optimize.bisect(_asymptotic_integral, lo, hi,
                                 xtol=ASYMPTOTIC_THRESHOLD_TOL)
    return FloatWithError(float(root), ASYMPTOTIC_THRESHOLD_TOL)


def magnetization_asymptotic(g):
    """Thermodynamic-limit order parameter (1 - g^2)^(1/8), zero past g=1."""
    _check_field(g)
    return (1.0 - g * g) ** 0.125 if g < 1.0 else 0.0


def zz_correlation_asymptotic(g):
    """Long-distance ZZ plateau (1 - g^2)^(1/4): the order parameter squared."""
    _check_field(g)
    return (1.0 - g * g) ** 0.25 if g < 1.0 else 0.0


def marked_threshold_magnetization(alpha):
    """Large-subset break-even magnetization for bit-weight alpha.

    m* = (sqrt(alpha^2 + (1-alpha)^2) - (1-alpha)) / alpha, strictly
    inside (0, 1) for alpha in (0, 1).  Uniform weights give
    sqrt(2) - 1.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie strictly between 0 and 1")
    beta = 1.0 - alpha
    return (math.hypot(alpha, beta) - beta) / alpha


def marked_threshold_field(alpha):
    """Large-subset break-even field: invert m = (1 - g^2)^(1/8) at m*."""
    m = marked_threshold_magnetization(alpha)
    return math.sqrt(1.0 - m ** 8)


def uniform_marked_threshold_field():
    """Break-even field for uniform bit weights: sqrt(408 sqrt(2) - 576)."""
    return math.sqrt(408.0 * math.sqrt(2.0) - 576.0)


def three_bit_threshold_field():
    """Exact break-even field of the 3-player marked game on a large ring.

    The game value (5 + 3 (1 - g^2)^(1/4)) / 8 meets the classical 3/4
    at g = sqrt(80/81).
    """
    return math.sqrt(80.0 / 81.0)


@dataclass(frozen=True)
class ClosedForms:
    """Closed-form approximations for the tilted Ising parity game at
    one parameter point.  Cat-state entries are None when h != 0."""

    pqu_meanfield_broken: FloatWithError
    pqu_meanfield_cat: Optional[FloatWithError]
    pqu_perturbative: FloatWithError
    g_star_meanfield: FloatWithError
    m_star_meanfield: FloatWithError
    g_star_perturbative: FloatWithError
    m_asymptotic: FloatWithError
    zz_asymptotic: FloatWithError


def _exact(value):
    return FloatWithError(float(value), EXACT_ERROR * max(1.0, abs(value)))


def closed_forms(n, g, h=0.0):
    """Evaluate every closed-form estimate at (n, g, h).

    The broken mean-field value is 1/2 + sin(theta)^n / 2^n at the
    self-consistent tilt angle.  The even-cat value keeps both
    mean-field wells coherently (h = 0 only).  The perturbative value
    expands around infinite field.  The starred entries are the
    break-even points those approximations predict, and the asymptotic
    entries are thermodynamic-limit order parameters.
    """
    if n < 2:
        raise ParameterError("need at least 2 sites")
    _check_field(g)
    if h < 0:
        raise ParameterError("h must be nonnegative")
    m = mean_field_magnetization(g, h)
    sin_theta = g / math.hypot(m + h, g)
    broken = 0.5 + sin_theta ** n / 2 ** n
    cat = None
    if h == 0.0:
        num = ((1.0 + m) / 2.0) ** n + ((1.0 - m) / 2.0) ** n \
            + 2.0 * (g / 2.0) ** n
        cat = _exact(0.5 + num / (2.0 * (1.0 + g ** n)))
    pert = 0.5 + 2.0 ** (-n) * (1.0 + n / (2.0 * g))
    return ClosedForms(
        pqu_meanfield_broken=_exact(broken),
        pqu_meanfield_cat=cat,
        pqu_perturbative=_exact(pert),
        g_star_meanfield=_exact(math.sqrt(2.0 * (math.sqrt(2.0) - 1.0))),
        m_star_meanfield=_exact(math.sqrt(2.0) - 1.0),
        g_star_perturbative=_exact(1.0 / math.log(2.0)),
        m_asymptotic=_exact(magnetization_asymptotic(g)),
        zz_asymptotic=_exact(zz_correlation_asymptotic(g)),
    )
