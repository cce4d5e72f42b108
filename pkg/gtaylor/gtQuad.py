"""
Scalar quadrature for remainder and kernel integrals
"""

import logging
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .gtErrors import AccuracyError, ArgumentError
from .gtLib import checkFinite

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
PANEL_BUDGET = 10**4


@dataclass(frozen=True)
class QuadResult:
    """Value of a quadrature with its accumulated error estimate

    :param value: Approximation of the signed integral
    :param errorEstimate: Accumulated panel estimate (>= 0)
    :param evaluations: Number of integrand evaluations (> 0)
    """

    value: float
    errorEstimate: float
    evaluations: int


def integrateAdaptive(f, a, b, tol=DEFAULT_TOL, panelBudget=PANEL_BUDGET):
    """Globally adaptive quadrature of f over [a, b] with signed orientation

    Panels are bisected by QUADPACK's nested 10/21-point Gauss-Kronrod pair
    until the global estimate is below tol. ``a > b`` is allowed and returns
    exactly the negated value of the forward integral.

    :param f: Scalar integrand
    :type f: callable
    :param a: Lower limit
    :type a: float
    :param b: Upper limit
    :type b: float
    :param tol: Absolute tolerance on the global estimate
    :type tol: float
    :param panelBudget: Maximum number of panels
    :type panelBudget: int

    :return: :class:`QuadResult`
    """
    if not tol > 0:
        raise ArgumentError("quadrature tolerance must be positive, got {!r}".format(tol))
    a, b = float(a), float(b)
    if a == b:
        checkFinite("integrand", a, f(a))
        return QuadResult(0.0, 0.0, 1)
    if a > b:
        res = integrateAdaptive(f, b, a, tol, panelBudget)
        return QuadResult(-res.value, res.errorEstimate, res.evaluations)

    def integrand(s):
        return checkFinite("integrand", s, f(s))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(integrand, a, b, epsabs=tol, epsrel=0.0, limit=panelBudget, full_output=1)
    value, estimate, info = out[0], out[1], out[2]
    evaluations = int(info["neval"])
    log.debug("quad [%g, %g]: value=%r estimate=%.3g evaluations=%d", a, b, value, estimate, evaluations)
    if len(out) > 3 and estimate > tol:
        raise AccuracyError("quadrature on [{}, {}] did not reach tol={}: {}".format(a, b, tol, out[3]), value, estimate)
    return QuadResult(float(value), float(abs(estimate)), evaluations)


@lru_cache(maxsize=None)
def gaussLegendre(order):
    """Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1]"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrateFixed(f, a, b, order=24):
    """Vectorized Gauss-Legendre quadrature of f over [a, b]

    a and b may be arrays of equal shape; f receives an array of shape
    ``a.shape + (order,)`` and must return values of that shape.

    :return: numpy array of integrals (shape of a)
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    nodes, weights = gaussLegendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    s = mid[..., None] + half[..., None] * nodes
    return half * np.sum(weights * f(s), axis=-1)
