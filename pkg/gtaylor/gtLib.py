"""
Commonly used helpers for PyGTaylor
"""

import math
import re
import sys
from fractions import Fraction

import numpy as np

from .gtErrors import ArgumentError, EvaluationError

MAX_ORDER = 12
_SCALAR_RE = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?:(?P<num>[0-9.eE+-]+(?:/[0-9]+)?)\s*\*?\s*)?(?P<pi>pi)?\s*(?:/\s*(?P<den>[0-9.]+))?\s*$"
)


def binomial(n, k):
    """Exact binomial coefficient as an int

    :param n: Upper index (0 <= n <= MAX_ORDER)
    :type n: int
    :param k: Lower index
    :type k: int

    :return: C(n, k), zero when k is out of range
    """
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def fdStep(x, order):
    """Central-difference step for a derivative of the given order"""
    return sys.float_info.epsilon ** (1.0 / (2 + order)) * max(1.0, abs(x))


def finiteDifference(fn, x, order):
    """Central finite-difference estimate of the order-th derivative of fn at x

    :param fn: Scalar function
    :type fn: callable
    :param x: Evaluation point
    :type x: float
    :param order: Derivative order (>= 1)
    :type order: int

    :return: Second-order accurate estimate
    """
    h = fdStep(x, order)
    total = 0.0
    for k in range(order + 1):
        total += (-1) ** k * binomial(order, k) * fn(x + (order / 2.0 - k) * h)
    return total / h**order


def checkFinite(what, x, value):
    """Raise EvaluationError when value is not finite, else return it as float"""
    value = float(value)
    if not math.isfinite(value):
        raise EvaluationError(what, x, value)
    return value


def checkInDomain(what, x, domain):
    """Raise ArgumentError unless domain[0] <= x <= domain[1]"""
    lo, hi = domain
    if not (lo <= x <= hi):
        raise ArgumentError("{}={!r} outside domain [{!r}, {!r}]".format(what, x, lo, hi))


def spanOf(*points):
    """Smallest closed interval containing every point"""
    return (float(min(points)), float(max(points)))


def formatFloat(value):
    """CSV float format: shortest text that reads back to the same double (at most 17 significant digits)"""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def parseScalar(token):
    """Parse decimals, rationals p/q and multiples of pi

    Accepts forms such as ``1.5``, ``-3/4``, ``pi``, ``pi/2``, ``2*pi``,
    ``-3pi/4``.

    :param token: Text to parse
    :type token: str

    :return: Value as float
    """
    text = str(token).strip()
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        pass
    match = _SCALAR_RE.match(text)
    if match is None or match.group("pi") is None:
        raise ArgumentError("cannot parse scalar {!r}".format(token))
    value = math.pi
    if match.group("num"):
        value *= float(Fraction(match.group("num")))
    if match.group("den"):
        value /= float(match.group("den"))
    if match.group("sign") == "-":
        value = -value
    return value


def parseGrid(spec):
    """Parse a ``start:stop:count`` grid (inclusive) or a single value

    :param spec: Grid specification
    :type spec: str

    :return: numpy array of grid points
    """
    parts = str(spec).split(":")
    if len(parts) == 1:
        return np.array([parseScalar(parts[0])])
    if len(parts) != 3:
        raise ArgumentError("grid must be start:stop:count, got {!r}".format(spec))
    start, stop = parseScalar(parts[0]), parseScalar(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ArgumentError("grid count must be an integer, got {!r}".format(parts[2]))
    if count < 1:
        raise ArgumentError("grid count must be positive, got {}".format(count))
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)
