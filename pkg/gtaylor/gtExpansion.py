"""
Generalized Taylor reconstruction, the classical special case and the Cauchy
formula for nonhomogeneous problems.

    y(x) = y_1(x) y(x0) + ... + y_n(x) y^(n-1)(x0) + int_{x0}^{x} K(x, s) F[y](s) ds
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .gtEnum import RemainderPath
from .gtErrors import ArgumentError, CapabilityError
from .gtIvp import (
    DEFAULT_CONFIG,
    AdjointSlice,
    FundamentalSet,
    KernelSlice,
    WronskianKernel,
    forcedTrajectory,
    fundamentalFromSlice,
)
from .gtLib import MAX_ORDER, checkFinite, spanOf
from .gtOperator import SmoothFunction, applyForward
from .gtQuad import DEFAULT_TOL, integrateAdaptive

__all__ = ["SmoothFunction", "ReconstructionReport", "reconstruct", "classicalTaylor", "cauchySolve", "directSolve"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReconstructionReport:
    """Both parts of the generalized Taylor formula at one point

    :param initialDataPart: sum_i y_i(x) y^(i-1)(x0)
    :param remainderPart: The kernel integral
    :param total: initialDataPart + remainderPart
    :param referenceValue: y(x) from the jet oracle
    :param discrepancy: |total - referenceValue|
    :param quadErrorEstimate: Error estimate of the remainder quadrature
    :param ivpTolerance: Relative tolerance of the IVP solves
    :param path: How K(x, s) was obtained
    :param usedFallback: Some coefficient derivative came from finite differences
    """

    point: float
    initialDataPart: float
    remainderPart: float
    total: float
    referenceValue: float
    discrepancy: float
    quadErrorEstimate: float = 0.0
    ivpTolerance: float = 0.0
    path: RemainderPath = RemainderPath.ADJOINT
    usedFallback: bool = False


class _Pieces:
    """Fundamental values y_i(x) and the kernel row s -> K(x, s) for one x"""

    def __init__(self, op, x0, x, path, cfg):
        self.path = path
        self.usedFallback = False
        span = spanOf(x0, x)
        if path is RemainderPath.AUTO:
            try:
                self._adjoint(op, x0, x, span, cfg)
            except CapabilityError as err:
                log.info("adjoint unavailable for %s (%s), using forward kernel slices", op.name, err)
                self._forward(op, x0, x, span, cfg)
        elif path is RemainderPath.ADJOINT:
            self._adjoint(op, x0, x, span, cfg)
        elif path is RemainderPath.FORWARD:
            self._forward(op, x0, x, span, cfg)
        elif path is RemainderPath.WRONSKIAN:
            fs = FundamentalSet(op, x0, span, cfg)
            wk = WronskianKernel(fs)
            self.fundamental = list(fs.values(x))
            self.kernel = lambda s: wk(x, s)
        else:
            raise ArgumentError("unknown remainder path {!r}".format(path))

    def _adjoint(self, op, x0, x, span, cfg):
        phi = AdjointSlice(op, x, span, cfg)
        self.fundamental = fundamentalFromSlice(phi, x0)
        self.kernel = phi.kernel
        self.path = RemainderPath.ADJOINT
        self.usedFallback = phi.usedFallback

    def _forward(self, op, x0, x, span, cfg):
        self.fundamental = list(FundamentalSet(op, x0, span, cfg).values(x))
        self.kernel = lambda s: KernelSlice(op, s, spanOf(s, x), cfg)(x)
        self.path = RemainderPath.FORWARD


def reconstruct(op, y, x0, x, cfg=None, qtol=DEFAULT_TOL, path=RemainderPath.AUTO):
    """Rebuild y(x) from its jet at x0 and F[y] on [x0, x]

    :param op: Operator
    :type op: LinearOperator
    :param y: Function with exact jets of order n on the span
    :type y: SmoothFunction
    :param x0: Base point
    :type x0: float
    :param x: Evaluation point, on either side of x0
    :type x: float
    :param cfg: IVP configuration
    :type cfg: SolveConfig
    :param qtol: Quadrature tolerance
    :type qtol: float
    :param path: Kernel source for the remainder integral
    :type path: RemainderPath

    :return: :class:`ReconstructionReport`
    """
    cfg = cfg or DEFAULT_CONFIG
    op.checkPoint("x0", x0)
    op.checkPoint("x", x)
    n = op.order
    x0, x = float(x0), float(x)
    reference = checkFinite(y.label or "y", x, y(x))
    if x == x0:
        return ReconstructionReport(x, reference, 0.0, reference, reference, 0.0, 0.0, cfg.relTol, path)

    pieces = _Pieces(op, x0, x, path, cfg)
    base = y.jet(x0, n - 1)
    initial = sum(yi * base[i] for i, yi in enumerate(pieces.fundamental))

    def integrand(s):
        return pieces.kernel(s) * applyForward(op, y.jet(s, n))

    quad = integrateAdaptive(integrand, x0, x, qtol)
    total = initial + quad.value
    log.debug("reconstruct %s at x=%r: initial=%r remainder=%r reference=%r", op.name, x, initial, quad.value, reference)
    return ReconstructionReport(
        x,
        initial,
        quad.value,
        total,
        reference,
        abs(total - reference),
        quad.errorEstimate,
        cfg.relTol,
        path=pieces.path,
        usedFallback=pieces.usedFallback,
    )


def classicalTaylor(y, x0, x, n, qtol=DEFAULT_TOL):
    """Taylor polynomial of degree n-1 plus the integral remainder

    :param y: Function with exact jets of order n
    :type y: SmoothFunction
    :param n: Number of terms (1 <= n <= 12)
    :type n: int

    :return: :class:`ReconstructionReport`
    """
    if int(n) != n or not 1 <= n <= MAX_ORDER:
        raise ArgumentError("order must be an integer in 1..{}, got {!r}".format(MAX_ORDER, n))
    x0, x = float(x0), float(x)
    base = y.jet(x0, n - 1)
    partial = sum((x - x0) ** k / math.factorial(k) * base[k] for k in range(n))
    scale = 1.0 / math.factorial(n - 1)

    def integrand(s):
        return scale * (x - s) ** (n - 1) * y.jet(s, n)[n]

    quad = integrateAdaptive(integrand, x0, x, qtol)
    reference = y(x)
    total = partial + quad.value
    return ReconstructionReport(
        x, partial, quad.value, total, reference, abs(total - reference), quad.errorEstimate, 0.0, RemainderPath.FORWARD
    )


def _asForcing(f):
    if f is None:
        return lambda s: 0.0
    return f


def cauchySolve(op, f, x0, init, targets, cfg=None, qtol=DEFAULT_TOL, path=RemainderPath.AUTO):
    """Solution of F(y) = f with initial data at x0, by the Cauchy formula

    Y(x) = sum_i y_i(x) init_i + int_{x0}^{x} K(x, s) f(s) ds

    :param f: Forcing term (None for zero)
    :type f: callable
    :param init: y(x0), y'(x0), ..., y^(n-1)(x0)
    :type init: list
    :param targets: Points inside the domain
    :type targets: array-like

    :return: numpy array of Y(targets)
    """
    cfg = cfg or DEFAULT_CONFIG
    n = op.order
    if len(init) != n:
        raise ArgumentError("order {} problem needs {} initial values, got {}".format(n, n, len(init)))
    op.checkPoint("x0", x0)
    f = _asForcing(f)
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    out = np.empty(targets.size)
    for i, x in enumerate(targets):
        op.checkPoint("target", x)
        if x == x0:
            out[i] = float(init[0])
            continue
        pieces = _Pieces(op, x0, x, path, cfg)
        homogeneous = sum(yi * v for yi, v in zip(pieces.fundamental, init))
        quad = integrateAdaptive(lambda s: pieces.kernel(s) * f(s), x0, x, qtol)
        out[i] = homogeneous + quad.value
    return out


def directSolve(op, f, x0, init, targets, cfg=None):
    """The same problem integrated directly as a forced IVP, for cross-checks

    :return: numpy array of y(targets)
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    traj = forcedTrajectory(op, f, x0, init, spanOf(x0, *targets), cfg)
    return traj.values(targets)
