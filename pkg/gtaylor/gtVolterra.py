"""
Integro-differential equations with a memory term

    F(y) = f(x) + int_{x0}^{x} N(x, t) y(t) dt,   y^(k)(x0) = init[k]

are reduced to the Volterra equation of the second kind

    y(x) = int_{x0}^{x} N1(x, t) y(t) dt + Y(x)

with N1(x, t) = int_t^x K(x, s) N(s, t) ds and Y the Cauchy solution of the
problem without memory. The reduced equation is solved by trapezoidal product
integration; an independent solver marches the original equation directly so
the two can be compared.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .gtEnum import KernelSource
from .gtErrors import ArgumentError, EvaluationError, StepSizeError
from .gtIvp import DEFAULT_CONFIG, AdjointSlice, FundamentalSet, WronskianKernel
from .gtLib import checkFinite, spanOf
from .gtQuad import DEFAULT_TOL, integrateAdaptive, integrateFixed

log = logging.getLogger(__name__)

DIAGONAL_FLOOR = 1e-12
MIN_STEPS = 4
GL_ORDER = 24


def _requireFinite(what, points, values):
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = np.flatnonzero(bad)[0]
        raise EvaluationError(what, float(np.ravel(points)[idx]), float(np.ravel(values)[idx]))
    return values


class IntegroDifferentialProblem:
    """F(y) = f + int_{x0}^{x} N(x, t) y(t) dt with initial data at x0

    :param operator: F
    :type operator: LinearOperator
    :param memoryKernel: N(x, t), broadcasting over numpy arrays
    :type memoryKernel: callable
    :param forcing: f(x), None for zero
    :type forcing: callable
    :param x0: Initial point
    :type x0: float
    :param init: y(x0), ..., y^(n-1)(x0); zeros when omitted
    :type init: list
    """

    def __init__(self, operator, memoryKernel, forcing=None, x0=0.0, init=None, name="ide"):
        self.operator = operator
        self.memoryKernel = memoryKernel
        self.forcing = forcing
        self.x0 = float(x0)
        self.name = name
        n = operator.order
        self.init = [0.0] * n if init is None else [float(v) for v in init]
        if len(self.init) != n:
            raise ArgumentError("order {} problem needs {} initial values, got {}".format(n, n, len(self.init)))
        operator.checkPoint("x0", self.x0)
        grid = np.linspace(*operator.domain, 5)
        xs, ts = np.meshgrid(grid, grid, indexing="ij")
        _requireFinite("memory kernel", xs, self.memory(xs, ts))

    def memory(self, x, t):
        """N(x, t) broadcast to the common shape of x and t"""
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        shape = np.broadcast(x, t).shape
        return np.broadcast_to(np.asarray(self.memoryKernel(x, t), dtype=float), shape)

    def force(self, x):
        if self.forcing is None:
            return 0.0
        return checkFinite("forcing", x, self.forcing(x))


class _KernelRows:
    """s -> K(x, s) for fixed x, from a Wronskian or from memoized adjoint slices"""

    def __init__(self, op, span, x0, source, cfg):
        self.operator = op
        self.span = span
        self.source = source
        self.cfg = cfg
        self._slices = {}
        self.fundamental = None
        if source is KernelSource.WRONSKIAN:
            self.fundamental = FundamentalSet(op, x0, span, cfg)
            self._wk = WronskianKernel(self.fundamental)
        elif source is not KernelSource.ADJOINT:
            raise ArgumentError("unknown kernel source {!r}".format(source))

    def __call__(self, x, s):
        s = np.asarray(s, dtype=float)
        if self.source is KernelSource.WRONSKIAN:
            return self._wk(x, s)
        phi = self._slices.get(x)
        if phi is None:
            phi = self._slices[x] = AdjointSlice(self.operator, x, self.span, self.cfg)
        if s.ndim == 0:
            return phi.kernel(float(s))
        return phi.kernel(s.ravel()).reshape(s.shape)


class ReducedKernel:
    """N1(x, t) = int_t^x K(x, s) N(s, t) ds

    Scalar t is answered by adaptive quadrature, an array of t by one
    vectorized Gauss-Legendre rule per entry. N1(t, t) is exactly zero.
    """

    def __init__(self, problem, rows, qtol=DEFAULT_TOL, order=GL_ORDER):
        self.problem = problem
        self.rows = rows
        self.qtol = qtol
        self.order = order

    def __call__(self, x, t):
        x = float(x)
        if np.ndim(t) == 0:
            t = float(t)
            if t == x:
                return 0.0
            res = integrateAdaptive(lambda s: self.rows(x, s) * float(self.problem.memory(s, t)), t, x, self.qtol)
            return res.value
        t = np.asarray(t, dtype=float)

        def integrand(s):
            return self.rows(x, s) * self.problem.memory(s, t[..., None])

        out = integrateFixed(integrand, t, np.full(t.shape, x), self.order)
        out[t == x] = 0.0
        return _requireFinite("reduced kernel", t, out)


class FreeTerm:
    """Y(x) = sum_i y_i(x) init_i + int_{x0}^{x} K(x, s) f(s) ds"""

    def __init__(self, problem, rows, fundamental=None, qtol=DEFAULT_TOL, order=GL_ORDER):
        self.problem = problem
        self.rows = rows
        self.fundamental = fundamental
        self.qtol = qtol
        self.order = order

    def _homogeneous(self, xs):
        p = self.problem
        if not any(p.init):
            return np.zeros(xs.shape)
        if self.fundamental is None:
            self.fundamental = FundamentalSet(p.operator, p.x0, self.rows.span, self.rows.cfg)
        return self.fundamental.values(xs) @ np.asarray(p.init)

    def __call__(self, x):
        p = self.problem
        if np.ndim(x) == 0:
            x = float(x)
            value = float(self._homogeneous(np.array([x]))[0])
            if p.forcing is None or x == p.x0:
                return value
            return value + integrateAdaptive(lambda s: self.rows(x, s) * p.force(s), p.x0, x, self.qtol).value
        xs = np.asarray(x, dtype=float)
        out = self._homogeneous(xs)
        if p.forcing is not None:
            for i, xi in enumerate(xs):
                if xi == p.x0:
                    continue
                out[i] += float(
                    integrateFixed(
                        lambda s: self.rows(xi, s) * np.asarray(p.forcing(s), dtype=float), p.x0, xi, self.order
                    )
                )
        return _requireFinite("free term", xs, out)


@dataclass
class VolterraProblem:
    """y(x) = int_{x0}^{x} N1(x, t) y(t) dt + Y(x)

    :param kernel: N1(x, t); must accept an array of t
    :param freeTerm: Y(x); must accept an array of x
    :param x0: Lower limit
    :param span: Interval on which kernel and free term are defined
    """

    kernel: object
    freeTerm: object
    x0: float
    span: tuple


@dataclass
class GridSolution:
    """Values of a solution on a uniform grid starting at x0

    :param nodes: Grid points
    :param values: y at the nodes
    :param step: Grid spacing (> 0)
    :param errorEstimate: Max difference to the solution on the halved grid
    :param states: Companion states (y, ..., y^(n-1)) when the solver has them
    """

    nodes: np.ndarray
    values: np.ndarray
    step: float
    errorEstimate: float
    states: np.ndarray = field(default=None)

    def __post_init__(self):
        if len(self.nodes) != len(self.values):
            raise ArgumentError("nodes and values differ in length")
        if not self.step > 0:
            raise ArgumentError("grid step must be positive")


def reduce(problem, span=None, cfg=None, qtol=DEFAULT_TOL, source=KernelSource.WRONSKIAN):
    """Reduce an integro-differential problem to a Volterra equation of the second kind

    :param problem: Problem to reduce
    :type problem: IntegroDifferentialProblem
    :param span: Interval containing x0 and every later evaluation point; defaults to the domain
    :type span: tuple
    :param source: Kernel source for K(x, s)
    :type source: KernelSource

    :return: :class:`VolterraProblem`
    """
    op = problem.operator
    span = op.domain if span is None else spanOf(*span)
    for p in span:
        op.checkPoint("span end", p)
    span = spanOf(problem.x0, *span)
    cfg = cfg or DEFAULT_CONFIG
    rows = _KernelRows(op, span, problem.x0, source, cfg)
    log.debug("reduced %s on %s using %s kernels", problem.name, span, source.name)
    return VolterraProblem(
        ReducedKernel(problem, rows, qtol), FreeTerm(problem, rows, rows.fundamental, qtol), problem.x0, span
    )


def _checkGrid(x0, end, steps, span=None):
    if int(steps) != steps or steps < MIN_STEPS:
        raise ArgumentError("at least {} steps are required, got {!r}".format(MIN_STEPS, steps))
    if end == x0:
        raise ArgumentError("end must differ from x0")
    if span is not None and not (span[0] <= end <= span[1]):
        raise ArgumentError("end={!r} outside span {}".format(end, span))


def _march(free, matrix, h):
    m = len(free)
    values = np.empty(m)
    values[0] = free[0]
    for k in range(1, m):
        diag = 1.0 - 0.5 * h * matrix[k, k]
        if abs(diag) < DIAGONAL_FLOOR:
            raise StepSizeError("diagonal factor {:.3g} vanishes at node {}; use more steps".format(diag, k))
        history = 0.5 * matrix[k, 0] * values[0] + np.dot(matrix[k, 1:k], values[1:k])
        values[k] = (free[k] + h * history) / diag
    return values


def solveVolterra(vp, end, steps):
    """Trapezoidal product integration of a Volterra equation of the second kind

    The kernel matrix is built once on the grid with 2*steps intervals; the
    returned solution uses steps intervals and is compared against the finer
    one for the error estimate.

    :param vp: Problem
    :type vp: VolterraProblem
    :param end: Last grid point (may lie before x0)
    :type end: float
    :param steps: Number of intervals (>= 4)
    :type steps: int

    :return: :class:`GridSolution`
    """
    end = float(end)
    _checkGrid(vp.x0, end, steps, vp.span)
    fine = np.linspace(vp.x0, end, 2 * steps + 1)
    h = (end - vp.x0) / (2 * steps)
    matrix = np.zeros((fine.size, fine.size))
    for k in range(1, fine.size):
        matrix[k, : k + 1] = _requireFinite("reduced kernel", fine[: k + 1], np.asarray(vp.kernel(fine[k], fine[: k + 1])))
    free = np.asarray(vp.freeTerm(fine), dtype=float)
    _requireFinite("free term", fine, free)
    fineValues = _march(free, matrix, h)
    values = _march(free[::2], matrix[::2, ::2], 2 * h)
    estimate = float(np.max(np.abs(values - fineValues[::2])))
    log.debug("volterra: %d steps to %r, estimate %.3g", steps, end, estimate)
    return GridSolution(fine[::2], values, abs(2 * h), estimate)


def _memoryIntegral(problem, x, tHist, yHist, h):
    """int_{x0}^{x} N(x, t) y(t) dt from the stored history plus a partial panel"""
    if len(tHist) > 1:
        w = problem.memory(x, tHist) * yHist
        total = h * (np.sum(w) - 0.5 * (w[0] + w[-1]))
    else:
        total = 0.0
    return total


def _partialPanel(problem, tk, stateK, xs, stateS):
    """Panel [tk, xs] by Simpson's rule with a cubic Hermite midpoint (trapezoid when n = 1)"""
    width = xs - tk
    if width == 0.0:
        return 0.0
    yk, ys = stateK[0], stateS[0]
    nk, ns = float(problem.memory(xs, tk)), float(problem.memory(xs, xs))
    if len(stateK) == 1:
        return 0.5 * width * (nk * yk + ns * ys)
    dk, ds = stateK[1], stateS[1]
    mid = 0.5 * (yk + ys) + 0.125 * width * (dk - ds)
    nm = float(problem.memory(xs, tk + 0.5 * width))
    return width / 6.0 * (nk * yk + 4.0 * nm * mid + ns * ys)


def _rk4Memory(problem, end, steps, debug=False):
    op = problem.operator
    n = op.order
    nodes = np.linspace(problem.x0, end, steps + 1)
    h = (end - problem.x0) / steps
    states = np.empty((steps + 1, n))
    states[0] = problem.init

    def rhs(x, state, memory):
        out = np.empty(n)
        out[:-1] = state[1:]
        top = problem.force(x) + memory - float(np.dot(op.forwardCoefficients(x), state))
        out[-1] = checkFinite("derivative", x, top)
        return out

    for k in range(steps):
        tk, yk = nodes[k], states[k]
        tHist, yHist = nodes[: k + 1], states[: k + 1, 0]

        def stage(x, state):
            panel = _partialPanel(problem, tk, yk, x, state)
            return rhs(x, state, _memoryIntegral(problem, x, tHist, yHist, h) + panel)

        k1 = stage(tk, yk)
        k2 = stage(tk + 0.5 * h, yk + 0.5 * h * k1)
        k3 = stage(tk + 0.5 * h, yk + 0.5 * h * k2)
        k4 = stage(tk + h, yk + h * k3)
        states[k + 1] = yk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if debug:
            log.debug("direct: node %d x=%r y=%r", k + 1, nodes[k + 1], states[k + 1, 0])
    return nodes, states, abs(h)


def solveIdeDirect(problem, end, steps, debug=False):
    """March the integro-differential equation itself with classical RK4

    The memory integral at each stage is the trapezoidal sum over accepted
    nodes plus the open panel up to the stage abscissa. The error estimate
    comes from a second run with 2*steps.

    :param problem: Problem
    :type problem: IntegroDifferentialProblem
    :param end: Last grid point
    :type end: float
    :param steps: Number of intervals (>= 4)
    :type steps: int

    :return: :class:`GridSolution` with companion states
    """
    end = float(end)
    _checkGrid(problem.x0, end, steps)
    problem.operator.checkPoint("end", end)
    nodes, states, h = _rk4Memory(problem, end, steps, debug)
    _, fineStates, _ = _rk4Memory(problem, end, 2 * steps)
    estimate = float(np.max(np.abs(states[:, 0] - fineStates[::2, 0])))
    log.debug("direct: %d steps to %r, estimate %.3g", steps, end, estimate)
    return GridSolution(nodes, states[:, 0].copy(), h, estimate, states)


def crossValidate(problem, end, steps, cfg=None, qtol=DEFAULT_TOL, source=KernelSource.WRONSKIAN):
    """Max over the grid of |Volterra solution - direct solution|

    :return: float
    """
    vp = reduce(problem, spanOf(problem.x0, end), cfg, qtol, source)
    volterra = solveVolterra(vp, end, steps)
    direct = solveIdeDirect(problem, end, steps)
    return float(np.max(np.abs(volterra.values - direct.values)))


def convergenceOrder(errors):
    """Observed orders log2(e_h / e_{h/2}) for errors measured under repeated halving"""
    return [math.log2(a / b) for a, b in zip(errors[:-1], errors[1:])]
