"""
Adaptive initial-value integration for an operator and its adjoint.

Every nth-order problem is reduced to the companion system
(y, y', ..., y^(n-1)) and integrated with an embedded Dormand-Prince pair
driven one step at a time, so the step budget and the minimum step are under
our control. Backward integration negates the independent variable and runs
the same forward path.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853, RK45, OdeSolution

from .gtEnum import Direction, IntegratorMethod
from .gtErrors import ArgumentError, ResourceError, StiffnessError
from .gtLib import checkFinite, spanOf
from .gtOperator import Jet, concomitantTerms

log = logging.getLogger(__name__)

_SOLVERS = {IntegratorMethod.RK45: RK45, IntegratorMethod.DOP853: DOP853}


@dataclass(frozen=True)
class SolveConfig:
    """Tolerances and budgets for every IVP solve

    :param relTol: Relative local error tolerance
    :param absTol: Absolute local error tolerance
    :param maxSteps: Step budget per directional solve
    :param minStep: Smallest admissible step before giving up
    :param method: Embedded pair to use
    """

    relTol: float = 1e-10
    absTol: float = 1e-12
    maxSteps: int = 10**6
    minStep: float = 1e-13
    method: IntegratorMethod = field(default=IntegratorMethod.RK45)

    def __post_init__(self):
        if not (self.relTol > 0 and self.absTol > 0):
            raise ArgumentError("tolerances must be positive")
        if not self.maxSteps > 0:
            raise ArgumentError("maxSteps must be positive")
        if not self.minStep >= 0:
            raise ArgumentError("minStep must be non-negative")

    def tightened(self, factor):
        """Copy with both tolerances divided by factor"""
        return SolveConfig(self.relTol / factor, self.absTol / factor, self.maxSteps, self.minStep, self.method)


DEFAULT_CONFIG = SolveConfig()


class CompanionSystem:
    """First-order form of y^(n) + sum_m c_m(x) y^(m) = f(x)

    :param order: n
    :type order: int
    :param coefFn: x -> [c_0, ..., c_{n-1}]
    :type coefFn: callable
    :param forcing: Optional f(x)
    :type forcing: callable
    :param constant: coefFn does not depend on x
    :type constant: bool
    """

    def __init__(self, order, coefFn, forcing=None, constant=False, label="F"):
        self.order = order
        self.coefFn = coefFn
        self.forcing = forcing
        self.label = label
        self._fixed = np.array(coefFn(0.0), dtype=float) if constant else None

    def coefficients(self, x):
        if self._fixed is not None:
            return self._fixed
        return np.asarray(self.coefFn(x), dtype=float)

    def highest(self, x, state):
        """y^(n) implied by the equation at (x, state)"""
        top = -float(np.dot(self.coefficients(x), state))
        if self.forcing is not None:
            top += checkFinite("forcing", x, self.forcing(x))
        return top

    def rhs(self, x, state):
        out = np.empty(self.order)
        out[:-1] = state[1:]
        out[-1] = self.highest(x, state)
        return out


def forwardSystem(op, forcing=None):
    """Companion system of F(y) = f"""
    return CompanionSystem(op.order, op.forwardCoefficients, forcing, op.isConstantCoefficient, op.name)


def adjointSystem(op):
    """Companion system of G(z) = 0 in normal form"""
    return CompanionSystem(op.order, op.adjointCoefficients, None, op.isConstantCoefficient, "adj " + op.name)


class _Segment:
    """One directional solve, stored in the negated variable when backward"""

    def __init__(self, start, end, solution, steps):
        self.start = start
        self.end = end
        self.sign = 1.0 if end >= start else -1.0
        self.solution = solution
        self.steps = steps
        self.nodes = None if solution is None else self.sign * np.asarray(solution.ts)

    def states(self, xs):
        """(n, m) states at the points xs"""
        return self.solution(self.sign * np.asarray(xs, dtype=float))


def _solveDirectional(system, start, state, end, cfg, debug=False):
    start, end = float(start), float(end)
    state = np.array([checkFinite("initial state", start, v) for v in state])
    if len(state) != system.order:
        raise ArgumentError("initial state needs {} entries, got {}".format(system.order, len(state)))
    if start == end:
        return _Segment(start, end, None, 0)

    sign = 1.0 if end > start else -1.0

    def fun(u, y):
        return sign * system.rhs(sign * u, y)

    solver = _SOLVERS[cfg.method](fun, sign * start, state, sign * end, rtol=cfg.relTol, atol=cfg.absTol)
    ts = [solver.t]
    interpolants = []
    steps = 0
    while solver.status == "running":
        if steps >= cfg.maxSteps:
            raise ResourceError(
                "{}: step budget {} exhausted at x={!r}".format(system.label, cfg.maxSteps, sign * solver.t)
            )
        message = solver.step()
        steps += 1
        if solver.status == "failed":
            raise StiffnessError("{}: {} at x={!r}".format(system.label, message, sign * solver.t))
        if solver.status == "running" and solver.step_size < cfg.minStep:
            raise StiffnessError(
                "{}: step {:.3g} below minimum {:.3g} at x={!r}".format(
                    system.label, solver.step_size, cfg.minStep, sign * solver.t
                )
            )
        ts.append(solver.t)
        interpolants.append(solver.dense_output())
        if debug:
            log.debug("%s: step %d to x=%r (h=%.3g)", system.label, steps, sign * solver.t, solver.step_size)
    log.debug("%s: %r -> %r in %d steps", system.label, start, end, steps)
    return _Segment(start, end, OdeSolution(ts, interpolants), steps)


class Trajectory:
    """Solution of a companion system with dense output

    Built from up to two directional segments sharing the base point. The
    state at the base point is returned exactly as given.

    :param system: The integrated system
    :type system: CompanionSystem
    :param basePoint: Point where the initial state was imposed
    :type basePoint: float
    :param baseState: Initial state
    :type baseState: numpy.ndarray
    :param segments: Directional segments
    :type segments: list
    """

    def __init__(self, system, basePoint, baseState, segments):
        self.system = system
        self.basePoint = float(basePoint)
        self.baseState = np.array(baseState, dtype=float)
        self.segments = [seg for seg in segments if seg.solution is not None]
        self.steps = sum(seg.steps for seg in segments)
        ends = [self.basePoint] + [seg.end for seg in self.segments]
        self.coverage = spanOf(*ends)
        signs = {seg.sign for seg in self.segments}
        if len(signs) == 2:
            self.direction = Direction.BOTH
        elif signs == {-1.0}:
            self.direction = Direction.BACKWARD
        else:
            self.direction = Direction.FORWARD
        if self.direction is Direction.BOTH:
            back = [seg for seg in self.segments if seg.sign < 0][0]
            fwd = [seg for seg in self.segments if seg.sign > 0][0]
            self.nodePoints = np.concatenate([back.nodes[::-1], fwd.nodes[1:]])
        elif self.segments:
            self.nodePoints = self.segments[0].nodes
        else:
            self.nodePoints = np.array([self.basePoint])

    @property
    def order(self):
        return self.system.order

    def _checkCovered(self, xs):
        lo, hi = self.coverage
        slack = 4 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi))
        if np.any(xs < lo - slack) or np.any(xs > hi + slack):
            raise ArgumentError("points outside trajectory coverage [{!r}, {!r}]".format(lo, hi))

    def states(self, xs):
        """States at many points

        :param xs: Points inside the coverage
        :type xs: array-like
        :return: array of shape (len(xs), n)
        """
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        self._checkCovered(xs)
        out = np.empty((xs.size, self.order))
        out[:] = self.baseState
        for seg in self.segments:
            lo, hi = spanOf(seg.start, seg.end)
            mask = (xs > self.basePoint) if seg.sign > 0 else (xs < self.basePoint)
            if np.any(mask):
                out[mask] = seg.states(np.clip(xs[mask], lo, hi)).T
        return out

    def state(self, x):
        """State (y, y', ..., y^(n-1)) at x"""
        return self.states([x])[0]

    def values(self, xs):
        return self.states(xs)[:, 0]

    def value(self, x):
        return float(self.state(x)[0])

    def jetAt(self, x, order=None):
        """Jet of the solution at x up to order n (the nth derivative from the equation)"""
        n = self.order
        order = n - 1 if order is None else order
        if order > n:
            raise ArgumentError("trajectory jets are available up to order {}".format(n))
        state = self.state(x)
        values = list(state[: order + 1])
        if order == n:
            values.append(self.system.highest(x, state))
        return Jet(x, tuple(values))


def _solveSpan(system, base, state, span, cfg, debug=False):
    lo, hi = spanOf(base, *span)
    segments = []
    if lo < base:
        segments.append(_solveDirectional(system, base, state, lo, cfg, debug))
    if hi > base:
        segments.append(_solveDirectional(system, base, state, hi, cfg, debug))
    return Trajectory(system, base, state, segments)


def _resolveSpan(op, span, *points):
    if span is None:
        span = op.domain
    for p in points:
        op.checkPoint("point", p)
    for p in span:
        op.checkPoint("span end", p)
    return spanOf(*span)


def integrate(op, start, initialState, forcing=None, targetEnd=None, cfg=None, debug=False):
    """Integrate y^(n) = f(x) - sum_k a_k y^(n-k) from start to targetEnd

    :param op: Operator
    :type op: LinearOperator
    :param start: Initial point
    :type start: float
    :param initialState: (y, y', ..., y^(n-1)) at start
    :type initialState: list
    :param forcing: Optional f(x)
    :type forcing: callable
    :param targetEnd: Final point; may lie before start
    :type targetEnd: float
    :param cfg: Solver configuration
    :type cfg: SolveConfig

    :return: :class:`Trajectory`
    """
    cfg = cfg or DEFAULT_CONFIG
    targetEnd = start if targetEnd is None else targetEnd
    op.checkPoint("start", start)
    op.checkPoint("targetEnd", targetEnd)
    system = forwardSystem(op, forcing)
    segment = _solveDirectional(system, start, initialState, targetEnd, cfg, debug)
    return Trajectory(system, start, initialState, [segment])


def _unit(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


class FundamentalSet:
    """Solutions y_1..y_n of F(y) = 0 with y_i^(k)(x0) = delta_{i,k+1}

    :param op: Operator
    :type op: LinearOperator
    :param x0: Base point
    :type x0: float
    :param span: Interval to cover (may straddle x0); defaults to the domain
    :type span: tuple
    :param cfg: Solver configuration
    :type cfg: SolveConfig
    :param debug: Log every accepted step
    :type debug: bool
    """

    def __init__(self, op, x0, span=None, cfg=None, debug=False):
        self.operator = op
        self.basePoint = float(x0)
        self.span = _resolveSpan(op, span, x0)
        self.cfg = cfg or DEFAULT_CONFIG
        self.dbg = debug
        system = forwardSystem(op)
        n = op.order
        self.trajectories = [_solveSpan(system, self.basePoint, _unit(n, i), self.span, self.cfg, debug) for i in range(n)]
        log.debug("fundamental set of %s at x0=%r over %s", op.name, self.basePoint, self.span)

    def values(self, x):
        """y_1(x)..y_n(x); for an array of m points returns shape (m, n)"""
        xs = np.asarray(x, dtype=float)
        out = np.stack([t.values(np.atleast_1d(xs)) for t in self.trajectories], axis=-1)
        return out[0] if xs.ndim == 0 else out

    def wronskian(self, x):
        """W[k, i] = y_i^(k)(x); for m points returns shape (m, n, n)"""
        xs = np.asarray(x, dtype=float)
        out = np.stack([t.states(np.atleast_1d(xs)) for t in self.trajectories], axis=-1)
        return out[0] if xs.ndim == 0 else out


class KernelSlice:
    """K(., s): the solution of F(y) = 0 in x with jet (0, ..., 0, 1) at x = s

    :param op: Operator
    :type op: LinearOperator
    :param source: s
    :type source: float
    :param span: Interval to cover; defaults to the domain
    :type span: tuple
    :param cfg: Solver configuration
    :type cfg: SolveConfig
    """

    def __init__(self, op, source, span=None, cfg=None, debug=False):
        self.operator = op
        self.source = float(source)
        self.span = _resolveSpan(op, span, source)
        self.cfg = cfg or DEFAULT_CONFIG
        self.dbg = debug
        # the forward system reads coefficient values only
        self.usedFallback = False
        n = op.order
        self.trajectory = _solveSpan(forwardSystem(op), self.source, _unit(n, n - 1), self.span, self.cfg, debug)

    def __call__(self, x):
        """K(x, s) for scalar or array x"""
        xs = np.asarray(x, dtype=float)
        out = self.trajectory.values(np.atleast_1d(xs))
        return float(out[0]) if xs.ndim == 0 else out

    def jetAt(self, x, order=None):
        return self.trajectory.jetAt(x, order)


class AdjointSlice:
    """phi(x, .): the solution of G(z) = 0 in s with jet (0, ..., 0, 1) at s = x

    :param op: Operator
    :type op: LinearOperator
    :param observation: x
    :type observation: float
    :param span: Interval in s to cover; defaults to the domain
    :type span: tuple
    :param cfg: Solver configuration
    :type cfg: SolveConfig
    """

    def __init__(self, op, observation, span=None, cfg=None, debug=False):
        self.operator = op
        self.observationPoint = float(observation)
        self.span = _resolveSpan(op, span, observation)
        self.cfg = cfg or DEFAULT_CONFIG
        self.dbg = debug
        n = op.order
        self.usedFallback = op.adjointFallback()
        if self.usedFallback:
            log.info("adjoint of %s uses finite-difference coefficient derivatives", op.name)
        self.trajectory = _solveSpan(
            adjointSystem(op), self.observationPoint, _unit(n, n - 1), self.span, self.cfg, debug
        )

    def __call__(self, s):
        """phi(x, s) for scalar or array s"""
        ss = np.asarray(s, dtype=float)
        out = self.trajectory.values(np.atleast_1d(ss))
        return float(out[0]) if ss.ndim == 0 else out

    def kernel(self, s):
        """K(x, s) = (-1)^(n-1) phi(x, s)"""
        return (-1) ** (self.operator.order - 1) * self(s)

    def jetAt(self, s, order=None):
        """Jet of phi(x, .) in s"""
        return self.trajectory.jetAt(s, order)


class WronskianKernel:
    """K(x, s) = sum_i y_i(x) [W(s)^-1]_{i, n-1} from one fundamental set

    Vectorized in x and s (broadcast against each other). The span of the
    fundamental set must cover every point requested.

    :param fundamental: Fundamental set covering the points of interest
    :type fundamental: FundamentalSet
    """

    def __init__(self, fundamental):
        self.fundamental = fundamental
        self.operator = fundamental.operator

    def weights(self, s):
        """Last column of W(s)^-1 at each s; shape (m, n)"""
        ss = np.atleast_1d(np.asarray(s, dtype=float))
        n = self.operator.order
        w = self.fundamental.wronskian(ss)
        rhs = np.broadcast_to(np.eye(n)[:, -1], (ss.size, n))[..., None]
        return np.linalg.solve(w, rhs)[..., 0]

    def __call__(self, x, s):
        xs, ss = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(s, dtype=float))
        shape = xs.shape
        ys = self.fundamental.values(xs.ravel()).reshape(-1, self.operator.order)
        out = np.einsum("mi,mi->m", ys, self.weights(ss.ravel()))
        return float(out[0]) if len(shape) == 0 else out.reshape(shape)


def fundamentalSet(op, x0, span=None, cfg=None):
    """Build the fundamental set with Kronecker data at x0"""
    return FundamentalSet(op, x0, span, cfg)


def cauchyKernel(op, s, span=None, cfg=None):
    """Build the kernel slice K(., s)"""
    return KernelSlice(op, s, span, cfg)


def adjointPhi(op, x, span=None, cfg=None):
    """Build the adjoint slice phi(x, .)"""
    return AdjointSlice(op, x, span, cfg)


def fundamentalFromAdjoint(op, x0, x, cfg=None, negated=False):
    """y_1(x)..y_n(x) recovered from the s-jet of phi(x, s) at s = x0

    lambda_{n-r}(x) = (-1)^(n-1) sum_{j<=r} (-1)^j d^j(a_{r-j} phi)/ds^j at s = x0

    :param op: Operator
    :type op: LinearOperator
    :param x0: Base point of the fundamental set
    :type x0: float
    :param x: Observation point
    :type x: float
    :param cfg: Solver configuration
    :type cfg: SolveConfig
    :param negated: Use the prefactor (-1)^n instead; only for regression checks
    :type negated: bool

    :return: list [y_1(x), ..., y_n(x)]
    """
    return fundamentalFromSlice(AdjointSlice(op, x, spanOf(x0, x), cfg), x0, negated)


def fundamentalFromSlice(phi, x0, negated=False):
    """y_1(x)..y_n(x) from an adjoint slice phi(x, .) whose coverage contains x0"""
    n = phi.operator.order
    terms = concomitantTerms(phi.operator, phi.jetAt(x0, n - 1))
    sign = (-1) ** n if negated else (-1) ** (n - 1)
    return [sign * terms[n - i] for i in range(1, n + 1)]


def kernelTable(op, xGrid, sGrid, cfg=None):
    """Matrix of K(x_i, s_j), one kernel slice per source point

    Entries with x_i == s_j are set to the exact initial value (0, or 1 when
    n = 1).

    :return: numpy array of shape (len(xGrid), len(sGrid))
    """
    xGrid = np.atleast_1d(np.asarray(xGrid, dtype=float))
    sGrid = np.atleast_1d(np.asarray(sGrid, dtype=float))
    table = np.empty((xGrid.size, sGrid.size))
    diagonal = 1.0 if op.order == 1 else 0.0
    for j, s in enumerate(sGrid):
        kernel = KernelSlice(op, s, spanOf(s, *xGrid), cfg)
        column = kernel(xGrid)
        column[xGrid == s] = diagonal
        table[:, j] = column
    return table


def forcedTrajectory(op, forcing, x0, init, span, cfg=None, debug=False):
    """Solution of F(y) = f with y^(k)(x0) = init[k], covering span on both sides of x0

    :return: :class:`Trajectory`
    """
    span = _resolveSpan(op, span, x0)
    return _solveSpan(forwardSystem(op, forcing), float(x0), init, span, cfg or DEFAULT_CONFIG, debug)
