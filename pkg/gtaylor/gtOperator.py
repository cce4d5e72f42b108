"""
Linear nth-order differential operators, their adjoints and the bilinear
concomitant.

For F(y) = y^(n) + a1 y^(n-1) + ... + an y the adjoint is

    G(z) = (-1)^n [z^(n) - (a1 z)^(n-1) + ... + (-1)^n an z]

and the concomitant U(y, z) satisfies z F(y) - y G(z) = d/dx U(y, z). Every
derivative of a product (ak z) is expanded with the Leibniz rule using the
coefficient derivative oracles.
"""

import logging
from dataclasses import dataclass

from . import gtExpr
from .gtErrors import ArgumentError, CapabilityError
from .gtLib import MAX_ORDER, binomial, checkFinite, checkInDomain, finiteDifference

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Jet:
    """A point plus the value and first derivatives of a scalar function there

    :param point: Abscissa
    :type point: float
    :param values: y(x), y'(x), ..., y^(m)(x)
    :type values: tuple
    """

    point: float
    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ArgumentError("a jet needs at least the function value")
        vals = tuple(checkFinite("jet entry {}".format(k), self.point, v) for k, v in enumerate(self.values))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "point", float(self.point))

    @property
    def order(self):
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def truncated(self, order):
        """Prefix jet of the requested order"""
        if order > self.order:
            raise ArgumentError("jet of order {} cannot supply order {}".format(self.order, order))
        return Jet(self.point, self.values[: order + 1])


class SmoothFunction:
    """A scalar function that exposes exact jets

    :param jetOracle: Callable (x, m) returning the m+1 derivatives y..y^(m) at x
    :type jetOracle: callable
    :param label: Human-readable name
    :type label: str
    """

    def __init__(self, jetOracle, label=""):
        self.jetOracle = jetOracle
        self.label = label
        self.expr = None

    @classmethod
    def fromExpr(cls, expr, label=None):
        """Wrap a :class:`gtaylor.gtExpr.Expr` (exact structural derivatives)"""
        expr = gtExpr.fromDescriptor(expr)
        fn = cls(lambda x, m: expr.jet(x, m), label if label is not None else repr(expr))
        fn.expr = expr
        return fn

    def jet(self, x, order):
        """:return: :class:`Jet` of the given order at x"""
        return Jet(x, tuple(self.jetOracle(x, order)))

    def __call__(self, x):
        return self.jet(x, 0)[0]

    def __add__(self, other):
        return SmoothFunction(
            lambda x, m: [a + b for a, b in zip(self.jetOracle(x, m), other.jetOracle(x, m))],
            "({} + {})".format(self.label, other.label),
        )

    def __rmul__(self, factor):
        factor = float(factor)
        return SmoothFunction(lambda x, m: [factor * v for v in self.jetOracle(x, m)], "{}*{}".format(factor, self.label))

    def __repr__(self):
        return "SmoothFunction({})".format(self.label)


class CoefficientBundle:
    """A coefficient a_k(x) with its derivative oracle

    Orders up to maxExactOrder come from the oracle. Higher orders use a
    central finite difference unless allowFallback is False, in which case a
    CapabilityError is raised.

    :param valueFn: x -> a(x)
    :type valueFn: callable
    :param derivativeOracle: (x, j) -> a^(j)(x)
    :type derivativeOracle: callable
    :param maxExactOrder: Highest order supplied by the oracle
    :type maxExactOrder: int
    :param domain: Closed interval [a, b]
    :type domain: tuple
    :param allowFallback: Permit finite differences above maxExactOrder
    :type allowFallback: bool
    :param name: Name used in error messages
    :type name: str
    """

    def __init__(
        self, valueFn, derivativeOracle=None, maxExactOrder=0, domain=(-1.0, 1.0), allowFallback=True, name="a"
    ):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise ArgumentError("domain must satisfy a < b, got {!r}".format(domain))
        self.valueFn = valueFn
        self.derivativeOracle = derivativeOracle
        self.maxExactOrder = maxExactOrder if derivativeOracle is not None else 0
        self.domain = (lo, hi)
        self.allowFallback = allowFallback
        self.name = name
        self.isConstant = False
        self.expr = None
        self._warned = set()

    @classmethod
    def constant(cls, c, domain, name="a"):
        c = float(c)
        bundle = cls(lambda x: c, lambda x, j: c if j == 0 else 0.0, MAX_ORDER, domain, name=name)
        bundle.isConstant = True
        bundle.expr = gtExpr.Const(c)
        return bundle

    @classmethod
    def fromExpr(cls, expr, domain, name="a"):
        expr = gtExpr.fromDescriptor(expr)
        if gtExpr.usesVariable(expr, "s"):
            raise ArgumentError("coefficient {} may only depend on x".format(name))
        bundle = cls(lambda x: expr.jet(x, 0)[0], lambda x, j: expr.jet(x, j)[j], MAX_ORDER, domain, name=name)
        bundle.isConstant = gtExpr.isConstant(expr)
        bundle.expr = expr
        return bundle

    def renamed(self, name):
        self.name = name
        return self

    def usesFallback(self, order):
        return order > self.maxExactOrder

    def value(self, x):
        return checkFinite(self.name, x, self.valueFn(x))

    def derivative(self, x, order):
        """order-th derivative at x; order 0 is exactly value(x)"""
        if order == 0:
            return self.value(x)
        if order <= self.maxExactOrder:
            return checkFinite("{}^({})".format(self.name, order), x, self.derivativeOracle(x, order))
        if not self.allowFallback:
            raise CapabilityError(
                "{} supplies derivatives up to order {}, order {} requested".format(
                    self.name, self.maxExactOrder, order
                )
            )
        if order not in self._warned:
            self._warned.add(order)
            log.info("finite-difference fallback for %s^(%d)", self.name, order)
        return checkFinite("{}^({})".format(self.name, order), x, finiteDifference(self.valueFn, x, order))


class LinearOperator:
    """F(y) = y^(n) + a1(x) y^(n-1) + ... + an(x) y on a closed interval

    :param order: n (1 <= n <= 12)
    :type order: int
    :param coefficients: [a1, ..., an] as :class:`CoefficientBundle`
    :type coefficients: list
    :param domain: Shared interval; taken from the bundles when omitted
    :type domain: tuple
    :param name: Label used in logs and reports
    :type name: str
    """

    def __init__(self, order, coefficients, domain=None, name="F"):
        if int(order) != order or order < 1:
            raise ArgumentError("operator order must be a positive integer, got {!r}".format(order))
        if order > MAX_ORDER:
            raise ArgumentError("operator order {} exceeds the supported maximum {}".format(order, MAX_ORDER))
        if len(coefficients) != order:
            raise ArgumentError("order {} operator needs {} coefficients, got {}".format(order, order, len(coefficients)))
        if domain is None:
            domain = coefficients[0].domain
        domain = (float(domain[0]), float(domain[1]))
        for k, bundle in enumerate(coefficients, start=1):
            if bundle.domain != domain:
                raise ArgumentError("coefficient a{} domain {} differs from {}".format(k, bundle.domain, domain))
            if bundle.name == "a":
                bundle.renamed("a{}".format(k))
        self.order = int(order)
        self.coefficients = list(coefficients)
        self.domain = domain
        self.name = name

    @classmethod
    def constantCoefficient(cls, coeffs, domain, name="F"):
        """Operator with constant a1..an"""
        bundles = [CoefficientBundle.constant(c, domain, "a{}".format(k)) for k, c in enumerate(coeffs, start=1)]
        return cls(len(coeffs), bundles, domain, name)

    @classmethod
    def pureDerivative(cls, n, domain, name=None):
        """F(y) = y^(n)"""
        return cls.constantCoefficient([0.0] * n, domain, name or "D{}".format(n))

    @property
    def isConstantCoefficient(self):
        return all(b.isConstant for b in self.coefficients)

    def coefficient(self, k, x, j=0):
        """j-th derivative of a_k at x, with a_0 identically 1"""
        if k == 0:
            return 1.0 if j == 0 else 0.0
        return self.coefficients[k - 1].derivative(x, j)

    def adjointFallback(self):
        """True when forming the adjoint needs finite-difference derivatives"""
        n = self.order
        return any(b.usesFallback(n - k) for k, b in enumerate(self.coefficients, start=1))

    def forwardCoefficients(self, x):
        """c[m] multiplying y^(m) in F, m = 0..n-1"""
        n = self.order
        return [self.coefficient(n - m, x) for m in range(n)]

    def adjointCoefficients(self, s):
        """b[m] such that G(z) = (-1)^n [z^(n) + sum_m b[m] z^(m)]"""
        n = self.order
        out = []
        for m in range(n):
            total = 0.0
            for k in range(1, n - m + 1):
                i = n - k - m
                total += (-1) ** k * binomial(n - k, i) * self.coefficient(k, s, i)
            out.append(total)
        return out

    def checkPoint(self, what, x):
        checkInDomain(what, x, self.domain)

    def __repr__(self):
        return "LinearOperator({}, order={}, domain={})".format(self.name, self.order, self.domain)


def _requireOrder(jet, order, what):
    if jet.order < order:
        raise ArgumentError("{} jet has order {}, at least {} required".format(what, jet.order, order))


def productDerivative(op, k, zJet, m):
    """(a_k z)^(m) at zJet.point by the Leibniz rule"""
    x = zJet.point
    if k == 0:
        return zJet[m]
    return sum(binomial(m, i) * op.coefficient(k, x, i) * zJet[m - i] for i in range(m + 1))


def applyForward(op, jet):
    """Evaluate F(y) at jet.point

    :param op: Operator
    :type op: LinearOperator
    :param jet: Jet of y of order >= n
    :type jet: Jet

    :return: y^(n) + a1 y^(n-1) + ... + an y
    """
    n = op.order
    _requireOrder(jet, n, "y")
    op.checkPoint("jet point", jet.point)
    x = jet.point
    return jet[n] + sum(op.coefficient(k, x) * jet[n - k] for k in range(1, n + 1))


def applyAdjoint(op, zJet):
    """Evaluate G(z) at zJet.point

    :param op: Operator
    :type op: LinearOperator
    :param zJet: Jet of z of order >= n
    :type zJet: Jet

    :return: (-1)^n sum_k (-1)^k (a_k z)^(n-k)
    """
    n = op.order
    _requireOrder(zJet, n, "z")
    op.checkPoint("jet point", zJet.point)
    total = sum((-1) ** k * productDerivative(op, k, zJet, n - k) for k in range(n + 1))
    return (-1) ** n * total


def concomitantTerms(op, zJet):
    """Coefficients B_0..B_{n-1} of y^(n-1)..y in U(y, z)

    B_m = sum_{j=0}^{m} (-1)^j (a_{m-j} z)^(j)
    """
    n = op.order
    _requireOrder(zJet, n - 1, "z")
    op.checkPoint("jet point", zJet.point)
    return [sum((-1) ** j * productDerivative(op, m - j, zJet, j) for j in range(m + 1)) for m in range(n)]


def concomitant(op, yJet, zJet):
    """Bilinear concomitant U(y, z) at the common jet point

    :param op: Operator
    :type op: LinearOperator
    :param yJet: Jet of y of order >= n-1
    :type yJet: Jet
    :param zJet: Jet of z of order >= n-1
    :type zJet: Jet

    :return: sum_m y^(n-1-m) B_m(z)
    """
    if yJet.point != zJet.point:
        raise ArgumentError("jets at different points: {!r} and {!r}".format(yJet.point, zJet.point))
    n = op.order
    _requireOrder(yJet, n - 1, "y")
    terms = concomitantTerms(op, zJet)
    return sum(yJet[n - 1 - m] * terms[m] for m in range(n))


def lagrangeResidual(op, y, z, x, h):
    """|d/dx U(y, z) - [z F(y) - y G(z)]| with a centered difference of step h

    :param op: Operator
    :type op: LinearOperator
    :param y: Function with exact jets of order >= n
    :type y: SmoothFunction
    :param z: Function with exact jets of order >= n
    :type z: SmoothFunction
    :param x: Evaluation point
    :type x: float
    :param h: Difference step (> 0)
    :type h: float

    :return: Residual, O(h^2) for smooth data
    """
    if not h > 0:
        raise ArgumentError("step must be positive, got {!r}".format(h))
    op.checkPoint("x - h", x - h)
    op.checkPoint("x + h", x + h)
    n = op.order
    upper = concomitant(op, y.jet(x + h, n - 1), z.jet(x + h, n - 1))
    lower = concomitant(op, y.jet(x - h, n - 1), z.jet(x - h, n - 1))
    yJet, zJet = y.jet(x, n), z.jet(x, n)
    identity = zJet[0] * applyForward(op, yJet) - yJet[0] * applyAdjoint(op, zJet)
    return abs((upper - lower) / (2.0 * h) - identity)
