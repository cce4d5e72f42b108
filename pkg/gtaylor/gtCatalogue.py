"""
Built-in problems with closed-form oracles.

Constant-coefficient closed forms depend only on a difference of arguments,
so each one is stored as a shape p(u) in one variable: K(x, s) = k(x - s),
phi(x, s) = p(x - s) and y_i(x) = g_i(x - x0).
"""

import logging
import math
import re
from dataclasses import dataclass, field

from .gtErrors import NumericalError, UnknownProblemError
from .gtExpr import Const, Func, Poly, Scale, Sum
from .gtOperator import LinearOperator, SmoothFunction
from .gtVolterra import IntegroDifferentialProblem

log = logging.getLogger(__name__)

DOMAIN = (-8.0, 8.0)
LISTED_PURE_ORDERS = (1, 2, 3, 4)
_PURE_RE = re.compile(r"^pure_derivative_(\d+)$")
_JET_TOL = 1e-12


@dataclass
class ClosedForms:
    """Shapes of the kernel, adjoint kernel and fundamental set

    :param kernel: k(u) with K(x, s) = k(x - s)
    :param phi: p(u) with phi(x, s) = p(x - s)
    :param fundamental: g_i(u) with y_i(x) = g_i(x - x0)
    """

    kernel: object
    phi: object
    fundamental: list

    def kernelValue(self, x, s):
        return self.kernel(x - s)

    def phiValue(self, x, s):
        return self.phi(x - s)

    def fundamentalValues(self, x, x0):
        return [g(x - x0) for g in self.fundamental]

    def kernelJet(self, x, s, order):
        """d^j K / dx^j at (x, s)"""
        return self.kernel.jet(x - s, order)

    def phiJet(self, x, s, order):
        """d^j phi / ds^j at (x, s)"""
        return [(-1) ** j * v for j, v in enumerate(self.phi.jet(x - s, order))]

    def fundamentalJet(self, i, x, x0, order):
        return self.fundamental[i].jet(x - x0, order)


@dataclass
class NamedProblem:
    """A catalogue entry

    :param name: Catalogue name
    :param operator: F
    :param closedForms: Exact K, phi and y_i when known
    :param testFunctions: {label: SmoothFunction} with exact jets
    :param ide: Integro-differential problem with known solution
    :param exact: Exact solution of the integro-differential problem
    :param forcing: Default f for Cauchy solves
    :param x0: Default base point
    :param init: Default initial data
    """

    name: str
    operator: LinearOperator
    closedForms: ClosedForms = None
    testFunctions: dict = field(default_factory=dict)
    ide: IntegroDifferentialProblem = None
    exact: object = None
    forcing: object = None
    x0: float = 0.0
    init: list = None
    description: str = ""

    def __post_init__(self):
        if self.init is None:
            self.init = [0.0] * self.operator.order


def _sin(scale=1.0):
    return Func("sin", scale)


def _cos(scale=1.0):
    return Func("cos", scale)


def _testFunctions(homogeneous):
    exprs = {
        "exp": Func("exp"),
        "sin": Func("sin", 1.3, 0.2),
        "poly5": Poly([0.5, -1.0, 0.25, 0.1, -0.05, 0.01]),
        "homogeneous": homogeneous,
    }
    return {label: SmoothFunction.fromExpr(e, label) for label, e in exprs.items()}


def _harmonic():
    op = LinearOperator.constantCoefficient([0.0, 1.0], DOMAIN, "harmonic")
    forms = ClosedForms(_sin(), -_sin(), [_cos(), _sin()])
    return NamedProblem(
        "harmonic",
        op,
        forms,
        _testFunctions(_cos() + _sin()),
        forcing=Const(1.0),
        description="y'' + y",
    )


def _hyperbolic():
    op = LinearOperator.constantCoefficient([0.0, -1.0], DOMAIN, "hyperbolic")
    forms = ClosedForms(Func("sinh"), -Func("sinh"), [Func("cosh"), Func("sinh")])
    return NamedProblem(
        "hyperbolic",
        op,
        forms,
        _testFunctions(Func("cosh", 1.0, 0.3)),
        forcing=Const(1.0),
        description="y'' - y",
    )


def _quartic():
    op = LinearOperator.constantCoefficient([0.0, 5.0, 0.0, 4.0], DOMAIN, "quartic")
    kernel = Scale(1.0 / 6.0, Sum([Scale(2.0, _sin()), Scale(-1.0, _sin(2.0))]))
    phi = Scale(1.0 / 6.0, Sum([_sin(2.0), Scale(-2.0, _sin())]))
    fundamental = [
        Scale(1.0 / 3.0, Sum([Scale(4.0, _cos()), Scale(-1.0, _cos(2.0))])),
        Scale(1.0 / 6.0, Sum([Scale(8.0, _sin()), Scale(-1.0, _sin(2.0))])),
        Scale(1.0 / 3.0, Sum([_cos(), Scale(-1.0, _cos(2.0))])),
        Scale(1.0 / 6.0, Sum([Scale(2.0, _sin()), Scale(-1.0, _sin(2.0))])),
    ]
    return NamedProblem(
        "quartic",
        op,
        ClosedForms(kernel, phi, fundamental),
        _testFunctions(_cos(2.0)),
        forcing=Const(1.0),
        description="y'''' + 5y'' + 4y",
    )


def _monomial(k):
    """u^k / k!"""
    return Poly([0.0] * k + [1.0 / math.factorial(k)])


def _pureDerivative(n):
    op = LinearOperator.pureDerivative(n, DOMAIN, "pure_derivative_{}".format(n))
    kernel = _monomial(n - 1)
    forms = ClosedForms(kernel, Scale((-1) ** (n - 1), kernel), [_monomial(i) for i in range(n)])
    return NamedProblem(
        "pure_derivative_{}".format(n),
        op,
        forms,
        _testFunctions(Poly([1.0] * n)),
        forcing=Const(1.0),
        description="y^({})".format(n),
    )


def _coshIde():
    op = LinearOperator.pureDerivative(1, DOMAIN, "cosh_ide")
    ide = IntegroDifferentialProblem(op, Const(1.0), None, 0.0, [1.0], "cosh_ide")
    forms = ClosedForms(Const(1.0), Const(1.0), [Const(1.0)])
    return NamedProblem(
        "cosh_ide",
        op,
        forms,
        _testFunctions(Const(2.0)),
        ide=ide,
        exact=Func("cosh"),
        x0=0.0,
        init=[1.0],
        description="y' = int_0^x y(t) dt, y(0) = 1",
    )


def _harmonicIde():
    base = _harmonic()
    op = LinearOperator.constantCoefficient([0.0, 1.0], DOMAIN, "harmonic_ide")
    forcing = -_sin()
    ide = IntegroDifferentialProblem(op, Const(1.0), forcing, 0.0, [1.0, 0.0], "harmonic_ide")
    return NamedProblem(
        "harmonic_ide",
        op,
        base.closedForms,
        base.testFunctions,
        ide=ide,
        exact=_cos(),
        forcing=forcing,
        x0=0.0,
        init=[1.0, 0.0],
        description="y'' + y = -sin x + int_0^x y(t) dt, y(0) = 1, y'(0) = 0",
    )


_BUILDERS = {
    "harmonic": _harmonic,
    "hyperbolic": _hyperbolic,
    "quartic": _quartic,
    "cosh_ide": _coshIde,
    "harmonic_ide": _harmonicIde,
}


def names():
    """Catalogue names accepted by :func:`get`

    pure_derivative_N is accepted for every N in 1..12; the listing shows
    N = 1..4.
    """
    listed = ["harmonic", "hyperbolic", "quartic"]
    listed += ["pure_derivative_{}".format(n) for n in LISTED_PURE_ORDERS]
    listed += ["cosh_ide", "harmonic_ide"]
    return listed


def checkDefiningJets(problem, point):
    """Largest deviation of the closed forms from their defining jets at point

    K(., s) must have jet (0, ..., 0, 1) at x = s and y_i must have Kronecker
    data at x0.
    """
    forms = problem.closedForms
    n = problem.operator.order
    unit = [0.0] * (n - 1) + [1.0]
    worst = max(abs(a - b) for a, b in zip(forms.kernelJet(point, point, n - 1), unit))
    for i in range(n):
        target = [1.0 if k == i else 0.0 for k in range(n)]
        jet = forms.fundamentalJet(i, point, point, n - 1)
        worst = max(worst, max(abs(a - b) for a, b in zip(jet, target)))
    return worst


def get(name):
    """Look up a catalogue entry

    :param name: One of :func:`names`, or pure_derivative_N with 1 <= N <= 12
    :type name: str

    :return: :class:`NamedProblem`
    """
    match = _PURE_RE.match(str(name))
    if match and 1 <= int(match.group(1)) <= 12:
        problem = _pureDerivative(int(match.group(1)))
    elif name in _BUILDERS:
        problem = _BUILDERS[name]()
    else:
        raise UnknownProblemError(name, names())
    if problem.closedForms is not None:
        worst = checkDefiningJets(problem, problem.x0)
        if worst > _JET_TOL:
            raise NumericalError("closed forms of {} violate their initial jets by {:.3g}".format(name, worst))
    log.debug("catalogue entry %s: %s", name, problem.description)
    return problem
