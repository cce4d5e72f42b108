"""
JSON problem files.

A problem file describes an operator on an interval plus optional forcing,
memory kernel, test function and initial data::

    {
      "order": 2,
      "interval": [0, "2*pi"],
      "coefficients": [0, 1],
      "forcing": 1,
      "memory_kernel": {"fn": "exp", "arg": [-1, 0], "var": "s"},
      "test_function": {"fn": "exp"},
      "x0": 0,
      "init": [0, 0],
      "tolerances": {"rtol": 1e-10, "atol": 1e-12, "qtol": 1e-10}
    }

Files are validated completely before anything is computed; violations are
reported as :class:`gtaylor.gtErrors.SchemaError` anchored to a line of the
file.
"""

import json
import logging
import re
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, field_validator, model_validator

from . import gtExpr
from .gtCatalogue import NamedProblem
from .gtErrors import ArgumentError, SchemaError
from .gtLib import MAX_ORDER, parseScalar
from .gtOperator import CoefficientBundle, LinearOperator, SmoothFunction
from .gtVolterra import IntegroDifferentialProblem

log = logging.getLogger(__name__)


class _Conflict(ValueError):
    """Cross-field violation, anchored to the key that has to change"""

    def __init__(self, key, message):
        super().__init__(message)
        self.key = key


def _scalar(value):
    if isinstance(value, str):
        return parseScalar(value)
    return value


def _descriptor(value):
    gtExpr.fromDescriptor(value)
    return value


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rtol: Optional[PositiveFloat] = None
    atol: Optional[PositiveFloat] = None
    qtol: Optional[PositiveFloat] = None


class ProblemFile(BaseModel):
    """Validated content of a problem file"""

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    order: int = Field(ge=1, le=MAX_ORDER)
    interval: Tuple[float, float]
    coefficients: List[Any]
    forcing: Optional[Any] = None
    memory_kernel: Optional[Any] = None
    test_function: Optional[Any] = None
    x0: float = 0.0
    init: Optional[List[float]] = None
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("interval", mode="before")
    @classmethod
    def _interval(cls, value):
        if not isinstance(value, (list, tuple)):
            raise ValueError("interval must be a list [a, b]")
        return [_scalar(v) for v in value]

    @field_validator("x0", mode="before")
    @classmethod
    def _x0(cls, value):
        return _scalar(value)

    @field_validator("init", mode="before")
    @classmethod
    def _init(cls, value):
        if value is None:
            return value
        return [_scalar(v) for v in value]

    @field_validator("coefficients")
    @classmethod
    def _coefficients(cls, value):
        for desc in value:
            if gtExpr.usesVariable(gtExpr.fromDescriptor(desc), "s"):
                raise ValueError("coefficients may only depend on x")
        return value

    @field_validator("forcing", "test_function")
    @classmethod
    def _xOnly(cls, value):
        if value is not None and gtExpr.usesVariable(gtExpr.fromDescriptor(value), "s"):
            raise ValueError("expression may only depend on x")
        return value

    @field_validator("memory_kernel")
    @classmethod
    def _kernel(cls, value):
        return value if value is None else _descriptor(value)

    @model_validator(mode="after")
    def _consistent(self):
        a, b = self.interval
        if not a < b:
            raise _Conflict("interval", "interval must satisfy a < b")
        if len(self.coefficients) != self.order:
            raise _Conflict(
                "coefficients", "order {} needs {} coefficients, got {}".format(self.order, self.order, len(self.coefficients))
            )
        if self.init is not None and len(self.init) != self.order:
            raise _Conflict("init", "order {} needs {} initial values, got {}".format(self.order, self.order, len(self.init)))
        if not a <= self.x0 <= b:
            raise _Conflict("x0", "x0={!r} outside interval [{!r}, {!r}]".format(self.x0, a, b))
        return self


def _lineOf(text, key):
    match = re.search(r'"{}"\s*:'.format(re.escape(str(key))), text)
    if match is None:
        return 1
    return text.count("\n", 0, match.start()) + 1


def parseProblem(text, path="<problem>"):
    """Validate problem text

    :param text: JSON document
    :type text: str
    :param path: Name used in error messages
    :type path: str

    :return: :class:`ProblemFile`
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(path, err.lineno, "invalid JSON: {}".format(err.msg))
    if not isinstance(data, dict):
        raise SchemaError(path, 1, "top level must be an object")
    try:
        return ProblemFile.model_validate(data)
    except ValidationError as err:
        first = err.errors()[0]
        loc = first.get("loc") or ()
        cause = (first.get("ctx") or {}).get("error")
        if not loc and isinstance(cause, _Conflict):
            loc = (cause.key,)
        where = ".".join(str(p) for p in loc) or "problem"
        line = _lineOf(text, loc[0]) if loc else 1
        raise SchemaError(path, line, "{}: {}".format(where, first.get("msg")))


def loadProblem(path):
    """Read and validate a problem file

    :return: :class:`ProblemFile`
    """
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as err:
        raise SchemaError(path, None, "cannot read file: {}".format(err.strerror))
    problem = parseProblem(text, path)
    log.debug("loaded %s: order %d on %s", path, problem.order, problem.interval)
    return problem


def toNamedProblem(pf, name=None):
    """Build operator, test function and integro-differential problem from a ProblemFile

    :param pf: Validated file content
    :type pf: ProblemFile

    :return: :class:`gtaylor.gtCatalogue.NamedProblem`
    """
    name = name or pf.name or "problem"
    domain = tuple(pf.interval)
    bundles = [
        CoefficientBundle.fromExpr(desc, domain, "a{}".format(k)) for k, desc in enumerate(pf.coefficients, start=1)
    ]
    op = LinearOperator(pf.order, bundles, domain, name)
    forcing = None if pf.forcing is None else gtExpr.fromDescriptor(pf.forcing)
    tests = {}
    if pf.test_function is not None:
        tests["test_function"] = SmoothFunction.fromExpr(pf.test_function, "test_function")
    init = pf.init if pf.init is not None else [0.0] * pf.order
    ide = None
    if pf.memory_kernel is not None:
        kernel = gtExpr.fromDescriptor(pf.memory_kernel)
        ide = IntegroDifferentialProblem(op, kernel, forcing, pf.x0, init, name)
    return NamedProblem(name, op, None, tests, ide=ide, forcing=forcing, x0=pf.x0, init=list(init))


def _describe(expr):
    if expr is None:
        return None
    if not isinstance(expr, gtExpr.Expr):
        raise ArgumentError("only grammar expressions can be written to a problem file")
    return expr.describe()


def dumpProblem(problem, testFunction=None):
    """JSON text of a problem file describing a NamedProblem

    :param problem: Catalogue entry or loaded problem
    :type problem: NamedProblem
    :param testFunction: Label of the test function to include; the first one when omitted
    :type testFunction: str

    :return: str
    """
    op = problem.operator
    coefficients = []
    for bundle in op.coefficients:
        if bundle.expr is None:
            raise ArgumentError("coefficient {} has no expression form".format(bundle.name))
        coefficients.append(bundle.expr.describe())
    doc = {"name": problem.name, "order": op.order, "interval": list(op.domain), "coefficients": coefficients}
    if problem.forcing is not None:
        doc["forcing"] = _describe(problem.forcing)
    if problem.ide is not None:
        doc["memory_kernel"] = _describe(problem.ide.memoryKernel)
    if problem.testFunctions:
        label = testFunction or next(iter(problem.testFunctions))
        doc["test_function"] = _describe(problem.testFunctions[label].expr)
    doc["x0"] = problem.x0
    doc["init"] = list(problem.init)
    return json.dumps(doc, indent=2) + "\n"
