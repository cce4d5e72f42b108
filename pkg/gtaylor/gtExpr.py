"""
Expression grammar for coefficients, forcing terms, memory kernels and test
functions.

The grammar is deliberately small: polynomials, sin/cos/sinh/cosh/exp of an
affine argument, sums, products and scalar multiples. Every node returns exact
derivatives of any order in ``x`` by structural rules, so jets never rely on
numerical differencing. Leaves may be written in the variable ``s`` to build
two-variable kernels N(x, s); such leaves are constants with respect to ``x``.
"""

from fractions import Fraction
from numbers import Number

import numpy as np
from numpy.polynomial import polynomial as P

from .gtErrors import ArgumentError
from .gtLib import binomial

VARIABLES = ("x", "s")
FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp")


def toNumber(value):
    """Convert an int, float or "p/q" string to float"""
    if isinstance(value, bool):
        raise ArgumentError("booleans are not numbers: {!r}".format(value))
    if isinstance(value, Number):
        return float(value)
    try:
        return float(Fraction(str(value).strip()))
    except (ValueError, ZeroDivisionError):
        raise ArgumentError("not a rational literal: {!r}".format(value))


class Expr:
    """Base class of the expression tree"""

    def evaluate(self, x, s=0.0):
        """Value at x (and s); numpy arrays broadcast"""
        raise NotImplementedError

    def jet(self, x, order, s=0.0):
        """Derivatives d^k/dx^k for k = 0..order at a scalar x

        :return: list of order+1 floats
        """
        raise NotImplementedError

    def describe(self):
        """JSON-serialisable descriptor accepted by :func:`fromDescriptor`"""
        raise NotImplementedError

    def __call__(self, x, s=0.0):
        return self.evaluate(x, s)

    def __add__(self, other):
        return Sum([self, _wrap(other)])

    def __radd__(self, other):
        return Sum([_wrap(other), self])

    def __sub__(self, other):
        return Sum([self, Scale(-1.0, _wrap(other))])

    def __rsub__(self, other):
        return Sum([_wrap(other), Scale(-1.0, self)])

    def __mul__(self, other):
        if isinstance(other, Number):
            return Scale(other, self)
        return Product([self, _wrap(other)])

    def __rmul__(self, other):
        if isinstance(other, Number):
            return Scale(other, self)
        return Product([_wrap(other), self])

    def __neg__(self):
        return Scale(-1.0, self)


def _wrap(value):
    if isinstance(value, Expr):
        return value
    return Const(value)


class Const(Expr):
    def __init__(self, value):
        self.value = toNumber(value)

    def evaluate(self, x, s=0.0):
        return self.value + 0.0 * np.asarray(x, dtype=float)

    def jet(self, x, order, s=0.0):
        return [self.value] + [0.0] * order

    def describe(self):
        return self.value

    def __repr__(self):
        return "Const({!r})".format(self.value)


class Poly(Expr):
    """Polynomial with coefficients in increasing degree

    :param coeffs: c0, c1, ... so that p(v) = c0 + c1 v + ...
    :type coeffs: list
    :param var: Variable name, ``x`` or ``s``
    :type var: str
    """

    def __init__(self, coeffs, var="x"):
        if var not in VARIABLES:
            raise ArgumentError("unknown variable {!r}".format(var))
        if len(coeffs) == 0:
            raise ArgumentError("polynomial needs at least one coefficient")
        self.coeffs = np.array([toNumber(c) for c in coeffs], dtype=float)
        self.var = var

    def evaluate(self, x, s=0.0):
        v = x if self.var == "x" else s
        return P.polyval(np.asarray(v, dtype=float), self.coeffs)

    def jet(self, x, order, s=0.0):
        if self.var == "s":
            return [float(P.polyval(s, self.coeffs))] + [0.0] * order
        out = []
        c = self.coeffs
        for _ in range(order + 1):
            out.append(float(P.polyval(x, c)) if len(c) else 0.0)
            c = P.polyder(c) if len(c) > 1 else np.zeros(0)
        return out

    def describe(self):
        d = {"poly": [float(c) for c in self.coeffs]}
        if self.var != "x":
            d["var"] = self.var
        return d

    def __repr__(self):
        return "Poly({!r}, var={!r})".format(list(self.coeffs), self.var)


# derivative cycles: entry k is (function, sign) of the k-th derivative
_CYCLES = {
    "sin": ((np.sin, 1.0), (np.cos, 1.0), (np.sin, -1.0), (np.cos, -1.0)),
    "cos": ((np.cos, 1.0), (np.sin, -1.0), (np.cos, -1.0), (np.sin, 1.0)),
    "sinh": ((np.sinh, 1.0), (np.cosh, 1.0)),
    "cosh": ((np.cosh, 1.0), (np.sinh, 1.0)),
    "exp": ((np.exp, 1.0),),
}


class Func(Expr):
    """Elementary function of an affine argument ``scale * v + shift``"""

    def __init__(self, name, scale=1.0, shift=0.0, var="x"):
        if name not in FUNCTIONS:
            raise ArgumentError("unknown function {!r}; expected one of {}".format(name, ", ".join(FUNCTIONS)))
        if var not in VARIABLES:
            raise ArgumentError("unknown variable {!r}".format(var))
        self.name = name
        self.scale = toNumber(scale)
        self.shift = toNumber(shift)
        self.var = var

    def evaluate(self, x, s=0.0):
        v = x if self.var == "x" else s
        fn, _ = _CYCLES[self.name][0]
        return fn(self.scale * np.asarray(v, dtype=float) + self.shift)

    def jet(self, x, order, s=0.0):
        cycle = _CYCLES[self.name]
        if self.var == "s":
            fn, _ = cycle[0]
            return [float(fn(self.scale * s + self.shift))] + [0.0] * order
        arg = self.scale * x + self.shift
        out = []
        for k in range(order + 1):
            fn, sign = cycle[k % len(cycle)]
            out.append(sign * self.scale**k * float(fn(arg)))
        return out

    def describe(self):
        d = {"fn": self.name, "arg": [self.scale, self.shift]}
        if self.var != "x":
            d["var"] = self.var
        return d

    def __repr__(self):
        return "Func({!r}, {!r}, {!r}, var={!r})".format(self.name, self.scale, self.shift, self.var)


class Sum(Expr):
    def __init__(self, terms):
        if len(terms) == 0:
            raise ArgumentError("sum needs at least one term")
        self.terms = list(terms)

    def evaluate(self, x, s=0.0):
        total = self.terms[0].evaluate(x, s)
        for t in self.terms[1:]:
            total = total + t.evaluate(x, s)
        return total

    def jet(self, x, order, s=0.0):
        out = [0.0] * (order + 1)
        for t in self.terms:
            for k, v in enumerate(t.jet(x, order, s)):
                out[k] += v
        return out

    def describe(self):
        return {"sum": [t.describe() for t in self.terms]}


class Product(Expr):
    def __init__(self, factors):
        if len(factors) == 0:
            raise ArgumentError("product needs at least one factor")
        self.factors = list(factors)

    def evaluate(self, x, s=0.0):
        total = self.factors[0].evaluate(x, s)
        for f in self.factors[1:]:
            total = total * f.evaluate(x, s)
        return total

    def jet(self, x, order, s=0.0):
        out = self.factors[0].jet(x, order, s)
        for f in self.factors[1:]:
            other = f.jet(x, order, s)
            # Leibniz rule
            out = [sum(binomial(k, i) * out[i] * other[k - i] for i in range(k + 1)) for k in range(order + 1)]
        return out

    def describe(self):
        return {"product": [f.describe() for f in self.factors]}


class Scale(Expr):
    def __init__(self, factor, expr):
        self.factor = toNumber(factor)
        self.expr = expr

    def evaluate(self, x, s=0.0):
        return self.factor * self.expr.evaluate(x, s)

    def jet(self, x, order, s=0.0):
        return [self.factor * v for v in self.expr.jet(x, order, s)]

    def describe(self):
        return {"scale": self.factor, "expr": self.expr.describe()}


def variable(name="x"):
    """The identity polynomial in x or s"""
    return Poly([0.0, 1.0], var=name)


def fromDescriptor(desc):
    """Build an expression tree from its JSON descriptor

    Descriptors are numbers, rational strings ("1/3"), the variable names
    "x"/"s", or single-purpose objects::

        {"poly": [c0, c1, ...], "var": "x"}
        {"fn": "sin", "arg": [scale, shift], "var": "x"}
        {"sum": [d, ...]}   {"product": [d, ...]}
        {"sub": [d1, d2]}   {"scale": c, "expr": d}

    :param desc: Descriptor
    :return: :class:`Expr`
    """
    if isinstance(desc, Expr):
        return desc
    if isinstance(desc, str) and desc.strip() in VARIABLES:
        return variable(desc.strip())
    if isinstance(desc, (Number, str)):
        return Const(desc)
    if not isinstance(desc, dict):
        raise ArgumentError("unsupported expression descriptor {!r}".format(desc))
    if "poly" in desc:
        return Poly(desc["poly"], desc.get("var") or "x")
    if "fn" in desc:
        arg = desc.get("arg") or [1.0, 0.0]
        if len(arg) != 2:
            raise ArgumentError("fn argument must be [scale, shift], got {!r}".format(arg))
        return Func(desc["fn"], arg[0], arg[1], desc.get("var") or "x")
    if "sum" in desc:
        return Sum([fromDescriptor(d) for d in desc["sum"]])
    if "product" in desc:
        return Product([fromDescriptor(d) for d in desc["product"]])
    if "sub" in desc:
        if len(desc["sub"]) != 2:
            raise ArgumentError("sub takes exactly two operands")
        a, b = desc["sub"]
        return Sum([fromDescriptor(a), Scale(-1.0, fromDescriptor(b))])
    if "scale" in desc:
        return Scale(desc["scale"], fromDescriptor(desc["expr"]))
    raise ArgumentError("unsupported expression descriptor {!r}".format(desc))


def usesVariable(expr, name):
    """True when any leaf of expr is written in the given variable"""
    if isinstance(expr, (Poly, Func)):
        return expr.var == name
    if isinstance(expr, Sum):
        return any(usesVariable(t, name) for t in expr.terms)
    if isinstance(expr, Product):
        return any(usesVariable(f, name) for f in expr.factors)
    if isinstance(expr, Scale):
        return usesVariable(expr.expr, name)
    return False


def isConstant(expr):
    """True for expressions that cannot depend on x"""
    return not usesVariable(expr, "x")
