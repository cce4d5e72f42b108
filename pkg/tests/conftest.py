import numpy as np
import pytest

from gtaylor import gtCatalogue
from gtaylor.gtExpr import Func, Poly
from gtaylor.gtIvp import SolveConfig
from gtaylor.gtOperator import CoefficientBundle, LinearOperator


@pytest.fixture
def harmonic():
    return gtCatalogue.get("harmonic")


@pytest.fixture
def hyperbolic():
    return gtCatalogue.get("hyperbolic")


@pytest.fixture
def quartic():
    return gtCatalogue.get("quartic")


@pytest.fixture
def tight():
    return SolveConfig(relTol=1e-12, absTol=1e-14)


@pytest.fixture
def variableOp():
    """y'' + (x/4) y' + cos(x) y on [-3, 3]"""
    domain = (-3.0, 3.0)
    bundles = [
        CoefficientBundle.fromExpr(Poly([0.0, 0.25]), domain),
        CoefficientBundle.fromExpr(Func("cos"), domain),
    ]
    return LinearOperator(2, bundles, domain, "variable")


@pytest.fixture
def rng():
    return np.random.default_rng(20160811)