import math

import numpy as np
import pytest

from gtaylor.gtErrors import ArgumentError, EvaluationError
from gtaylor.gtLib import binomial, checkFinite, finiteDifference, formatFloat, parseGrid, parseScalar, spanOf


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1.5", 1.5),
        ("-3/4", -0.75),
        ("pi", math.pi),
        ("pi/2", math.pi / 2),
        ("2*pi", 2 * math.pi),
        ("-3pi/4", -3 * math.pi / 4),
    ],
)
def test_parse_scalar(text, expected):
    assert parseScalar(text) == pytest.approx(expected, rel=1e-15)


def test_parse_scalar_rejects_garbage():
    with pytest.raises(ArgumentError):
        parseScalar("two")


def test_parse_grid_inclusive():
    grid = parseGrid("0:1:5")
    assert list(grid) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert list(parseGrid("pi/2")) == [math.pi / 2]


@pytest.mark.parametrize("spec", ["0:1", "0:1:x", "0:1:0"])
def test_parse_grid_errors(spec):
    with pytest.raises(ArgumentError):
        parseGrid(spec)


def test_binomial_and_span():
    assert binomial(5, 2) == 10
    assert binomial(3, 4) == 0
    assert spanOf(2.0, -1.0, 0.5) == (-1.0, 2.0)


def test_finite_difference_second_derivative():
    assert finiteDifference(np.sin, 0.7, 2) == pytest.approx(-math.sin(0.7), abs=1e-6)


def test_check_finite():
    assert checkFinite("v", 0.0, 2) == 2.0
    with pytest.raises(EvaluationError) as err:
        checkFinite("coefficient", 1.5, float("nan"))
    assert err.value.point == 1.5


def test_format_float_17_digits():
    assert formatFloat(math.sin(1.0)) == "0.8414709848078965"
    assert formatFloat(1.0) == "1"
