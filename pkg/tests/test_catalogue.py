import math

import numpy as np
import pytest

from gtaylor import gtCatalogue, tools
from gtaylor.gtErrors import UnknownProblemError


def test_names():
    names = gtCatalogue.names()
    assert names[:3] == ["harmonic", "hyperbolic", "quartic"]
    assert "pure_derivative_4" in names
    assert names[-2:] == ["cosh_ide", "harmonic_ide"]
    for name in names:
        assert gtCatalogue.get(name).name == name


def test_unknown_name():
    with pytest.raises(UnknownProblemError) as info:
        gtCatalogue.get("anharmonic")
    assert "harmonic" in str(info.value)
    assert isinstance(info.value, KeyError)


@pytest.mark.parametrize("name", ["pure_derivative_0", "pure_derivative_13"])
def test_pure_derivative_order_range(name):
    with pytest.raises(UnknownProblemError):
        gtCatalogue.get(name)


def test_unlisted_pure_derivative():
    problem = gtCatalogue.get("pure_derivative_12")
    assert problem.operator.order == 12
    assert gtCatalogue.checkDefiningJets(problem, 0.0) <= 1e-12


@pytest.mark.parametrize("name", gtCatalogue.names())
def test_defining_jets(name):
    problem = gtCatalogue.get(name)
    for point in (-3.0, 0.0, 2.5):
        assert gtCatalogue.checkDefiningJets(problem, point) <= 1e-12


@pytest.mark.parametrize("name", gtCatalogue.names())
def test_closed_forms_satisfy_their_equations(name, rng):
    result = tools.checkClosedForms(gtCatalogue.get(name), rng)
    assert result.passed, result.line()


def test_harmonic_shapes():
    forms = gtCatalogue.get("harmonic").closedForms
    assert forms.kernelValue(1.0, 0.0) == pytest.approx(math.sin(1.0), abs=1e-15)
    assert forms.phiValue(1.0, 0.0) == pytest.approx(-math.sin(1.0), abs=1e-15)
    assert forms.fundamentalValues(0.5, 0.0) == pytest.approx([math.cos(0.5), math.sin(0.5)])


def test_quartic_kernel_zero_at_pi():
    forms = gtCatalogue.get("quartic").closedForms
    assert forms.kernelValue(math.pi, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_phi_jet_is_derivative_in_s():
    forms = gtCatalogue.get("hyperbolic").closedForms
    x, s = 0.9, 0.2
    # phi(x, s) = -sinh(x - s), so d/ds phi = cosh(x - s)
    assert forms.phiJet(x, s, 1) == pytest.approx([-math.sinh(0.7), math.cosh(0.7)])


def test_ide_entries_have_exact_solutions():
    for name in ("cosh_ide", "harmonic_ide"):
        problem = gtCatalogue.get(name)
        assert problem.ide is not None
        assert problem.exact(np.array([0.0]))[0] == 1.0


def test_fresh_instances():
    a = gtCatalogue.get("harmonic")
    a.x0 = 1.0
    assert gtCatalogue.get("harmonic").x0 == 0.0
