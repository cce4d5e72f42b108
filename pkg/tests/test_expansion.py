import math

import numpy as np
import pytest

from gtaylor import gtCatalogue
from gtaylor.gtEnum import RemainderPath
from gtaylor.gtErrors import ArgumentError, CapabilityError
from gtaylor.gtExpansion import SmoothFunction, cauchySolve, classicalTaylor, directSolve, reconstruct
from gtaylor.gtExpr import Const, Func, Poly
from gtaylor.gtIvp import AdjointSlice, KernelSlice
from gtaylor.gtOperator import CoefficientBundle, LinearOperator


def test_harmonic_exp(harmonic):
    report = reconstruct(harmonic.operator, harmonic.testFunctions["exp"], 0.0, 1.0)
    assert report.total == pytest.approx(math.e, abs=1e-8)
    assert report.discrepancy <= 1e-8
    assert report.initialDataPart == pytest.approx(math.cos(1) + math.sin(1), abs=1e-9)
    assert report.remainderPart == pytest.approx(math.e - math.sin(1) - math.cos(1), abs=1e-8)
    assert report.total == report.initialDataPart + report.remainderPart
    assert report.path is RemainderPath.ADJOINT


def test_homogeneous_solution_has_no_remainder(harmonic):
    report = reconstruct(harmonic.operator, SmoothFunction.fromExpr(Func("cos")), 0.0, 2.5)
    assert abs(report.remainderPart) <= 1e-12
    assert report.total == pytest.approx(math.cos(2.5), abs=1e-8)


def test_base_point_is_exact(quartic):
    y = quartic.testFunctions["sin"]
    report = reconstruct(quartic.operator, y, 0.4, 0.4)
    assert report.initialDataPart == y(0.4)
    assert report.remainderPart == 0.0
    assert report.discrepancy == 0.0


def test_left_of_base_point(harmonic):
    report = reconstruct(harmonic.operator, harmonic.testFunctions["exp"], 0.0, -1.5)
    assert report.discrepancy <= 1e-7


@pytest.mark.parametrize("path", [RemainderPath.FORWARD, RemainderPath.WRONSKIAN, RemainderPath.AUTO])
def test_remainder_paths_agree(variableOp, path):
    y = SmoothFunction.fromExpr(Func("sin", 1.3, 0.2))
    reference = reconstruct(variableOp, y, 0.2, 1.4)
    other = reconstruct(variableOp, y, 0.2, 1.4, path=path)
    assert other.total == pytest.approx(reference.total, abs=1e-7)
    assert other.discrepancy <= 1e-7


def _valueOnlyOperator(allowFallback):
    domain = (-2.0, 2.0)
    bundles = [
        CoefficientBundle(lambda x: 0.5 + 0.1 * x, None, 0, domain, allowFallback=allowFallback),
        CoefficientBundle.constant(1.0, domain),
    ]
    return LinearOperator(2, bundles, domain)


def test_default_path_falls_back_to_forward():
    op = _valueOnlyOperator(allowFallback=False)
    y = SmoothFunction.fromExpr(Func("exp"))
    with pytest.raises(CapabilityError):
        reconstruct(op, y, 0.0, 1.0, path=RemainderPath.ADJOINT)
    report = reconstruct(op, y, 0.0, 1.0)
    assert report.path is RemainderPath.FORWARD
    assert not report.usedFallback
    assert report.discrepancy <= 1e-7
    targets = np.array([-0.8, 1.2])
    viaKernel = cauchySolve(op, Const(1.0), 0.0, [0.5, -1.0], targets)
    direct = directSolve(op, Const(1.0), 0.0, [0.5, -1.0], targets)
    np.testing.assert_allclose(viaKernel, direct, atol=1e-7)


def test_finite_difference_use_is_reported(harmonic):
    op = _valueOnlyOperator(allowFallback=True)
    report = reconstruct(op, SmoothFunction.fromExpr(Func("exp")), 0.0, 1.0)
    assert report.path is RemainderPath.ADJOINT
    assert report.usedFallback
    assert report.discrepancy <= 1e-7
    assert AdjointSlice(op, 1.0, (0.0, 1.0)).usedFallback
    assert not KernelSlice(op, 0.0, (0.0, 1.0)).usedFallback
    assert not reconstruct(harmonic.operator, harmonic.testFunctions["exp"], 0.0, 1.0).usedFallback


def test_classical_cubic():
    report = classicalTaylor(SmoothFunction.fromExpr(Poly([0, 0, 0, 1])), 0.0, 2.0, 2)
    assert report.initialDataPart == 0.0
    assert report.remainderPart == pytest.approx(8.0, abs=1e-10)
    assert report.total == pytest.approx(8.0, abs=1e-10)


def test_classical_low_degree_polynomial():
    report = classicalTaylor(SmoothFunction.fromExpr(Poly([1, 2, 3])), 0.5, 1.7, 4)
    assert abs(report.remainderPart) <= 1e-13


def test_classical_exp():
    report = classicalTaylor(SmoothFunction.fromExpr(Func("exp")), 0.0, 1.0, 3)
    assert report.total == pytest.approx(math.e, abs=1e-10)


def test_classical_order_range():
    with pytest.raises(ArgumentError):
        classicalTaylor(SmoothFunction.fromExpr(Func("exp")), 0.0, 1.0, 13)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("label", ["exp", "poly5"])
def test_pure_derivative_degenerates_to_taylor(n, label):
    problem = gtCatalogue.get("pure_derivative_{}".format(n))
    y = problem.testFunctions[label]
    for x in (-1.1, 1.3):
        general = reconstruct(problem.operator, y, 0.0, x)
        classical = classicalTaylor(y, 0.0, x, n)
        assert general.total == pytest.approx(classical.total, abs=1e-9)


def test_cauchy_constant_forcing(harmonic):
    targets = np.array([math.pi / 2, 1.0, -2.0])
    values = cauchySolve(harmonic.operator, Const(1.0), 0.0, [0.0, 0.0], targets)
    assert values[0] == pytest.approx(1.0, abs=1e-8)
    np.testing.assert_allclose(values, 1.0 - np.cos(targets), atol=1e-8)


def test_cauchy_homogeneous_part(harmonic):
    targets = np.array([0.0, 0.7, -1.2])
    values = cauchySolve(harmonic.operator, None, 0.0, [1.0, 2.0], targets)
    np.testing.assert_allclose(values, np.cos(targets) + 2 * np.sin(targets), atol=1e-8)
    assert values[0] == 1.0


def test_cauchy_pure_derivative():
    op = gtCatalogue.get("pure_derivative_2").operator
    targets = np.array([0.5, 1.5, -1.0])
    values = cauchySolve(op, Const(2.0), 0.0, [0.0, 0.0], targets)
    np.testing.assert_allclose(values, targets**2, atol=1e-10)


@pytest.mark.parametrize("name", ["harmonic", "hyperbolic", "quartic", "pure_derivative_3"])
def test_cauchy_agrees_with_direct_solve(name, tight):
    problem = gtCatalogue.get(name)
    init = [1.0] + [0.0] * (problem.operator.order - 1)
    targets = np.array([-1.3, 0.4, 1.8])
    viaKernel = cauchySolve(problem.operator, Const(1.0), 0.0, init, targets)
    direct = directSolve(problem.operator, Const(1.0), 0.0, init, targets, tight)
    np.testing.assert_allclose(viaKernel, direct, atol=1e-7)


def test_linearity(quartic):
    exp, sin = quartic.testFunctions["exp"], quartic.testFunctions["sin"]
    x = 1.1
    both = reconstruct(quartic.operator, exp + sin, 0.0, x)
    bound = reconstruct(quartic.operator, exp, 0.0, x).discrepancy + reconstruct(quartic.operator, sin, 0.0, x).discrepancy
    assert both.discrepancy <= bound + 1e-9


@pytest.mark.parametrize("name", gtCatalogue.names())
def test_reconstruction_identity_over_catalogue(name):
    problem = gtCatalogue.get(name)
    for label, y in problem.testFunctions.items():
        for x in (problem.x0 - 1.3, problem.x0 + 0.9):
            report = reconstruct(problem.operator, y, problem.x0, x)
            assert report.discrepancy <= 1e-7 * max(1.0, abs(report.referenceValue)), (label, x)
