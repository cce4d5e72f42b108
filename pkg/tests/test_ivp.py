import math

import numpy as np
import pytest

from gtaylor import gtCatalogue
from gtaylor.gtEnum import Direction, IntegratorMethod
from gtaylor.gtErrors import ArgumentError, ResourceError, StiffnessError
from gtaylor.gtIvp import (
    AdjointSlice,
    FundamentalSet,
    KernelSlice,
    SolveConfig,
    WronskianKernel,
    fundamentalFromAdjoint,
    integrate,
    kernelTable,
)

TWO_PI = 2 * math.pi


def test_config_validation():
    with pytest.raises(ArgumentError):
        SolveConfig(relTol=0.0)
    with pytest.raises(ArgumentError):
        SolveConfig(maxSteps=0)
    assert SolveConfig().tightened(10).relTol == pytest.approx(1e-11)


@pytest.mark.parametrize("method", [IntegratorMethod.RK45, IntegratorMethod.DOP853])
def test_integrate_forward_and_backward(harmonic, method):
    cfg = SolveConfig(method=method)
    fwd = integrate(harmonic.operator, 0.0, [1.0, 0.0], targetEnd=math.pi, cfg=cfg)
    back = integrate(harmonic.operator, 0.0, [1.0, 0.0], targetEnd=-math.pi, cfg=cfg)
    assert fwd.value(math.pi) == pytest.approx(-1.0, abs=1e-8)
    assert back.value(-math.pi) == pytest.approx(-1.0, abs=1e-8)
    assert fwd.direction is Direction.FORWARD
    assert back.direction is Direction.BACKWARD
    assert np.all(np.diff(back.nodePoints) < 0)
    assert np.all(np.diff(fwd.nodePoints) > 0)


def test_base_state_is_exact(harmonic):
    traj = integrate(harmonic.operator, 0.25, [0.1, 0.2], targetEnd=2.0)
    assert list(traj.state(0.25)) == [0.1, 0.2]


def test_jet_from_equation(harmonic):
    traj = integrate(harmonic.operator, 0.0, [1.0, 0.0], targetEnd=1.0)
    jet = traj.jetAt(0.6, 2)
    assert list(jet.values) == pytest.approx([math.cos(0.6), -math.sin(0.6), -math.cos(0.6)], abs=1e-9)
    with pytest.raises(ArgumentError):
        traj.jetAt(0.6, 3)


def test_outside_coverage(harmonic):
    traj = integrate(harmonic.operator, 0.0, [1.0, 0.0], targetEnd=1.0)
    with pytest.raises(ArgumentError):
        traj.value(1.5)


def test_step_budget(harmonic):
    with pytest.raises(ResourceError):
        integrate(harmonic.operator, 0.0, [1.0, 0.0], targetEnd=6.0, cfg=SolveConfig(maxSteps=3))


def test_minimum_step(harmonic):
    with pytest.raises(StiffnessError):
        integrate(harmonic.operator, 0.0, [1.0, 0.0], targetEnd=6.0, cfg=SolveConfig(minStep=1.0))


def test_harmonic_kernel_table(harmonic):
    grid = np.linspace(0.0, TWO_PI, 50)
    table = kernelTable(harmonic.operator, grid, grid)
    assert table.shape == (50, 50)
    np.testing.assert_allclose(table, np.sin(grid[:, None] - grid[None, :]), atol=1e-8)
    assert np.all(np.diag(table) == 0.0)


@pytest.mark.parametrize("name", ["harmonic", "hyperbolic", "quartic"])
def test_kernel_is_translation_invariant(name, tight):
    op = gtCatalogue.get(name).operator
    xs = np.linspace(-2.0, 1.0, 7)
    ss = np.linspace(-2.0, 1.0, 5)
    shift = 1.7
    base = kernelTable(op, xs, ss, tight)
    moved = kernelTable(op, xs + shift, ss + shift, tight)
    np.testing.assert_allclose(moved, base, atol=1e-8)


@pytest.mark.parametrize("name, end", [("harmonic", TWO_PI), ("hyperbolic", 2.0)])
def test_error_follows_tolerance(name, end):
    problem = gtCatalogue.get(name)
    xs = np.linspace(0.0, end, 200)
    exact = problem.closedForms.kernelValue(xs, 0.0)
    errors = []
    for relTol in (1e-5, 1e-7, 1e-9):
        cfg = SolveConfig(relTol=relTol, absTol=relTol * 1e-3)
        kernel = KernelSlice(problem.operator, 0.0, (0.0, end), cfg)
        errors.append(np.max(np.abs(kernel(xs) - exact)))
    assert errors[1] <= errors[0] / 10
    assert errors[2] <= errors[1] / 10


def test_harmonic_closed_forms(harmonic):
    xs = np.linspace(0.0, TWO_PI, 50)
    fs = FundamentalSet(harmonic.operator, 0.5, (0.0, TWO_PI))
    np.testing.assert_allclose(fs.values(xs), np.stack([np.cos(xs - 0.5), np.sin(xs - 0.5)], axis=1), atol=1e-8)
    np.testing.assert_array_equal(fs.wronskian(0.5), np.eye(2))
    phi = AdjointSlice(harmonic.operator, 1.0, (0.0, TWO_PI))
    np.testing.assert_allclose(phi(xs), -np.sin(1.0 - xs), atol=1e-8)


def test_quartic_closed_forms(quartic):
    forms = quartic.closedForms
    xs = np.linspace(0.0, TWO_PI, 50)
    kernel = KernelSlice(quartic.operator, 0.0, (0.0, TWO_PI))
    np.testing.assert_allclose(kernel(xs), forms.kernelValue(xs, 0.0), atol=1e-7)
    phi = AdjointSlice(quartic.operator, TWO_PI, (0.0, TWO_PI))
    np.testing.assert_allclose(phi(xs), forms.phiValue(TWO_PI, xs), atol=1e-7)
    fs = FundamentalSet(quartic.operator, 0.0, (0.0, TWO_PI))
    expected = np.stack(forms.fundamentalValues(xs, 0.0), axis=1)
    np.testing.assert_allclose(fs.values(xs), expected, atol=1e-7)


def test_quartic_kernel_vanishes_at_pi(quartic):
    kernel = KernelSlice(quartic.operator, 0.0, (0.0, 4.0))
    assert kernel(math.pi) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pure_derivative_kernel_is_monomial(n):
    op = gtCatalogue.get("pure_derivative_{}".format(n)).operator
    kernel = KernelSlice(op, -0.5, (-2.0, 2.0))
    xs = np.linspace(-2.0, 2.0, 21)
    expected = (xs + 0.5) ** (n - 1) / math.factorial(n - 1)
    np.testing.assert_allclose(kernel(xs), expected, atol=1e-10)


def test_two_sided_slice(hyperbolic):
    kernel = KernelSlice(hyperbolic.operator, 0.0, (-2.0, 2.0))
    assert kernel.trajectory.direction is Direction.BOTH
    xs = np.array([-2.0, -0.5, 0.0, 1.0, 2.0])
    np.testing.assert_allclose(kernel(xs), np.sinh(xs), rtol=1e-8, atol=1e-9)


def test_duality_variable_coefficients(variableOp):
    span = (-2.0, 2.0)
    for x, s in [(1.5, -1.0), (-1.2, 0.4), (0.3, 0.3), (-2.0, 2.0)]:
        forward = KernelSlice(variableOp, s, span)(x)
        backward = AdjointSlice(variableOp, x, span).kernel(s)
        assert forward == pytest.approx(backward, abs=1e-7)


def test_wronskian_kernel_matches_slices(variableOp):
    wk = WronskianKernel(FundamentalSet(variableOp, 0.0, (-2.0, 2.0)))
    xs = np.linspace(-2.0, 2.0, 7)
    for s in (-1.5, 0.0, 0.8):
        np.testing.assert_allclose(wk(xs, s), KernelSlice(variableOp, s, (-2.0, 2.0))(xs), atol=1e-7)
    assert isinstance(wk(1.0, 0.5), float)


@pytest.mark.parametrize("name", ["quartic", "hyperbolic", "pure_derivative_3"])
def test_fundamental_from_adjoint(name):
    op = gtCatalogue.get(name).operator
    fs = FundamentalSet(op, 0.0, (-2.0, 2.0))
    for x in (-1.7, 0.6, 2.0):
        assert fundamentalFromAdjoint(op, 0.0, x) == pytest.approx(list(fs.values(x)), abs=1e-7)


def test_fundamental_from_adjoint_variable(variableOp):
    fs = FundamentalSet(variableOp, 0.5, (-2.0, 2.0))
    for x in (-1.0, 1.9):
        assert fundamentalFromAdjoint(variableOp, 0.5, x) == pytest.approx(list(fs.values(x)), abs=1e-7)


def test_negated_prefactor_fails(harmonic):
    x = 1.0
    got = fundamentalFromAdjoint(harmonic.operator, 0.0, x, negated=True)
    assert got == pytest.approx([-math.cos(x), -math.sin(x)], abs=1e-7)
    assert abs(got[0] - math.cos(x)) > 1e-3


def test_fundamental_from_adjoint_at_base_point(quartic):
    assert fundamentalFromAdjoint(quartic.operator, 0.3, 0.3) == [1.0, 0.0, 0.0, 0.0]
