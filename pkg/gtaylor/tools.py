"""
Verification suites and CSV output shared by the command line front end
"""

import csv
import logging
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .gtCatalogue import checkDefiningJets
from .gtEnum import CheckStatus
from .gtExpansion import cauchySolve, directSolve, reconstruct
from .gtExpr import Const, Func, Poly
from .gtIvp import DEFAULT_CONFIG, AdjointSlice, FundamentalSet, KernelSlice, WronskianKernel, fundamentalFromAdjoint
from .gtLib import formatFloat, spanOf
from .gtOperator import Jet, SmoothFunction, applyAdjoint, applyForward, lagrangeResidual
from .gtQuad import DEFAULT_TOL
from .gtVolterra import crossValidate, reduce, solveIdeDirect, solveVolterra

log = logging.getLogger(__name__)

SEED = 20160811
RADIUS = 2.0


@dataclass
class CheckResult:
    """Outcome of one verification suite

    :param name: Suite name
    :param status: PASS or FAIL
    :param measured: Worst measured residual
    :param tolerance: Bound the residual was held to
    :param detail: Extra text for the report
    """

    name: str
    status: CheckStatus
    measured: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self):
        return self.status is CheckStatus.PASS

    def line(self):
        text = "{:<4} {:<20} measured={:.3e} tol={:.1e}".format(
            self.status.name, self.name, self.measured, self.tolerance
        )
        return text + ("  " + self.detail if self.detail else "")


def _result(name, measured, tolerance, detail="", ok=None):
    ok = measured <= tolerance if ok is None else ok
    return CheckResult(name, CheckStatus.PASS if ok else CheckStatus.FAIL, float(measured), tolerance, detail)


def writeCsv(path, header, rows):
    """Write rows atomically (temporary file in the target directory, then rename)

    Floats are written in their shortest round-trip form, lines end with LF.

    :param path: Destination file
    :type path: str
    :param header: Column names
    :type header: list
    :param rows: Iterable of row sequences
    :type rows: iterable
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gt-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([formatFloat(v) if isinstance(v, (float, np.floating)) else v for v in row])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    log.debug("wrote %s", path)


def writeText(path, text):
    """Write a text file atomically"""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gt-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def localSpan(problem):
    """Part of the domain within RADIUS of x0"""
    lo, hi = problem.operator.domain
    return (max(lo, problem.x0 - RADIUS), min(hi, problem.x0 + RADIUS))


def samplePoints(problem, rng, count, margin=0.0, bothSides=True):
    """Random points near x0, half on each side when bothSides is set"""
    lo, hi = problem.operator.domain
    x0 = problem.x0
    left = (max(lo + margin, x0 - RADIUS), x0)
    right = (x0, min(hi - margin, x0 + RADIUS))
    if not bothSides:
        return rng.uniform(left[0], right[1], count)
    below = count // 2 if left[1] > left[0] else 0
    points = list(rng.uniform(*left, below)) if below else []
    points += list(rng.uniform(*right, count - below))
    return np.array([p for p in points if p != x0] or [right[1]])


def testFunctions(problem):
    """The problem's test functions, topped up with exp, sin and a quintic to at least three"""
    fns = dict(problem.testFunctions)
    defaults = (
        ("exp", Func("exp")),
        ("sin", Func("sin", 1.3, 0.2)),
        ("poly5", Poly([0.5, -1.0, 0.25, 0.1, -0.05, 0.01])),
    )
    for label, expr in defaults:
        if len(fns) >= 3:
            break
        fns.setdefault(label, SmoothFunction.fromExpr(expr, label))
    return fns


def _scaled(err, ref):
    return err / max(1.0, abs(ref))


def checkLagrange(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Centered-difference residual of the Lagrange identity and its h^2 decay"""
    op = problem.operator
    fns = list(testFunctions(problem).values())
    pairs = [(fns[0], fns[1]), (fns[1], fns[2]), (fns[2], fns[0])]
    worst, minRatio = 0.0, np.inf
    for x in samplePoints(problem, rng, 2, margin=0.1, bothSides=False):
        for y, z in pairs:
            worst = max(worst, lagrangeResidual(op, y, z, x, 1e-4))
            coarse = lagrangeResidual(op, y, z, x, 1e-2)
            if coarse > 1e-9:
                minRatio = min(minRatio, coarse / lagrangeResidual(op, y, z, x, 5e-3))
    ok = worst <= 1e-6 and minRatio >= 3.5
    detail = "min decay ratio {:.2f}".format(minRatio) if np.isfinite(minRatio) else "residual at roundoff"
    return _result("lagrange", worst, 1e-6, detail, ok)


def checkAdjointLeibniz(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Expanded adjoint against the normal form used by the adjoint solver"""
    op = problem.operator
    n = op.order
    worst = 0.0
    for x in samplePoints(problem, rng, 4, bothSides=False):
        for z in testFunctions(problem).values():
            jet = z.jet(x, n)
            b = op.adjointCoefficients(x)
            normal = (-1) ** n * (jet[n] + sum(b[m] * jet[m] for m in range(n)))
            value = applyAdjoint(op, jet)
            worst = max(worst, _scaled(abs(value - normal), value))
    return _result("adjoint_leibniz", worst, 1e-9)


def checkKernelJets(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Unit jet of K(., s) at x = s and K values against an independent source"""
    op = problem.operator
    n = op.order
    span = localSpan(problem)
    forms = problem.closedForms
    wk = None if forms is not None else WronskianKernel(FundamentalSet(op, problem.x0, span, cfg))
    worst = 0.0
    for s in samplePoints(problem, rng, 3, bothSides=False):
        kernel = KernelSlice(op, s, span, cfg)
        unit = [0.0] * (n - 1) + [1.0]
        worst = max(worst, max(abs(a - b) for a, b in zip(kernel.jetAt(s).values, unit)))
        for x in samplePoints(problem, rng, 4, bothSides=False):
            ref = forms.kernelValue(x, s) if forms is not None else wk(x, s)
            worst = max(worst, _scaled(abs(kernel(x) - float(ref)), ref))
    return _result("kernel_jets", worst, 1e-7, "closed form" if forms is not None else "wronskian")


def checkFundamentalJets(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Kronecker data at x0 and, for catalogue entries, agreement with the closed forms"""
    op = problem.operator
    n = op.order
    fs = FundamentalSet(op, problem.x0, localSpan(problem), cfg)
    worst = float(np.max(np.abs(fs.wronskian(problem.x0) - np.eye(n))))
    forms = problem.closedForms
    if forms is not None:
        for x in samplePoints(problem, rng, 6):
            ref = forms.fundamentalValues(x, problem.x0)
            got = fs.values(x)
            worst = max(worst, max(_scaled(abs(a - float(b)), b) for a, b in zip(got, ref)))
    return _result("fundamental_jets", worst, 1e-7)


def checkDuality(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Forward kernel slices against backward adjoint slices on a 10 x 10 sample"""
    op = problem.operator
    xs = samplePoints(problem, rng, 10, bothSides=False)
    ss = samplePoints(problem, rng, 10, bothSides=False)
    span = spanOf(*xs, *ss)
    forward = np.array([KernelSlice(op, s, span, cfg)(xs) for s in ss]).T
    backward = np.array([AdjointSlice(op, x, span, cfg).kernel(ss) for x in xs])
    worst = float(np.max(np.abs(forward - backward) / np.maximum(1.0, np.abs(forward))))
    return _result("duality", worst, 1e-7)


def checkAdjointSign(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Fundamental set recovered from the adjoint slice; the (-1)^n prefactor must fail"""
    op = problem.operator
    x0 = problem.x0
    fs = FundamentalSet(op, x0, localSpan(problem), cfg)
    worst, negatedGap = 0.0, 0.0
    for x in samplePoints(problem, rng, 5):
        ref = fs.values(x)
        got = fundamentalFromAdjoint(op, x0, x, cfg)
        flipped = fundamentalFromAdjoint(op, x0, x, cfg, negated=True)
        worst = max(worst, max(_scaled(abs(a - b), b) for a, b in zip(got, ref)))
        negatedGap = max(negatedGap, max(abs(a - b) for a, b in zip(flipped, ref)))
    ok = worst <= 1e-7 and negatedGap > 1e-3
    return _result("adjoint_sign", worst, 1e-7, "(-1)^n prefactor gap {:.3e}".format(negatedGap), ok)


def checkReconstruction(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Generalized Taylor identity for every test function on both sides of x0"""
    op = problem.operator
    tol = max(1e-7, 50 * qtol)
    worst = 0.0
    points = samplePoints(problem, rng, 4)
    for label, y in testFunctions(problem).items():
        for x in points:
            report = reconstruct(op, y, problem.x0, x, cfg, qtol)
            worst = max(worst, _scaled(report.discrepancy, report.referenceValue))
    return _result("reconstruction", worst, tol)


def checkCauchyConsistency(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Cauchy formula against a direct forced IVP solve"""
    op = problem.operator
    forcing = problem.forcing if problem.forcing is not None else Const(1.0)
    targets = samplePoints(problem, rng, 4)
    viaKernel = cauchySolve(op, forcing, problem.x0, problem.init, targets, cfg, qtol)
    direct = directSolve(op, forcing, problem.x0, problem.init, targets, (cfg or DEFAULT_CONFIG).tightened(10))
    worst = float(np.max(np.abs(viaKernel - direct) / np.maximum(1.0, np.abs(direct))))
    return _result("cauchy_consistency", worst, 1e-7)


def checkClosedForms(problem, rng, cfg=None, qtol=DEFAULT_TOL):
    """Closed forms satisfy their defining jets and their differential equations"""
    op = problem.operator
    n = op.order
    forms = problem.closedForms
    worst = max(checkDefiningJets(problem, p) for p in rng.uniform(*op.domain, 5))
    jetWorst = worst
    lo, hi = op.domain
    for _ in range(20):
        x, s = rng.uniform(lo, hi, 2)
        residuals = [applyForward(op, Jet(x, tuple(forms.kernelJet(x, s, n))))]
        residuals.append(applyAdjoint(op, Jet(s, tuple(forms.phiJet(x, s, n)))))
        x0 = problem.x0
        residuals += [applyForward(op, Jet(x, tuple(forms.fundamentalJet(i, x, x0, n)))) for i in range(n)]
        worst = max(worst, max(abs(r) for r in residuals))
    ok = jetWorst <= 1e-12 and worst <= 1e-10
    return _result("closed_forms", worst, 1e-10, "jets {:.1e}".format(jetWorst), ok)


def checkVolterra(problem, rng, cfg=None, qtol=DEFAULT_TOL, end=None, steps=200):
    """Both integro-differential solvers against the exact solution (or each other)"""
    ide = problem.ide
    end = problem.x0 + 1.0 if end is None else end
    if problem.exact is None:
        diff = crossValidate(ide, end, steps, cfg, qtol)
        return _result("volterra", diff, 1e-4, "cross-validation only")
    vp = reduce(ide, spanOf(ide.x0, end), cfg, qtol)
    viaVolterra = solveVolterra(vp, end, steps)
    direct = solveIdeDirect(ide, end, steps)
    exact = np.asarray(problem.exact(viaVolterra.nodes), dtype=float)
    errV = float(np.max(np.abs(viaVolterra.values - exact)))
    errD = float(np.max(np.abs(direct.values - exact)))
    diff = float(np.max(np.abs(viaVolterra.values - direct.values)))
    worst = max(errV, errD, diff)
    return _result("volterra", worst, 1e-4, "volterra {:.2e} direct {:.2e}".format(errV, errD))


SUITES = {
    "lagrange": checkLagrange,
    "adjoint_leibniz": checkAdjointLeibniz,
    "kernel_jets": checkKernelJets,
    "fundamental_jets": checkFundamentalJets,
    "duality": checkDuality,
    "adjoint_sign": checkAdjointSign,
    "reconstruction": checkReconstruction,
    "cauchy_consistency": checkCauchyConsistency,
    "closed_forms": checkClosedForms,
    "volterra": checkVolterra,
}


def applicableSuites(problem):
    """Suite names that make sense for the problem"""
    names = list(SUITES)
    if problem.closedForms is None:
        names.remove("closed_forms")
    if problem.ide is None:
        names.remove("volterra")
    return names


def runSuites(problem, cfg=None, qtol=DEFAULT_TOL, seed=SEED, only=None):
    """Run every applicable suite with a seeded generator

    :param problem: Problem to verify
    :type problem: NamedProblem
    :param only: Restrict to these suite names
    :type only: list

    :return: list of :class:`CheckResult`
    """
    rng = np.random.default_rng(seed)
    results = []
    for name in applicableSuites(problem):
        if only and name not in only:
            continue
        result = SUITES[name](problem, rng, cfg, qtol)
        log.info("%s", result.line())
        results.append(result)
    return results
