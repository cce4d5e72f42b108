"""
Command line front end::

    gt kernel      --name harmonic --grid 0:2*pi:9 --sgrid 0 --out kernel.csv
    gt fundamental --problem problem.json --grid=-1:1:21
    gt expand      --name quartic --grid=-2:2:9 --test exp
    gt solve       --name harmonic --grid pi/2
    gt volterra    --name cosh_ide --end 1 --steps 200
    gt verify      harmonic
    gt examples    --out problems/

CSV goes to --out (written atomically) or to standard output.
"""

import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import gtCatalogue, tools
from .gtEnum import CheckStatus, ExitCode
from .gtErrors import ArgumentError, CapabilityError, NumericalError, SchemaError, UnknownProblemError
from .gtExpansion import cauchySolve, directSolve, reconstruct
from .gtIvp import DEFAULT_CONFIG, FundamentalSet, SolveConfig, kernelTable
from .gtLib import formatFloat, parseGrid, parseScalar, spanOf
from .gtProblem import dumpProblem, loadProblem, toNamedProblem
from .gtQuad import DEFAULT_TOL
from .gtVolterra import IntegroDifferentialProblem, reduce, solveIdeDirect, solveVolterra

log = logging.getLogger(__name__)


def _emit(args, header, rows):
    if args.out:
        tools.writeCsv(args.out, header, rows)
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([formatFloat(v) for v in row])


def _resolve(args, target=None):
    """Problem, solver configuration and quadrature tolerance for a command"""
    tolerances = None
    if target is not None:
        source = target if os.path.exists(target) or target.endswith(".json") else None
    else:
        source = args.problem
    if source is not None:
        pf = loadProblem(source)
        problem = toNamedProblem(pf, os.path.splitext(os.path.basename(source))[0])
        tolerances = pf.tolerances
    else:
        name = target or args.name
        if name is None:
            raise ArgumentError("one of --problem or --name is required")
        problem = gtCatalogue.get(name)

    if args.x0 is not None:
        problem.operator.checkPoint("x0", args.x0)
        problem.x0 = args.x0
        if problem.ide is not None:
            ide = problem.ide
            problem.ide = IntegroDifferentialProblem(ide.operator, ide.memoryKernel, ide.forcing, args.x0, ide.init, ide.name)

    def pick(flag, fileValue, default):
        if flag is not None:
            return flag
        return fileValue if fileValue is not None else default

    rtol = pick(args.rtol, tolerances.rtol if tolerances else None, DEFAULT_CONFIG.relTol)
    atol = pick(args.atol, tolerances.atol if tolerances else None, DEFAULT_CONFIG.absTol)
    qtol = pick(args.qtol, tolerances.qtol if tolerances else None, DEFAULT_TOL)
    return problem, SolveConfig(relTol=rtol, absTol=atol), qtol


def _grid(spec, problem):
    if spec is None:
        hi = problem.operator.domain[1]
        return np.linspace(problem.x0, min(hi, problem.x0 + 1.0), 11)
    points = parseGrid(spec)
    for x in points:
        problem.operator.checkPoint("grid point", x)
    return points


def cmdKernel(args):
    problem, cfg, _ = _resolve(args)
    xs = _grid(args.grid, problem)
    ss = _grid(args.sgrid, problem) if args.sgrid else xs
    table = kernelTable(problem.operator, xs, ss, cfg)
    _emit(args, ["x", "s", "K"], [(x, s, table[i, j]) for i, x in enumerate(xs) for j, s in enumerate(ss)])
    return ExitCode.SUCCESS


def cmdFundamental(args):
    problem, cfg, _ = _resolve(args)
    xs = _grid(args.grid, problem)
    fs = FundamentalSet(problem.operator, problem.x0, spanOf(problem.x0, *xs), cfg)
    values = fs.values(xs)
    header = ["x"] + ["y{}".format(i) for i in range(1, problem.operator.order + 1)]
    _emit(args, header, [(x,) + tuple(values[i]) for i, x in enumerate(xs)])
    return ExitCode.SUCCESS


def cmdExpand(args):
    problem, cfg, qtol = _resolve(args)
    if not problem.testFunctions:
        raise ArgumentError("problem {} has no test_function".format(problem.name))
    label = args.test or next(iter(problem.testFunctions))
    if label not in problem.testFunctions:
        raise ArgumentError(
            "unknown test function {!r}; available: {}".format(label, ", ".join(problem.testFunctions))
        )
    y = problem.testFunctions[label]
    rows = []
    for x in _grid(args.grid, problem):
        r = reconstruct(problem.operator, y, problem.x0, x, cfg, qtol)
        rows.append((x, r.initialDataPart, r.remainderPart, r.total, r.referenceValue, r.discrepancy))
    _emit(args, ["x", "initial_part", "remainder", "total", "reference", "discrepancy"], rows)
    return ExitCode.SUCCESS


def cmdSolve(args):
    problem, cfg, qtol = _resolve(args)
    xs = _grid(args.grid, problem)
    if args.direct:
        values = directSolve(problem.operator, problem.forcing, problem.x0, problem.init, xs, cfg)
    else:
        values = cauchySolve(problem.operator, problem.forcing, problem.x0, problem.init, xs, cfg, qtol)
    _emit(args, ["x", "Y"], list(zip(xs, values)))
    return ExitCode.SUCCESS


def cmdVolterra(args):
    problem, cfg, qtol = _resolve(args)
    if problem.ide is None:
        raise ArgumentError("problem {} has no memory_kernel".format(problem.name))
    end = problem.x0 + 1.0 if args.end is None else args.end
    problem.operator.checkPoint("end", end)
    vp = reduce(problem.ide, spanOf(problem.x0, end), cfg, qtol)
    viaVolterra = solveVolterra(vp, end, args.steps)
    direct = solveIdeDirect(problem.ide, end, args.steps, args.debug)
    diff = np.abs(viaVolterra.values - direct.values)
    log.info("volterra estimate %.3g, direct estimate %.3g", viaVolterra.errorEstimate, direct.errorEstimate)
    _emit(
        args,
        ["x", "y_volterra", "y_direct", "diff"],
        list(zip(viaVolterra.nodes, viaVolterra.values, direct.values, diff)),
    )
    return ExitCode.SUCCESS


def cmdVerify(args):
    problem, cfg, qtol = _resolve(args, args.target)
    results = tools.runSuites(problem, cfg, qtol, args.seed, args.suite)
    print("verify {} (seed {})".format(problem.name, args.seed))
    for result in results:
        print(result.line())
    passed = sum(1 for r in results if r.status is CheckStatus.PASS)
    print("{}/{} passed".format(passed, len(results)))
    return ExitCode.SUCCESS if passed == len(results) else ExitCode.VERIFY_FAILURE


def cmdExamples(args):
    for name in gtCatalogue.names():
        problem = gtCatalogue.get(name)
        print("{:<18} {}".format(name, problem.description))
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            tools.writeText(os.path.join(args.out, name + ".json"), dumpProblem(problem))
    return ExitCode.SUCCESS


def _scalarArg(text):
    try:
        return parseScalar(text)
    except ArgumentError as err:
        raise argparse.ArgumentTypeError(str(err))


def buildParser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--problem", metavar="<path>", help="JSON problem file")
    source.add_argument("--name", metavar="<catalogue>", help="catalogue entry, see `gt examples`")
    common.add_argument("--grid", metavar="a:b:n", help="evaluation grid (inclusive) or a single point")
    common.add_argument("--x0", type=_scalarArg, help="override the base point")
    common.add_argument("--out", metavar="<path>", help="output file (default: standard output)")
    common.add_argument("--rtol", type=float, help="IVP relative tolerance")
    common.add_argument("--atol", type=float, help="IVP absolute tolerance")
    common.add_argument("--qtol", type=float, help="quadrature tolerance")
    common.add_argument("--debug", action="store_true", help="log solver detail")

    parser = argparse.ArgumentParser(prog="gt", description="Generalized Taylor expansions of linear operators")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", parents=[common], help="table of K(x, s)")
    p.add_argument("--sgrid", metavar="a:b:n", help="source grid (default: --grid)")
    p.set_defaults(func=cmdKernel)

    p = sub.add_parser("fundamental", parents=[common], help="fundamental set y1..yn")
    p.set_defaults(func=cmdFundamental)

    p = sub.add_parser("expand", parents=[common], help="reconstruct a test function")
    p.add_argument("--test", metavar="<label>", help="test function label (default: the first)")
    p.set_defaults(func=cmdExpand)

    p = sub.add_parser("solve", parents=[common], help="nonhomogeneous solution by the Cauchy formula")
    p.add_argument("--direct", action="store_true", help="integrate the forced IVP instead")
    p.set_defaults(func=cmdSolve)

    p = sub.add_parser("volterra", parents=[common], help="integro-differential problem, both solvers")
    p.add_argument("--end", type=_scalarArg, help="last grid point (default: x0 + 1)")
    p.add_argument("--steps", type=int, default=200, help="grid intervals (default: 200)")
    p.set_defaults(func=cmdVolterra)

    p = sub.add_parser(
        "verify", parents=[common], help="run the verification suites", description="Randomized checks use --seed."
    )
    p.add_argument("target", nargs="?", help="problem file or catalogue name")
    p.add_argument("--seed", type=int, default=tools.SEED, help="random seed (default: %(default)s)")
    p.add_argument("--suite", action="append", choices=sorted(tools.SUITES), help="run only this suite")
    p.set_defaults(func=cmdVerify)

    p = sub.add_parser("examples", parents=[common], help="list catalogue entries or write them as problem files")
    p.set_defaults(func=cmdExamples)
    return parser


def main(argv=None):
    """Entry point of the ``gt`` console script

    :return: process exit code
    """
    args = buildParser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.WARNING, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        code = args.func(args)
    except (SchemaError, ArgumentError, UnknownProblemError) as err:
        print("gt: error: {}".format(err), file=sys.stderr)
        code = ExitCode.INPUT_ERROR
    except (NumericalError, CapabilityError) as err:
        print("gt: numerical failure: {}".format(err), file=sys.stderr)
        code = ExitCode.NUMERICAL_FAILURE
    return code.value


if __name__ == "__main__":
    sys.exit(main())
