"""Command-line interface.

Exit status: 0 on success, 2 on invalid input (error JSON on stderr), 3 on
I/O failure, 4 when an iterative solver does not converge.
"""

import argparse
import json
import sys

from . import serialize as ser
from .design import inscribed_matter_design, optimize_source_exact, optimize_source_gradient
from .distributions import ClassicalDistribution, DensityOperator, classical_to_density
from .divergences import stein_rate_curve
from .errors import SolverError, ValidationError
from .hyptest import solve_classical, solve_composite, solve_quantum
from .plotting import plot_svg
from .workflows import (
    LASER_HEADER,
    METEOR_HEADER,
    MeasuredDataCase,
    MeteorScenario,
    analyze_measured_data,
    laser_experiment,
    meteor_experiment,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_SOLVER = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _report("validation", message)
        sys.exit(EXIT_VALIDATION)


def _report(kind, message, **extra):
    payload = {"error": kind, "message": message}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        ser.write_atomic(out, text)


def _table(args, header, rows, plot_x, plot_y, series):
    fmt = args.format or "csv"
    if fmt == "csv":
        return ser.csv_text(header, rows)
    if fmt == "json":
        data = [dict(zip(header, (ser.json_number(v) if isinstance(v, float) else v for v in r))) for r in rows]
        return ser.dumps(data)
    if fmt == "svg":
        cells = [[ser.fmt(v) for v in r] for r in rows]
        return plot_svg(list(header), cells, plot_x, plot_y, series)
    raise ValidationError(f"format {fmt!r} is not available for this command")


def _pair_solver(p0, p1, eps):
    if isinstance(p0, ClassicalDistribution) and isinstance(p1, ClassicalDistribution):
        return solve_classical(p0, p1, eps)
    if isinstance(p0, ClassicalDistribution):
        p0 = classical_to_density(p0)
    if isinstance(p1, ClassicalDistribution):
        p1 = classical_to_density(p1)
    return solve_quantum(p0, p1, eps)


def _load_hypothesis(path):
    return ser.hypothesis_from_json(ser.load_json(path))


def cmd_solve(args):
    p0, p1 = _load_hypothesis(args.null), _load_hypothesis(args.alt)
    return ser.dumps(ser.certificate_to_json(_pair_solver(p0, p1, args.epsilon)))


def cmd_composite(args):
    nulls = ser.hypothesis_list_from_json(ser.load_json(args.nulls))
    alts = ser.hypothesis_list_from_json(ser.load_json(args.alts))
    return ser.dumps(ser.certificate_to_json(solve_composite(nulls, alts, args.epsilon)))


def cmd_stein(args):
    p0, p1 = _load_hypothesis(args.null), _load_hypothesis(args.alt)
    if isinstance(p0, DensityOperator) != isinstance(p1, DensityOperator):
        raise ValidationError("null and alternative must be of the same kind")
    curve = stein_rate_curve(p0, p1, args.epsilon, args.nmax)
    return _table(args, curve.header, curve.rows(), "n", "rate_bits", ())


def _design_json(res):
    obj = {
        "method": res.method,
        "objective_bits": ser.json_number(res.objective),
        "iterations": res.iterations,
        "best_device": res.best_device.mass.tolist(),
    }
    if "witness" in res.info:
        obj["witness"] = res.info["witness"].tolist()
    return obj


def cmd_design(args):
    channel = ser.channel_from_json(ser.load_json(args.channel))
    star = _load_hypothesis(args.star)
    poly = ser.polytope_from_json(ser.load_json(args.polytope))
    if args.method == "gradient":
        res = optimize_source_gradient(channel, star, poly, restarts=args.restarts, seed=args.seed)
    else:
        res = optimize_source_exact(channel, star, poly)
    return ser.dumps(_design_json(res))


def cmd_inscribed(args):
    noise = ser.channel_from_json(ser.load_json(args.noise))
    null = _load_hypothesis(args.null)
    energy = ser.load_json(args.energy)
    if isinstance(energy, dict):
        energy = energy.get("a")
    if not isinstance(energy, list):
        raise ValidationError("energy file must hold a list or an object with field 'a'")
    res, cert = inscribed_matter_design(noise, null, args.epsilon, energy, args.budget)
    obj = {
        "design": {
            "method": res.method,
            "beta": res.objective,
            "rounds": res.iterations,
            "best_device": res.best_device.mass.tolist(),
            "globally_optimal": False,
        },
        "certificate": ser.certificate_to_json(cert),
    }
    return ser.dumps(obj)


def cmd_meteor(args):
    kw = {}
    if args.lambdas:
        kw["lambda_values"] = args.lambdas
    if args.epsilons:
        kw["epsilon_values"] = args.epsilons
    if args.kmax is not None:
        kw["k_values"] = tuple(range(args.kmax + 1))
    if args.fold_tol is not None:
        kw["fold_tol"] = args.fold_tol
    rows = meteor_experiment(MeteorScenario(**kw))
    return _table(args, METEOR_HEADER, rows, "k", "beta", ("lambda", "epsilon"))


def cmd_laser(args):
    rows = laser_experiment(args.g, args.s, args.c, args.q, args.delta, args.n, args.powers)
    return _table(args, LASER_HEADER, rows, "power", "kl_bits", ())


def cmd_analyze(args):
    data = ser.load_json(args.data)
    null = _load_hypothesis(args.null)
    models_obj = ser.load_json(args.models)
    names = None
    if isinstance(models_obj, dict):
        names = models_obj.get("names")
        models_obj = models_obj.get("models")
    if not isinstance(models_obj, list):
        raise ValidationError("models file must hold a list of distributions")
    models = [ser.distribution_from_json(m) for m in models_obj]
    if not isinstance(data, dict) or "observed" not in data:
        raise ValidationError("data file needs an 'observed' field")
    obs = data["observed"]
    idx = null.space.index([obs] if isinstance(obs, int) else obs)
    case = MeasuredDataCase(idx, null, models, args.epsilon, names)
    u = args.u if args.u is not None else data.get("u")
    return ser.dumps({"reports": analyze_measured_data(case, u=u)})


def cmd_plot(args):
    header, rows = ser.read_csv(args.table)
    return plot_svg(header, rows, args.x, args.y, args.series or ())


def build_parser():
    p = _Parser(prog="oneshot", description="One-shot hypothesis testing toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, table=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--out", help="output file (default: stdout)")
        if table:
            sp.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
        sp.set_defaults(func=func)
        return sp

    sp = add("solve", cmd_solve, "optimal test for one null and one alternative")
    sp.add_argument("--null", required=True)
    sp.add_argument("--alt", required=True)
    sp.add_argument("--epsilon", type=float, required=True)

    sp = add("composite", cmd_composite, "optimal test for finite hypothesis sets")
    sp.add_argument("--nulls", required=True)
    sp.add_argument("--alts", required=True)
    sp.add_argument("--epsilon", type=float, required=True)

    sp = add("stein", cmd_stein, "normalized one-shot divergence versus block length", table=True)
    sp.add_argument("--null", required=True)
    sp.add_argument("--alt", required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--nmax", type=int, required=True)

    sp = add("design", cmd_design, "device distribution maximizing distinguishability")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--star", required=True)
    sp.add_argument("--polytope", required=True)
    sp.add_argument("--method", choices=("exact", "gradient"), default="exact")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("inscribed", cmd_inscribed, "energy-limited artefact design")
    sp.add_argument("--noise", required=True)
    sp.add_argument("--null", required=True)
    sp.add_argument("--energy", required=True)
    sp.add_argument("--budget", type=float, required=True)
    sp.add_argument("--epsilon", type=float, required=True)

    sp = add("meteor", cmd_meteor, "extra-meteor detection table", table=True)
    sp.add_argument("--lambdas", type=float, nargs="+")
    sp.add_argument("--epsilons", type=float, nargs="+")
    sp.add_argument("--kmax", type=int)
    sp.add_argument("--fold-tol", type=float, dest="fold_tol")

    sp = add("laser", cmd_laser, "pulsed-laser relative entropy table", table=True)
    for name in ("g", "s", "c", "n"):
        sp.add_argument(f"--{name}", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--powers", type=int, nargs="+")

    sp = add("analyze", cmd_analyze, "apply optimal tests to an observed outcome")
    sp.add_argument("--data", required=True)
    sp.add_argument("--null", required=True)
    sp.add_argument("--models", required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--u", type=float, help="uniform draw realizing randomized tests")

    sp = add("plot", cmd_plot, "SVG line plot of a CSV table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--series", nargs="*")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
        _emit(text, args.out)
    except SolverError as exc:
        _report("solver", str(exc), last_gap=exc.last_gap, iterations=exc.iterations)
        return EXIT_SOLVER
    except ValueError as exc:
        _report("validation", str(exc), type=type(exc).__name__)
        return EXIT_VALIDATION
    except OSError as exc:
        _report("io", str(exc))
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
