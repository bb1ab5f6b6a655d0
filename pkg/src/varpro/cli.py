"""Command-line front end: ``varpro fit | simulate | ensemble``.

Exit codes: 0 success, 2 input or parse error, 3 fit failure, 4 inconsistent
configuration.  Errors go to stderr as one line, ``varpro: error[CODE]: msg``.

Any long option can also be given in a JSON file passed with ``--config``
(keys use underscores, e.g. ``"prior_center": [-0.11, -0.05]``).  Values on
the command line take precedence over the file.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import io
from .datagen import GridSpec, NoiseSpec, generate_experiment
from .ensemble import EnsembleConfig, parallel_coordinates_export, run_ensemble
from .exceptions import (
    ArityError,
    ConfigError,
    EmptySelection,
    EvaluationError,
    InvalidProblem,
    LengthMismatch,
    OptimizerError,
    ParseError,
    SingularNormalEquations,
    ZeroUncertainty,
)
from .models import resolve_model
from .optimizer import OptimizerSettings
from .priors import GaussianPrior
from .projection import FitProblem, fit, parameter_errors

EXIT_OK, EXIT_INPUT, EXIT_FIT, EXIT_CONFIG = 0, 2, 3, 4


class CLIError(Exception):
    def __init__(self, code, tag, message):
        super().__init__(message)
        self.code = code
        self.tag = tag


def _input_error(msg):
    return CLIError(EXIT_INPUT, "E_INPUT", msg)


def _config_error(msg):
    return CLIError(EXIT_CONFIG, "E_CONFIG", msg)


def parse_list(value, name):
    """Accept ``"1,2,3"``, a JSON list, or a single number."""
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, (list, tuple)):
        items = value
    else:
        items = [v for v in str(value).replace(" ", "").split(",") if v]
    try:
        return [float(v) for v in items]
    except (TypeError, ValueError):
        raise _input_error(f"--{name.replace('_', '-')}: cannot parse {value!r} as a list of numbers")


def _model(text):
    try:
        return resolve_model(text)
    except ParseError as exc:
        raise _input_error(f"model {text!r}: {exc}")
    except (ArityError, ValueError) as exc:
        raise _config_error(f"model {text!r}: {exc}")


def _settings(args):
    try:
        return OptimizerSettings(ap=args.ap, rp=args.rp, ns=args.ns)
    except ValueError as exc:
        raise _config_error(str(exc))


def _prior(args, n_b):
    center = parse_list(args.prior_center, "prior_center")
    width = parse_list(args.prior_width, "prior_width")
    if center is None and width is None:
        return None
    if center is None or width is None:
        raise _config_error("--prior-center and --prior-width must be given together")
    if len(center) != n_b:
        raise _config_error(f"prior has {len(center)} entries but the model has {n_b} "
                            "nonlinear parameters")
    try:
        return GaussianPrior(center, width)
    except (LengthMismatch, ValueError) as exc:
        raise _config_error(f"prior: {exc}")


def _grid(value):
    parts = parse_list(value, "grid")
    if parts is None or len(parts) != 3:
        raise _input_error(f"--grid expects start,step,count, got {value!r}")
    count = parts[2]
    if count != int(count):
        raise _config_error(f"grid count must be an integer, got {count!r}")
    try:
        return GridSpec(parts[0], parts[1], int(count))
    except ValueError as exc:
        raise _config_error(f"grid: {exc}")


def _noise(args):
    try:
        return NoiseSpec(args.noise, args.seed, args.dy_fraction)
    except ValueError as exc:
        raise _config_error(f"noise: {exc}")


def _ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def cmd_fit(args):
    if not args.data:
        raise _input_error("--data is required")
    if not os.path.isfile(args.data):
        raise _input_error(f"data file not found: {args.data}")
    try:
        data = io.read_dataset(args.data)
    except io.DataFormatError as exc:
        raise _input_error(str(exc))
    basis = _model(args.model)
    b0 = parse_list(args.b0, "b0")
    if b0 is None:
        raise _config_error("--b0 is required")
    if len(b0) != basis.n_b:
        raise _config_error(f"--b0 has {len(b0)} entries but model {args.model!r} has "
                            f"{basis.n_b} nonlinear parameters")
    prior = _prior(args, basis.n_b)
    try:
        problem = FitProblem(data, basis, b0, prior, _settings(args),
                             reference_norm=args.reference_norm)
    except InvalidProblem as exc:
        raise _config_error(str(exc))

    try:
        result = fit(problem)
    except (OptimizerError, SingularNormalEquations, EvaluationError) as exc:
        raise CLIError(EXIT_FIT, "E_FIT", f"{type(exc).__name__}: {exc}") from None
    try:
        errors_b = parameter_errors(result)
    except OptimizerError:
        errors_b = np.full(basis.n_b, np.nan)

    out = _ensure_dir(args.out)
    report = {
        "model": basis.name,
        "status": "converged",
        "a": result.a,
        "b": result.b,
        "chi2": result.chi2,
        "chi2_augmented": result.chi2_augmented,
        "errors_b": errors_b,
        "iterations": result.iterations,
        "descent_reversions": result.descent_reversions,
        "n_points": result.n_points,
        "n_params": result.n_params,
    }
    io.write_json(os.path.join(out, "fit_report.json"), report)
    with open(os.path.join(out, "fit_report.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_fit_report(report))
    xs = np.linspace(data.x.min(), data.x.max(), args.curve_points)
    try:
        ys = basis.evaluate(result.a, result.b, xs)
    except EvaluationError:
        # a pole between data points; sample the data abscissae instead
        xs = data.x
        ys = basis.evaluate(result.a, result.b, xs)
    io.write_curve(os.path.join(out, "fit_curve.csv"), xs, ys)
    print(f"fit converged: b={np.array2string(result.b, precision=6)} "
          f"chi2={result.chi2:.6g} -> {out}")
    return EXIT_OK


def format_fit_report(report):
    def vec(v):
        return ", ".join("n/a" if not np.isfinite(x) else f"{x:.10g}" for x in np.asarray(v, float))

    dof = report["n_points"] - report["n_params"]
    lines = [
        f"model           {report['model']}",
        f"status          {report['status']}",
        f"a               [{vec(report['a'])}]",
        f"b               [{vec(report['b'])}]",
        f"errors on b     [{vec(report['errors_b'])}]",
        f"chi2            {report['chi2']:.10g}",
        f"chi2 + prior    {report['chi2_augmented']:.10g}",
        f"chi2 / dof      {report['chi2'] / dof:.6g}" if dof > 0 else "chi2 / dof      n/a",
        f"iterations      {report['iterations']} ({report['descent_reversions']} steepest-descent fallbacks)",
    ]
    return "\n".join(lines) + "\n"


def _truth(args):
    basis = _model(args.truth)
    a = parse_list(args.a, "a")
    b = parse_list(args.b, "b")
    if a is None or len(a) != basis.n_a:
        raise _config_error(f"--a needs {basis.n_a} entries for model {args.truth!r}")
    if basis.n_b and (b is None or len(b) != basis.n_b):
        raise _config_error(f"--b needs {basis.n_b} entries for model {args.truth!r}")
    return basis, a, b or []


def cmd_simulate(args):
    basis, a, b = _truth(args)
    grid = _grid(args.grid)
    noise = _noise(args)
    try:
        data = generate_experiment(basis, a, b, grid, noise, dy=args.dy)
    except ZeroUncertainty as exc:
        raise _config_error(f"ZeroUncertainty: {exc}")
    except EvaluationError as exc:
        raise _config_error(f"truth model cannot be evaluated on the grid: {exc}")
    text = io.dataset_to_text(data)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        parent = os.path.dirname(args.out)
        if parent:
            _ensure_dir(parent)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_ensemble(args):
    basis, a, b = _truth(args)
    grid = _grid(args.grid)
    noise = _noise(args)
    b0 = parse_list(args.b0, "b0")
    prior = _prior(args, basis.n_b)
    if b0 is None:
        if prior is None:
            raise _config_error("--b0 is required when no prior is given")
        b0 = prior.center
    if len(b0) != basis.n_b:
        raise _config_error(f"--b0 has {len(b0)} entries but the model has {basis.n_b} "
                            "nonlinear parameters")
    if args.n is None or args.n < 1:
        raise _config_error("--n must be at least 1")
    try:
        config = EnsembleConfig(args.n, basis, a, b, grid, noise, b0, prior, _settings(args))
    except ConfigError as exc:
        raise _config_error(str(exc))
    report = run_ensemble(config, max_workers=args.workers)

    out = _ensure_dir(args.out)
    summary = {
        "n_experiments": report.n_experiments,
        "failure_rate": report.failure_rate,
        "status_counts": report.status_counts(),
        "n_converged": len(report.converged),
        "n_retained": len(report.retained),
        "truth_b": config.b_true,
        "retained_medians": None,
        "parallel_coordinates": None,
    }
    try:
        table = parallel_coordinates_export(report)
    except EmptySelection:
        table = None
    if table is not None:
        summary["retained_medians"] = report.retained_medians()
        summary["parallel_coordinates"] = "parallel_coordinates.csv"
        io.write_parallel_coordinates(os.path.join(out, "parallel_coordinates.csv"), table)
    io.write_json(os.path.join(out, "ensemble_summary.json"), summary)
    print(f"{report.n_experiments} experiments, failure rate {report.failure_rate:.3f}, "
          f"{len(report.retained)} retained -> {out}")
    return EXIT_OK


def _add_optimizer_flags(p, ns_default):
    p.add_argument("--ap", type=float, default=1e-6, help="absolute precision target")
    p.add_argument("--rp", type=float, default=1e-4, help="relative precision target")
    p.add_argument("--ns", type=int, default=ns_default, help="maximum Newton iterations")


def _add_prior_flags(p):
    p.add_argument("--prior-center", help="comma-separated prior means for b")
    p.add_argument("--prior-width", help="comma-separated prior widths for b")


def _add_truth_flags(p):
    p.add_argument("--truth", default="example1",
                   help="model generating the data: example1, expsum:K or a term list")
    p.add_argument("--a", help="true linear coefficients")
    p.add_argument("--b", help="true nonlinear parameters")
    p.add_argument("--grid", default="0.1,0.1,100", help="start,step,count")
    p.add_argument("--noise", type=float, default=0.01, help="relative Gaussian noise")
    p.add_argument("--dy-fraction", type=float, default=None,
                   help="uncertainty as a fraction of |y_true| (default: --noise)")
    p.add_argument("--seed", type=int, default=0)


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as a single line."""

    def error(self, message):
        raise _input_error(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="varpro", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a dataset CSV")
    p.add_argument("--data", help="CSV file with header x,y,dy")
    p.add_argument("--model", default="example1", help="example1, expsum:K or a term list")
    p.add_argument("--b0", help="starting nonlinear parameters")
    _add_prior_flags(p)
    _add_optimizer_flags(p, 200)
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; fitting is deterministic")
    p.add_argument("--reference-norm", action="store_true",
                   help="chi2 as the squared 1-norm of the residual (legacy behaviour)")
    p.add_argument("--curve-points", type=int, default=200)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    _add_truth_flags(p)
    p.add_argument("--dy", type=float, default=None, help="absolute uncertainty for every point")
    p.add_argument("--out", default=None, help="output CSV (default: stdout)")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("ensemble", help="fit a batch of simulated experiments")
    _add_truth_flags(p)
    p.add_argument("--n", type=int, default=50, help="number of experiments")
    p.add_argument("--b0", help="starting nonlinear parameters (default: prior centers)")
    _add_prior_flags(p)
    _add_optimizer_flags(p, 200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(handler=cmd_ensemble)
    return parser


def _load_config(argv, parser):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config, encoding="utf-8") as fh:
            values = json.load(fh)
    except OSError as exc:
        raise _input_error(f"cannot read config {known.config}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise _input_error(f"config {known.config}: {exc}")
    if not isinstance(values, dict):
        raise _input_error(f"config {known.config}: expected a JSON object")
    for action in parser._subparsers._group_actions:
        for subparser in action.choices.values():
            valid = {a.dest for a in subparser._actions}
            subparser.set_defaults(**{k: v for k, v in values.items() if k in valid})


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _load_config(argv, parser)
        args = parser.parse_args(argv)
        return args.handler(args)
    except CLIError as exc:
        print(f"varpro: error[{exc.tag}]: {exc}", file=sys.stderr)
        return exc.code
