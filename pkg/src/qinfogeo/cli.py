"""Command-line entry point: ``compute``, ``verify`` and ``catalog``.

Exit codes: 0 success (no violations), 2 violations found, 1 any usage or
execution error.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .funlib import ParameterError, catalog_get, catalog_hash, catalog_listing, parse_selector
from .io import load_matrix
from .metrics import JOperator, chi2_alpha, chi2_k_paths, monotone_metric, superop_matrix, two_param_metric
from .propcheck import PROPERTIES, SUITE_TOL, SuiteConfig, resolve_function, run_suite, suite_cells
from .quasient import quasi_entropy, quasi_entropy_terms

MIN_DIM, MAX_DIM = 2, 16
CSV_COLUMNS = (
    "property_id",
    "function",
    "trials",
    "violations",
    "worst_margin",
    "seed",
    "flipped",
    "elapsed",
    "dims",
    "tolerance",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for violations
    def error(self, message):
        raise UsageError(message)


def parse_dims(text: str) -> tuple:
    """``"2..4"`` or ``"2,3,5"`` -> tuple of ints in [2, 16]."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            dims = tuple(range(lo, hi + 1))
        else:
            dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"malformed dims {text!r}") from None
    if not dims:
        raise UsageError(f"empty dims range {text!r}")
    if min(dims) < MIN_DIM or max(dims) > MAX_DIM:
        raise UsageError(f"dims must lie in [{MIN_DIM}, {MAX_DIM}], got {text!r}")
    return dims


def _selector(text: str):
    try:
        return parse_selector(text)
    except (ParameterError, KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _existing(path):
    if path is not None and not os.path.isfile(path):
        raise UsageError(f"no such file: {path}")
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qinfogeo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true", help="print version and catalog hash")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    compute = sub.add_parser("compute", help="evaluate one quantity from matrix files")
    what = compute.add_subparsers(dest="quantity", parser_class=_Parser)
    div = what.add_parser("divergence", help="quasi-entropy S^A_f(rho1 || rho2)")
    div.add_argument("--f", required=True)
    div.add_argument("--rho1", required=True)
    div.add_argument("--rho2", required=True)
    div.add_argument("--a", help="contrast matrix A (default: identity)")
    met = what.add_parser("metric", help="monotone metric <A, (J^f_{D,D2})^-1 B>")
    met.add_argument("--f", required=True)
    met.add_argument("--d", required=True)
    met.add_argument("--d2")
    met.add_argument("--a", required=True)
    met.add_argument("--b")
    chi = what.add_parser("chi2", help="chi^2 divergence, chi^2_alpha or chi^2_k")
    group = chi.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float)
    group.add_argument("--k", help="selector of the standard function 1/k")
    chi.add_argument("--rho", required=True)
    chi.add_argument("--sigma", required=True)

    ver = sub.add_parser("verify", help="run randomized property checks")
    ver.add_argument("--suite", default="all", help="'all' or one of: " + ", ".join(PROPERTIES))
    ver.add_argument("--f", action="append", help="function selector, repeatable, or 'all' (default)")
    ver.add_argument("--dims", default="2..4")
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--tol", type=float, default=SUITE_TOL)
    ver.add_argument("--out", help="report path (default: stdout)")
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.add_argument("--flip", action="store_true", help="negation control: reverse every inequality")
    ver.add_argument("--timing", action="store_true", help="record elapsed seconds (reports stop being reproducible)")
    ver.add_argument("--counterexamples", default="counterexamples", help="directory for counterexample files")

    cat = sub.add_parser("catalog", help="list catalog functions with flags and parameter ranges")
    cat.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def parse_args(argv) -> argparse.Namespace:
    """Parse and validate; every referenced file is checked before any computation."""
    args = build_parser().parse_args(argv)
    if args.version:
        return args
    if args.subcommand is None:
        raise UsageError("a subcommand is required: compute, verify or catalog")
    if args.subcommand == "compute":
        if args.quantity is None:
            raise UsageError("compute needs one of: divergence, metric, chi2")
        for name in ("rho1", "rho2", "a", "d", "d2", "b", "rho", "sigma"):
            _existing(getattr(args, name, None))
        if getattr(args, "f", None) is not None:
            args.function = _selector(args.f)
        if args.quantity == "chi2":
            if args.alpha is not None and not 0 <= args.alpha <= 1:
                raise UsageError(f"alpha={args.alpha!r} outside [0, 1]")
            args.function = _selector(args.k) if args.k is not None else catalog_get("k_alpha_inv", alpha=args.alpha)
    elif args.subcommand == "verify":
        args.dims = parse_dims(args.dims)
        if args.trials < 1:
            raise UsageError("--trials must be positive")
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        if args.seed < 0:
            raise UsageError("--seed must be non-negative")
        if args.suite != "all" and args.suite not in PROPERTIES:
            raise UsageError(f"unknown suite {args.suite!r}; known: all, {', '.join(PROPERTIES)}")
        if not args.f or args.f == ["all"]:
            args.functions = "all"
        else:
            for s in args.f:
                try:
                    resolve_function(s)
                except (ParameterError, KeyError, ValueError) as exc:
                    raise UsageError(str(exc)) from None
            args.functions = list(args.f)
    return args


def _number(z):
    z = complex(z)
    return z.real if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)) else [z.real, z.imag]


def _paths(primary, crosscheck) -> dict:
    return {"primary": _number(primary), "crosscheck": _number(crosscheck), "delta": abs(complex(primary) - complex(crosscheck))}


def compute_divergence(args) -> dict:
    rho1, rho2 = load_matrix(args.rho1), load_matrix(args.rho2)
    A = np.eye(rho1.shape[0]) if args.a is None else load_matrix(args.a)
    total = quasi_entropy_terms(args.function, A, rho1, rho2)
    value = quasi_entropy(args.function, A, rho1, rho2)
    # the same value as a J-operator form: <A, J^f_{rho1,rho2} A>
    cross = JOperator.build(args.function, rho1, rho2, check_positive=False).form(A, A)
    return {
        "value": value,
        "f": args.function.selector,
        "dims": list(rho1.shape),
        "residual_imag": abs(total.imag),
        "paths": _paths(value, cross),
    }


def compute_metric(args) -> dict:
    f = args.function
    D = load_matrix(args.d)
    D2 = None if args.d2 is None else load_matrix(args.d2)
    A = load_matrix(args.a)
    B = A if args.b is None else load_matrix(args.b)
    if D2 is None:
        value = monotone_metric(f, D, A, B)
    else:
        value = two_param_metric(f, D, D2, A, B)
    # dense cross-check: solve the n^2 x n^2 system J x = vec(B)
    J = JOperator.build(f, D, D2)
    n = J.dim
    x = np.linalg.solve(superop_matrix(J.apply, n), B.reshape(-1))
    cross = np.vdot(A.reshape(-1), x)
    return {"value": _number(value), "f": f.selector, "dims": [n, n], "paths": _paths(value, cross)}


def compute_chi2(args) -> dict:
    rho, sigma = load_matrix(args.rho), load_matrix(args.sigma)
    if args.alpha is not None:
        primary = chi2_alpha(args.alpha, rho, sigma)
        cross, _ = chi2_k_paths(args.function, rho, sigma)
    else:
        primary, cross = chi2_k_paths(args.function, rho, sigma)
    return {"value": primary, "f": args.function.selector, "dims": list(rho.shape), "paths": _paths(primary, cross)}


def report_document(reports, config: dict | None = None) -> dict:
    return {
        "version": __version__,
        "catalog": catalog_hash(),
        "config": config or {},
        "reports": [r.to_dict() for r in reports],
    }


def format_report(reports, fmt: str = "json", config: dict | None = None) -> str:
    if fmt == "json":
        return json.dumps(report_document(reports, config), indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(
            [
                r.property_id,
                r.function,
                r.trials,
                r.violations,
                repr(r.worst_margin),
                r.seed,
                int(r.flipped),
                "" if r.elapsed is None else r.elapsed,
                " ".join(str(d) for d in r.config["dims"]),
                repr(r.config["tolerance"]),
            ]
        )
    return buf.getvalue()


def emit_report(reports, fmt: str = "json", path=None, config: dict | None = None):
    text = format_report(reports, fmt, config)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def write_counterexamples(reports, directory) -> int:
    count = 0
    for r in reports:
        for cx in r.counterexamples:
            os.makedirs(directory, exist_ok=True)
            with open(os.path.join(directory, cx.filename), "w") as fh:
                json.dump(cx.to_dict(), fh, indent=1)
            count += 1
    return count


def run_verify(args) -> int:
    config = SuiteConfig(
        suite=args.suite,
        functions=args.functions,
        dims=args.dims,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        flip=args.flip,
        timing=args.timing,
    )
    if not suite_cells(config):
        raise UsageError("no (property, function) pair matches the selection")
    reports = run_suite(config)
    emit_report(reports, args.format, args.out, config.to_dict())
    saved = write_counterexamples(reports, args.counterexamples)
    failed = [r for r in reports if r.violations]
    for r in failed:
        print(f"violation: {r.property_id} {r.function}: {r.violations}/{r.trials}", file=sys.stderr)
    if saved:
        print(f"{saved} counterexample(s) written to {args.counterexamples}/", file=sys.stderr)
    return 2 if failed else 0


def run_catalog(args) -> int:
    if args.format == "json":
        from .funlib import CATALOG, default_catalog

        rows = [
            {"name": f.name, "params": f.params, "ranges": CATALOG[f.name][1], **f.flags}
            for f in default_catalog()
        ]
        print(json.dumps(rows, indent=2))
    else:
        print(catalog_listing())
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        if args.version:
            print(f"qinfogeo {__version__} catalog {catalog_hash()}")
            return 0
        if args.subcommand == "compute":
            handler = {"divergence": compute_divergence, "metric": compute_metric, "chi2": compute_chi2}[args.quantity]
            print(json.dumps(handler(args), indent=2))
            return 0
        if args.subcommand == "verify":
            return run_verify(args)
        return run_catalog(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
