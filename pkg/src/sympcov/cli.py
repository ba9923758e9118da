"""File-driven command line: validation, covariance, analysis, evolution, verification.

Reports are deterministic JSON on stdout (identical input and flags give
byte-identical bytes); diagnostics go to stderr. Exit codes: 0 pass,
1 semantic failure (non-symplectic input, verification mismatch), 2 input
or usage error. ``SYMPCOV_TOL`` overrides the default validation tolerance;
an explicit ``--tol`` wins over the environment.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .analysis import (
    evolve,
    harmonic_flow,
    separability_report,
    squeeze_report,
    symplectic_eigenvalues,
)
from .covariance import (
    WeylLabel,
    amplitude,
    covariance_interleaved,
    covariance_physical,
    covariance_quadrature,
    lambda_quadrature_symplectic,
)
from .errors import NotSymplecticError, SympcovError
from .oracle import Grid, KernelSpec, active_backend, default_grid, numeric_amplitude
from .symplectic import (
    DEFAULT_TOLERANCE,
    Ordering,
    convert_ordering,
    grouped_block_residuals,
    interleaved_block_residuals,
    validate_symplectic,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

VERIFY_THRESHOLD = 1e-6
LAMBDA_Q_TOLERANCE = 1e-9


def _resolve_tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get("SYMPCOV_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise SympcovError(f"SYMPCOV_TOL is not a number: {env!r}") from exc
    return DEFAULT_TOLERANCE


def _grouped(mf, tol):
    """Validated matrix in grouped ordering (interleaved inputs converted)."""
    matrix = mf.matrix(tol)
    if matrix.ordering is Ordering.INTERLEAVED:
        matrix = convert_ordering(matrix)
    return matrix


def _matrix_entries(data):
    return [[float(x) for x in row] for row in data]


def cmd_check(args):
    mf = io.load_matrix_file(args.file)
    tol = _resolve_tol(args)
    result = validate_symplectic(mf.data, mf.ordering, tol)
    if mf.ordering is Ordering.GROUPED:
        blocks = grouped_block_residuals(mf.data)
        block_info = {"r1": blocks.r1, "r2": blocks.r2, "r3": blocks.r3}
    else:
        blocks = interleaved_block_residuals(mf.data)
        block_info = {
            "diag": [float(r) for r in blocks.diag],
            "cross": [
                {"modes": [i, k], "residual": v} for (i, k), v in sorted(blocks.cross.items())
            ],
        }
    report = {
        "command": "check",
        "input_digest": mf.digest,
        "tolerances": {"validation": tol},
        "results": {
            "n": mf.n,
            "ordering": mf.ordering.value,
            "residual": result.residual,
            "determinant": float(np.linalg.det(mf.data)),
            "block_residuals": block_info,
        },
        "passed": {"is_symplectic": result.is_symplectic},
    }
    return report, EXIT_OK if result.is_symplectic else EXIT_FAIL


def cmd_covariance(args):
    mf = io.load_matrix_file(args.file)
    tol = _resolve_tol(args)
    matrix = _grouped(mf, tol)
    if args.units == "physical":
        if mf.system is None:
            raise SympcovError("--units physical requires an oscillator block in the input file")
        V = covariance_physical(matrix, mf.system)
    else:
        V = covariance_quadrature(matrix)
    spectrum = symplectic_eigenvalues(V)
    if args.ordering_out == "interleaved":
        V = covariance_interleaved(V)
    lam = lambda_quadrature_symplectic(matrix, LAMBDA_Q_TOLERANCE)
    report = {
        "command": "covariance",
        "input_digest": mf.digest,
        "tolerances": {"validation": tol, "lambda_q_symplectic": LAMBDA_Q_TOLERANCE},
        "results": {
            "n": matrix.n,
            "units": args.units,
            "ordering": args.ordering_out,
            "covariance": _matrix_entries(V.data),
            "symplectic_eigenvalues": [float(k) for k in spectrum.kappas],
            "lambda_q": {"residual": lam.residual, "is_symplectic": lam.is_symplectic},
        },
        "passed": {"symplectic_input": True, "lambda_q_symplectic": lam.is_symplectic},
    }
    return report, EXIT_OK


def cmd_analyze(args):
    mf = io.load_matrix_file(args.file)
    tol = _resolve_tol(args)
    matrix = _grouped(mf, tol)
    sq = squeeze_report(matrix, tol)
    sep = separability_report(matrix, tol)
    report = {
        "command": "analyze",
        "input_digest": mf.digest,
        "tolerances": {"validation": tol, "analysis": tol},
        "results": {
            "n": matrix.n,
            "squeeze": {
                "row_norms": [float(x) for x in sq.row_norms],
                "diag_variances": [float(x) for x in sq.diag_variances],
                "vacuum_level": sq.vacuum_level,
                "squeezed_indices": list(sq.squeezed_indices),
                "squeezed": sq.squeezed,
            },
            "separability": {
                "coupling_norms": [
                    {"modes": [i, k], "max_abs": v}
                    for (i, k), v in sorted(sep.coupling_norms.items())
                ],
                "separable": sep.separable,
            },
        },
        "passed": {"symplectic_input": True},
    }
    return report, EXIT_OK


def cmd_evolve(args):
    mf = io.load_matrix_file(args.file)
    tol = _resolve_tol(args)
    matrix = _grouped(mf, tol)
    results = {"n": matrix.n}
    if args.hamiltonian is not None:
        hf = io.load_matrix_file(args.hamiltonian)
        propagator = _grouped(hf, tol)
        results["propagator"] = {"source": "file", "digest": hf.digest}
    else:
        system = mf.system_or_default()
        propagator = harmonic_flow(system, args.harmonic)
        results["propagator"] = {"source": "harmonic", "time": args.harmonic}
    evolved = evolve(matrix, propagator)
    spectrum = symplectic_eigenvalues(evolved.covariance)
    results["matrix_t"] = _matrix_entries(evolved.matrix.data)
    results["covariance_t"] = _matrix_entries(evolved.covariance.data)
    results["symplectic_eigenvalues"] = [float(k) for k in spectrum.kappas]
    report = {
        "command": "evolve",
        "input_digest": mf.digest,
        "tolerances": {"validation": tol},
        "results": results,
        "passed": {"symplectic_input": True},
    }
    return report, EXIT_OK


def _parse_weyl(text, n):
    parts = [p for p in text.replace(";", ",").split(",") if p != ""]
    if len(parts) != 2 * n:
        raise SympcovError(
            f"--weyl needs {2 * n} comma-separated numbers (a then b), got {len(parts)}"
        )
    vals = [float(p) for p in parts]
    return WeylLabel(np.asarray(vals[:n]), np.asarray(vals[n:]))


def cmd_verify(args):
    mf = io.load_matrix_file(args.file)
    tol = _resolve_tol(args)
    matrix = _grouped(mf, tol)
    if matrix.n == 2 and not args.allow_slow:
        raise SympcovError("two-mode verification is slow; pass --allow-slow to run it")
    if matrix.n > 2:
        raise SympcovError("verification is supported for one or two modes only")
    system = mf.system_or_default()
    labels = [_parse_weyl(text, matrix.n) for text in args.weyl] or [
        WeylLabel(np.ones(matrix.n), np.zeros(matrix.n))
    ]
    spec = KernelSpec.build(matrix, system)
    threshold = args.threshold
    rows = []
    all_pass = True
    for label in labels:
        if args.grid is not None:
            points, extent = args.grid
            grid = Grid(center=(0.0,) * matrix.n, extent=extent, points=points)
        else:
            grid = default_grid(spec, w=label)
        closed = amplitude(matrix, system, label)
        numeric = numeric_amplitude(spec, label, grid)
        diff = abs(numeric.real - closed)
        ok = diff < threshold and abs(numeric.imag) < threshold
        all_pass = all_pass and ok
        rows.append(
            {
                "a": [float(x) for x in label.a],
                "b": [float(x) for x in label.b],
                "grid_points": grid.points,
                "grid_extent": grid.extent,
                "closed_form": closed,
                "numeric_real": numeric.real,
                "numeric_imag": numeric.imag,
                "abs_difference": diff,
                "passed": ok,
            }
        )
    report = {
        "command": "verify",
        "input_digest": mf.digest,
        "tolerances": {"validation": tol, "match_threshold": threshold},
        "results": {"n": matrix.n, "backend": active_backend(), "checks": rows},
        "passed": {"amplitudes_match": all_pass},
    }
    return report, EXIT_OK if all_pass else EXIT_FAIL


def _parse_grid(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected POINTS,EXTENT")
    return int(parts[0]), float(parts[1])


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sympcov",
        description="Gaussian-state covariance toolkit driven by symplectic matrix files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("file", help="matrix exchange file (JSON)")
        p.add_argument("--tol", type=float, default=None, help="validation tolerance")

    p = sub.add_parser("check", help="validate the symplectic group condition")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("covariance", help="covariance matrix and Williamson spectrum")
    add_common(p)
    p.add_argument("--units", choices=["quadrature", "physical"], default="quadrature")
    p.add_argument(
        "--ordering-out", choices=["grouped", "interleaved"], default="grouped", dest="ordering_out"
    )
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("analyze", help="squeezing and mode-coupling separability reports")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("evolve", help="propagate the state by a symplectic matrix")
    add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--hamiltonian", help="matrix exchange file with the propagator")
    group.add_argument("--harmonic", type=float, help="uncoupled-oscillator flow time")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="cross-check the closed-form amplitude by quadrature")
    add_common(p)
    p.add_argument(
        "--weyl",
        action="append",
        default=[],
        metavar="A1,..,AN,B1,..,BN",
        help="displacement label; repeatable (default: a=1, b=0 per mode)",
    )
    p.add_argument("--grid", type=_parse_grid, default=None, metavar="POINTS,EXTENT")
    p.add_argument("--threshold", type=float, default=VERIFY_THRESHOLD)
    p.add_argument("--allow-slow", action="store_true", dest="allow_slow")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except NotSymplecticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SympcovError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(io.dump_json(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
