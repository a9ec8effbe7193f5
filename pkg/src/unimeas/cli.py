"""Command-line surface: build models, verify them, collapse, evaluate forms.

Exit codes: 0 all checks passed, 1 a check failed, 2 unreadable or invalid
input. With --json every report is a single machine-readable document with
the same content as the text output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .branches import check_prc, decompose_final
from .collapse import butcher, sample, weights
from .linalg import DEFAULT_EPS, uniform_ket, validate_ket, validate_tolerance
from .measurement import build_canonical_model, check_calibration, check_dynamical, premeasure
from .modelio import (
    ModelFormatError,
    load_matrix,
    load_model,
    load_observable,
    load_vector,
    save_model,
)
from .probability import forms_triple


@dataclass(frozen=True)
class CheckEntry:
    name: str
    passed: bool
    max_residual: float
    elapsed_s: float
    witness: str | None = None


@dataclass(frozen=True)
class SuiteReport:
    checks: tuple[CheckEntry, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


def _print_suite(report: SuiteReport, as_json: bool) -> None:
    if as_json:
        doc = {
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "max_residual": c.max_residual,
                    "elapsed_s": c.elapsed_s,
                    "witness": c.witness,
                }
                for c in report.checks
            ],
            "passed": report.passed,
        }
        print(json.dumps(doc, indent=2))
        return
    name_width = max(len(c.name) for c in report.checks)
    print(f"{'check':<{name_width}}  passed  max_residual  time")
    for c in report.checks:
        flag = "yes" if c.passed else "NO"
        print(f"{c.name:<{name_width}}  {flag:<6}  {c.max_residual:<12.3e}  {c.elapsed_s:.3f}s")
        if c.witness is not None:
            print(f"  {c.name}: {c.witness}")
    print(f"overall: {'PASS' if report.passed else 'FAIL'}")


def _cmd_build(args) -> int:
    observable = load_observable(args.observable, args.tol)
    model = build_canonical_model(observable)
    save_model(model, args.out)
    if args.json:
        doc = {
            "out": str(args.out),
            "dim_a": model.dim_a,
            "dim_b": model.dim_b,
            "outcomes": model.outcomes,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(
            f"wrote model with {model.outcomes} outcomes "
            f"(dim_a={model.dim_a}, dim_b={model.dim_b}) to {args.out}"
        )
    return 0


def _timed(name: str, fn) -> CheckEntry:
    start = time.perf_counter()
    report = fn()
    elapsed = time.perf_counter() - start
    return CheckEntry(
        name=name,
        passed=bool(report.passed),
        max_residual=float(report.max_residual),
        elapsed_s=elapsed,
        witness=report.witness,
    )


def _cmd_verify(args) -> int:
    tol = args.tol
    model = load_model(args.model, tol)
    if args.phi is not None:
        phi = load_vector(args.phi)
        validate_ket(phi, tol)
        if phi.size != model.dim_a:
            raise ModelFormatError(
                f"phi: dimension {phi.size} does not match dim_a {model.dim_a}"
            )
    else:
        phi = uniform_ket(model.dim_a)

    entries = [
        _timed("calibration", lambda: check_calibration(model, tol)),
        _timed("dynamical", lambda: check_dynamical(model, tol)),
        _timed("prc", lambda: check_prc(model, phi, tol)),
    ]

    start = time.perf_counter()
    final = premeasure(model, phi)
    dec = decompose_final(model, phi, tol)
    residual = float(np.linalg.norm(dec.reconstruct() - final))
    entries.append(
        CheckEntry(
            name="final-reconstruction",
            passed=residual <= tol,
            max_residual=residual,
            elapsed_s=time.perf_counter() - start,
        )
    )

    report = SuiteReport(tuple(entries))
    _print_suite(report, args.json)
    return report.exit_code


def _cmd_collapse(args) -> int:
    tol = args.tol
    model = load_model(args.model, tol)
    phi = load_vector(args.phi)
    validate_ket(phi, tol)
    if phi.size != model.dim_a:
        raise ModelFormatError(
            f"phi: dimension {phi.size} does not match dim_a {model.dim_a}"
        )
    dist = weights(phi, model.observable)
    rho = butcher(model, phi, tol)
    trace_residual = abs(float(np.trace(rho).real) - 1.0)
    report = sample(dist, args.n, args.seed)

    if args.json:
        doc = {
            "outcomes": [int(k) for k in dist.outcomes],
            "weights": [float(w) for w in dist.weights],
            "counts": [int(c) for c in report.counts],
            "butcher_trace_residual": trace_residual,
            "total": report.total,
            "seed": report.seed,
            "generator": report.generator,
        }
        print(json.dumps(doc, indent=2))
        return 0
    print("outcome  weight                  count")
    for k, w, c in zip(dist.outcomes, dist.weights, report.counts):
        print(f"{int(k):<7d}  {float(w)!r:<22}  {int(c)}")
    print(f"butchered trace residual: {trace_residual:.3e}")
    print(f"total: {report.total}  seed: {report.seed}  generator: {report.generator}")
    return 0


def _cmd_forms(args) -> int:
    tol = args.tol
    psi = load_vector(args.psi)
    validate_ket(psi, tol)
    projector = load_matrix(args.projector)
    triple = forms_triple(psi, projector, tol)
    if args.json:
        doc = {
            "expectation_form": triple.expectation_form,
            "born_form": triple.born_form,
            "trace_form": triple.trace_form,
            "max_pairwise_diff": triple.max_pairwise_diff,
        }
        print(json.dumps(doc, indent=2))
        return 0
    print(f"expectation_form: {triple.expectation_form!r}")
    print(f"born_form: {triple.born_form!r}")
    print(f"trace_form: {triple.trace_form!r}")
    print(f"max pairwise difference: {triple.max_pairwise_diff:.3e}")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser, top: bool) -> None:
    # subparsers use SUPPRESS so an absent flag never clobbers a value
    # given before the subcommand
    parser.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_EPS if top else argparse.SUPPRESS,
        help="numerical tolerance (default 1e-9)",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        default=False if top else argparse.SUPPRESS,
        help="emit machine-readable JSON reports",
    )


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unimeas",
        description="Build, verify, and collapse premeasurement models.",
    )
    _add_common_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a canonical model from an observable file")
    p_build.add_argument("observable", help="JSON file: Hermitian matrix or spectral form")
    p_build.add_argument("--out", required=True, help="path for the model file")
    _add_common_flags(p_build, top=False)
    p_build.set_defaults(handler=_cmd_build)

    p_verify = sub.add_parser("verify", help="run the condition checks on a model file")
    p_verify.add_argument("model", help="JSON model file")
    p_verify.add_argument(
        "--phi", default=None, help="object state file (default: uniform superposition)"
    )
    _add_common_flags(p_verify, top=False)
    p_verify.set_defaults(handler=_cmd_verify)

    p_collapse = sub.add_parser("collapse", help="weights, butchered state, sampled counts")
    p_collapse.add_argument("model", help="JSON model file")
    p_collapse.add_argument("phi", help="object state file")
    p_collapse.add_argument("--n", type=int, default=100000, help="number of draws")
    p_collapse.add_argument("--seed", type=int, default=0, help="sampling seed (uint64)")
    _add_common_flags(p_collapse, top=False)
    p_collapse.set_defaults(handler=_cmd_collapse)

    p_forms = sub.add_parser("forms", help="evaluate the three probability forms")
    p_forms.add_argument("psi", help="state vector file")
    p_forms.add_argument("projector", help="projector matrix file")
    _add_common_flags(p_forms, top=False)
    p_forms.set_defaults(handler=_cmd_forms)

    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        validate_tolerance(args.tol)
        if hasattr(args, "seed") and not 0 <= args.seed < 2**64:
            raise ValueError(f"seed must be a uint64, got {args.seed}")
        return args.handler(args)
    except (ModelFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
