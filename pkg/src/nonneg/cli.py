"""Command-line surface.

Subcommands:
  analyze <matrix>           per-eigenspace nonnegative-eigenvector verdicts
  subspace <basis>           witness/certificate classification of V and V-perp
  counterexample             build a matrix with no nonnegative eigenvector
  verify <report> <input>    re-check every vector claimed by a report

Exit codes: 0 ok, 1 usage/parse error, 2 numerical failure, 3 verification
failure.  Error lines carry a machine-greppable code, e.g. ``error[E_PARSE]``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import io
from .alternative import (
    DEFAULT_VERIFY_TOL,
    PairClassification,
    PairKind,
    classify_pair,
    verify_certificate,
    verify_witness,
)
from .analyzer import AnalysisReport, analyze, build_counterexample
from .eigen import DEFAULT_CLUSTER_TOL, eigenspaces
from .errors import NumericalFailure, ParseError, UsageError
from .feasibility import DEFAULT_FEAS_TOL
from .linalg import Backend, DEFAULT_RANK_TOL, Subspace, orthogonal_complement, orthonormalize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


@dataclass(frozen=True)
class RunConfig:
    backend: Backend
    rank_tol: float
    cluster_tol: float
    feas_tol: float
    verify_tol: float
    seed: int  # NONNEG_SEED overrides the default 0 for generator commands
    structured: bool

    def __post_init__(self):
        for name in ("rank_tol", "cluster_tol", "feas_tol", "verify_tol"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def tolerances(self) -> dict:
        return {
            "rank_tol": self.rank_tol,
            "cluster_tol": self.cluster_tol,
            "feas_tol": self.feas_tol,
            "verify_tol": self.verify_tol,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); our usage exit code is 1
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="nonneg", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, backends):
        p.add_argument("--backend", choices=backends, default=backends[0])
        p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
        p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
        p.add_argument("--feas-tol", type=float, default=DEFAULT_FEAS_TOL)
        p.add_argument("--verify-tol", type=float, default=DEFAULT_VERIFY_TOL)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--report", metavar="PATH", help="also write the structured report here")

    p = sub.add_parser("analyze", help="analyze a symmetric matrix file")
    p.add_argument("matrix")
    add_common(p, ("float", "exact"))
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("subspace", help="classify a subspace and its complement")
    p.add_argument("basis")
    add_common(p, ("auto", "float", "exact"))
    p.set_defaults(handler=cmd_subspace)

    p = sub.add_parser("counterexample", help="construct a matrix with no nonnegative eigenvector")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--eigenvalues", required=True, help="comma-separated, e.g. 1,2,3")
    p.add_argument("--out", required=True)
    add_common(p, ("float",))
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("verify", help="re-check every vector claimed by a report")
    p.add_argument("report")
    p.add_argument("input")
    p.set_defaults(handler=cmd_verify)
    return parser


def _config_from(args, backend: Backend) -> RunConfig:
    return RunConfig(
        backend=backend,
        rank_tol=args.rank_tol,
        cluster_tol=args.cluster_tol,
        feas_tol=args.feas_tol,
        verify_tol=args.verify_tol,
        seed=int(os.environ.get("NONNEG_SEED", "0")),
        structured=(args.format == "json"),
    )


def _emit(config: RunConfig, args, text_lines: list[str], report: dict) -> None:
    payload = io.render_report(report)
    if config.structured:
        sys.stdout.write(payload)
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(payload)


# ---------------------------------------------------------------------------
# analyze


def _verdict_fields(verdict) -> tuple[str, np.ndarray]:
    if verdict.has_nonneg:
        return "HAS_NONNEG", verdict.witness.x
    return "NO_NONNEG", verdict.certificate.v


def analysis_report_dict(result: AnalysisReport, digest: str, config: RunConfig) -> dict:
    spaces = []
    for entry in result.per_eigenspace:
        name, vector = _verdict_fields(entry.verdict)
        spaces.append(
            {
                "value": entry.cluster.representative_value,
                "multiplicity": entry.cluster.multiplicity,
                "verdict": name,
                "vector": io.vector_payload(vector, Backend.APPROX),
            }
        )
    return {
        "kind": "analysis",
        "input_digest": digest,
        "backend": config.backend.value,
        "tolerances": config.tolerances,
        "distinct_eigenvalues": result.distinct_eigenvalue_count,
        "eigenspaces": spaces,
        "theorem_applicable": result.theorem_applicable,
        "theorem_satisfied": result.theorem_satisfied,
    }


def _analysis_text(result: AnalysisReport) -> list[str]:
    lines = [
        f"matrix: {result.matrix_dim} x {result.matrix_dim}",
        f"distinct eigenvalues: {result.distinct_eigenvalue_count}",
    ]
    for entry in result.per_eigenspace:
        name, vector = _verdict_fields(entry.verdict)
        kind = "witness" if entry.verdict.has_nonneg else "certificate"
        lines.append(
            f"  lambda={entry.cluster.representative_value!r} "
            f"multiplicity={entry.cluster.multiplicity}: {name} "
            f"{kind}=[{_fmt_vector(vector)}]"
        )
    lines.append(
        "nonnegative eigenvector: "
        + ("found" if result.has_nonneg_eigenvector else "none exists")
    )
    if result.theorem_applicable:
        lines.append("two-eigenvalue guarantee: applicable and satisfied")
    else:
        lines.append(
            f"two-eigenvalue guarantee: not applicable "
            f"({result.distinct_eigenvalue_count} distinct eigenvalues)"
        )
    return lines


def _fmt_vector(vec) -> str:
    entries = (str(e) if isinstance(e, Fraction) else repr(float(e)) for e in vec)
    return ", ".join(entries)


def cmd_analyze(args) -> int:
    if args.backend == "exact":
        raise UsageError(
            "the analyze subcommand runs on the float backend only: eigenvalues of "
            "rational matrices are generally irrational, so no exact eigendecomposition exists"
        )
    config = _config_from(args, Backend.APPROX)
    matrix = io.read_matrix_file(args.matrix)
    result = analyze(
        matrix,
        cluster_tol=config.cluster_tol,
        feas_tol=config.feas_tol,
        verify_tol=config.verify_tol,
    )
    report = analysis_report_dict(result, io.sha256_digest(args.matrix), config)
    _emit(config, args, _analysis_text(result), report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# subspace


def _build_subspace(basis_file: io.BasisFile, config: RunConfig) -> Subspace:
    columns = io.basis_columns_array(basis_file, config.backend)
    return orthonormalize(columns, rank_tol=config.rank_tol, mode=config.backend)


def _resolve_backend(args, basis_file: io.BasisFile) -> Backend:
    if args.backend == "auto":
        return Backend.EXACT if basis_file.has_rational_literals else Backend.APPROX
    return Backend.EXACT if args.backend == "exact" else Backend.APPROX


def subspace_report_dict(
    classification: PairClassification, digest: str, ambient_dim: int, config: RunConfig
) -> dict:
    mode = config.backend
    if classification.kind is PairKind.BOTH_SIDES:
        v_entry = ("HAS_NONNEG", classification.witness_v.x)
        p_entry = ("HAS_NONNEG", classification.witness_complement.x)
    elif classification.kind is PairKind.ONLY_V:
        v_entry = ("HAS_NONNEG", classification.witness_v.x)
        p_entry = ("NO_NONNEG", classification.certificate_in_v.v)
    else:
        v_entry = ("NO_NONNEG", classification.certificate_in_complement.v)
        p_entry = ("HAS_NONNEG", classification.witness_complement.x)
    return {
        "kind": "subspace",
        "input_digest": digest,
        "backend": mode.value,
        "tolerances": config.tolerances,
        "ambient_dim": ambient_dim,
        "classification": classification.kind.value,
        "v": {"verdict": v_entry[0], "vector": io.vector_payload(v_entry[1], mode)},
        "v_perp": {"verdict": p_entry[0], "vector": io.vector_payload(p_entry[1], mode)},
    }


def _subspace_text(report: dict, V: Subspace) -> list[str]:
    lines = [
        f"ambient dimension: {V.ambient_dim}",
        f"dim V = {V.dim}, dim V_perp = {V.ambient_dim - V.dim}",
    ]
    for label, key in (("V", "v"), ("V_perp", "v_perp")):
        entry = report[key]
        kind = "witness" if entry["verdict"] == "HAS_NONNEG" else "certificate"
        lines.append(f"{label}: {entry['verdict']} {kind}=[{', '.join(str(e) for e in entry['vector'])}]")
    lines.append(f"classification: {report['classification']}")
    return lines


def cmd_subspace(args) -> int:
    basis_file = io.read_basis_file(args.basis)
    backend = _resolve_backend(args, basis_file)
    config = _config_from(args, backend)
    V = _build_subspace(basis_file, config)
    classification = classify_pair(V, feas_tol=config.feas_tol, verify_tol=config.verify_tol)
    report = subspace_report_dict(
        classification, io.sha256_digest(args.basis), basis_file.ambient_dim, config
    )
    _emit(config, args, _subspace_text(report, V), report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# counterexample


def cmd_counterexample(args) -> int:
    config = _config_from(args, Backend.APPROX)
    eigenvalues = [float(io.parse_scalar_token(tok)) for tok in args.eigenvalues.split(",") if tok]
    matrix = build_counterexample(args.dim, eigenvalues)
    io.write_matrix_market(args.out, matrix)
    result = analyze(
        matrix,
        cluster_tol=config.cluster_tol,
        feas_tol=config.feas_tol,
        verify_tol=config.verify_tol,
    )
    report = analysis_report_dict(result, io.sha256_digest(args.out), config)
    sidecar = args.report or (args.out + ".report.json")
    with open(sidecar, "w") as fh:
        fh.write(io.render_report(report))
    if config.structured:
        sys.stdout.write(io.render_report(report))
    else:
        sys.stdout.write(
            f"wrote {args.dim} x {args.dim} matrix to {args.out} (report: {sidecar})\n"
            + "\n".join(_analysis_text(result))
            + "\n"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _verify_failures_analysis(report: dict, input_path) -> list[str]:
    matrix = io.read_matrix_file(input_path)
    tolerances = report.get("tolerances", {})
    verify_tol = float(tolerances.get("verify_tol", DEFAULT_VERIFY_TOL))
    clusters = eigenspaces(matrix, cluster_tol=float(tolerances.get("cluster_tol", DEFAULT_CLUSTER_TOL)))
    entries = report.get("eigenspaces", [])
    failures = []
    if report.get("distinct_eigenvalues") != len(clusters):
        failures.append(
            f"report claims {report.get('distinct_eigenvalues')} distinct eigenvalues, "
            f"input has {len(clusters)}"
        )
        return failures
    if len(entries) != len(clusters):
        failures.append(f"report lists {len(entries)} eigenspaces, input has {len(clusters)}")
        return failures
    claimed_has = False
    for idx, (entry, cluster) in enumerate(zip(entries, clusters)):
        label = f"eigenspace {idx} (lambda={cluster.representative_value!r})"
        if int(entry.get("multiplicity", -1)) != cluster.multiplicity:
            failures.append(f"{label}: multiplicity mismatch")
            continue
        if abs(float(entry.get("value")) - cluster.representative_value) > 1e-9 * max(
            1.0, abs(cluster.representative_value)
        ):
            failures.append(f"{label}: eigenvalue mismatch with recomputation")
            continue
        vector = io.parse_vector_payload(entry.get("vector", []), Backend.APPROX)
        verdict = entry.get("verdict")
        if verdict == "HAS_NONNEG":
            claimed_has = True
            if not verify_witness(cluster.space, vector, verify_tol):
                failures.append(f"{label}: claimed witness fails verification")
        elif verdict == "NO_NONNEG":
            if not verify_certificate(cluster.space, vector, verify_tol):
                failures.append(f"{label}: claimed certificate fails verification")
        else:
            failures.append(f"{label}: unknown verdict {verdict!r}")
    applicable = len(clusters) <= 2
    if bool(report.get("theorem_applicable")) != applicable:
        failures.append("theorem_applicable flag does not match the eigenvalue count")
    if bool(report.get("theorem_satisfied")) != ((not applicable) or claimed_has):
        failures.append("theorem_satisfied flag is inconsistent with the verdicts")
    return failures


def _verify_failures_subspace(report: dict, input_path) -> list[str]:
    basis_file = io.read_basis_file(input_path)
    mode = Backend.EXACT if report.get("backend") == "exact" else Backend.APPROX
    tolerances = report.get("tolerances", {})
    verify_tol = float(tolerances.get("verify_tol", DEFAULT_VERIFY_TOL))
    columns = io.basis_columns_array(basis_file, mode)
    V = orthonormalize(columns, rank_tol=float(tolerances.get("rank_tol", DEFAULT_RANK_TOL)), mode=mode)
    complement = orthogonal_complement(V)
    failures = []
    for label, space, key in (("V", V, "v"), ("V_perp", complement, "v_perp")):
        entry = report.get(key)
        if not isinstance(entry, dict):
            failures.append(f"{label}: missing entry in report")
            continue
        vector = io.parse_vector_payload(entry.get("vector", []), mode)
        verdict = entry.get("verdict")
        if verdict == "HAS_NONNEG":
            if not verify_witness(space, vector, verify_tol):
                failures.append(f"{label}: claimed witness fails verification")
        elif verdict == "NO_NONNEG":
            if not verify_certificate(space, vector, verify_tol):
                failures.append(f"{label}: claimed certificate fails verification")
        else:
            failures.append(f"{label}: unknown verdict {verdict!r}")
    verdicts = (report.get("v", {}).get("verdict"), report.get("v_perp", {}).get("verdict"))
    expected_kind = {
        ("HAS_NONNEG", "HAS_NONNEG"): "BOTH_SIDES",
        ("HAS_NONNEG", "NO_NONNEG"): "ONLY_V",
        ("NO_NONNEG", "HAS_NONNEG"): "ONLY_COMPLEMENT",
    }.get(verdicts)
    if expected_kind is None:
        failures.append("the verdict pair (NO_NONNEG, NO_NONNEG) is impossible")
    elif report.get("classification") != expected_kind:
        failures.append(
            f"classification {report.get('classification')!r} does not match the verdicts"
        )
    return failures


def cmd_verify(args) -> int:
    report = io.load_report(args.report)
    digest = io.sha256_digest(args.input)
    if report.get("input_digest") != digest:
        raise UsageError(
            f"report was produced for input digest {report.get('input_digest')}, "
            f"but {args.input} has digest {digest}"
        )
    kind = report["kind"]
    if kind == "analysis":
        failures = _verify_failures_analysis(report, args.input)
    elif kind == "subspace":
        failures = _verify_failures_subspace(report, args.input)
    else:
        raise ParseError(f"unknown report kind {kind!r}")
    if failures:
        for failure in failures:
            sys.stderr.write(f"error[E_VERIFY]: {failure}\n")
        return EXIT_VERIFY
    sys.stdout.write(f"verified: every claimed vector in {args.report} checks out\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except ParseError as exc:
        sys.stderr.write(f"error[E_PARSE]: {exc}\n")
        return EXIT_USAGE
    except UsageError as exc:
        sys.stderr.write(f"error[E_USAGE]: {exc}\n")
        return EXIT_USAGE
    except NumericalFailure as exc:
        sys.stderr.write(f"error[E_NUMERIC]: {exc}\n")
        return EXIT_NUMERICAL
    except OSError as exc:
        sys.stderr.write(f"error[E_USAGE]: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
