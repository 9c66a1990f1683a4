"""Command-line entry point.

Subcommands ``invert``, ``decompose``, ``polar``, ``verify-bases`` and
``bench`` read a JSON matrix (``{"signature": [p, q], "matrix": [[...]]}``)
and write a JSON report.  Reals are written as 17-significant-digit decimal
strings and every object has a fixed key order, so identical jobs produce
byte-identical reports (bench timings excepted, see ``--no-timing``).

Exit status: 0 success, 1 parse error, 2 membership (or verification)
failure, 3 genericity failure under ``--strict``, 4 unsupported
strategy/signature combination.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.linalg import expm

from . import _tables
from .clifford_bases import (
    basis_for,
    catalog,
    check_axioms,
    check_bp,
    extensions_up_to,
    representation_basis,
    verify_catalog,
)
from .clifford_blades import Multivector, blade_name, matrix_rep
from .covering_maps import CONCRETE_SIGNATURES, SpinElement, embed_spin, generic_phi, phi
from .errors import GenericityError, InvariantError, MembershipError, SpinCoverError, UnsupportedError
from .indefinite_group import (
    STRUCTURE_TOL,
    GivensFactor,
    Signature,
    givens_decompose,
    givens_embed,
    givens_product,
    is_in_so_plus,
    leading_minors,
    polar_decompose_n1,
    random_givens_factors,
)
from .inversion import (
    STRATEGIES,
    PreimagePair,
    agnostic_pair,
    default_strategy,
    invert,
    invert_21,
    invert_41_polar,
    supported_strategies,
)

log = logging.getLogger("spincover")

REPORT_FORMAT = "spincover-report/1"
COMMANDS = ("invert", "decompose", "polar", "verify-bases", "bench")

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_MEMBERSHIP = 2
EXIT_GENERICITY = 3
EXIT_UNSUPPORTED = 4


class ParseError(SpinCoverError):
    pass


# --- formatting ----------------------------------------------------------------

def fmt(x: float) -> str:
    """Round-trip decimal string with 17 significant digits (no negative zero)."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return format(x, ".17g")


def fmt_matrix(A: np.ndarray) -> list[list[str]]:
    return [[fmt(v) for v in row] for row in np.asarray(A, dtype=float)]


def fmt_quaternion(q: Sequence[float]) -> dict[str, str]:
    return {"w": fmt(q[0]), "x": fmt(q[1]), "y": fmt(q[2]), "z": fmt(q[3])}


def fmt_factor(f: GivensFactor) -> dict[str, Any]:
    return {"kind": f.kind, "i": f.i, "j": f.j, "label": f.label, "parameter": fmt(f.parameter)}


def fmt_element(Y) -> dict[str, Any]:
    """JSON form of a spin element or a multivector."""
    if isinstance(Y, Multivector):
        blades = [
            {"blade": blade_name(m), "coefficient": fmt(c)}
            for m, c in enumerate(np.asarray(Y.coeffs, dtype=float))
            if c != 0.0
        ]
        return {"kind": "multivector", "blades": blades}
    sig = Y.signature
    if sig == Signature(4, 1):
        return {"kind": "quaternionic 2x2", "matrix": [[fmt_quaternion(q) for q in row] for row in Y.payload]}
    if sig == Signature(2, 2):
        return {
            "kind": "pair of 2x2",
            "pair": [fmt_matrix(Y.payload[0]), fmt_matrix(Y.payload[1])],
            "embedded": fmt_matrix(Y.matrix()),
        }
    n = Y.payload.shape[0]
    return {"kind": f"real {n}x{n}", "matrix": fmt_matrix(Y.payload)}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=True) + "\n"


# --- job spec ----------------------------------------------------------------

@dataclass(frozen=True)
class JobSpec:
    command: str
    signature: Signature | None = None
    strategy: str = "auto"
    input_path: str | None = None
    output_path: str | None = None
    tol: float = STRUCTURE_TOL
    strict: bool = False
    count: int = 20
    timing: bool = True
    seed: int = 0
    beta_max: float = 1.0

    def echo(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "signature": None if self.signature is None else [self.signature.p, self.signature.q],
            "strategy": self.strategy,
            "input": self.input_path,
            "tolerance": fmt(self.tol),
            "strict": self.strict,
        }


def parse_signature(text: str) -> Signature:
    try:
        parts = [int(t) for t in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) != 2:
            raise ValueError
        return Signature(*parts)
    except (ValueError, InvariantError):
        raise ParseError(f"cannot parse signature {text!r}; expected 'p,q'") from None


def load_target(job: JobSpec) -> tuple[Signature, np.ndarray]:
    """Read the input JSON and reconcile its signature with ``--signature``."""
    try:
        if job.input_path in (None, "-"):
            data = json.load(sys.stdin)
        else:
            with open(job.input_path, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read input: {exc}") from None
    if not isinstance(data, dict) or "matrix" not in data:
        raise ParseError('input must be a JSON object with a "matrix" field')
    try:
        X = np.array(data["matrix"], dtype=float)
    except (TypeError, ValueError):
        raise ParseError("matrix entries must be real numbers") from None
    if X.ndim != 2 or X.shape[0] != X.shape[1] or not np.all(np.isfinite(X)):
        raise ParseError(f"matrix must be square with finite entries, got shape {X.shape}")
    sig = job.signature
    if "signature" in data:
        try:
            file_sig = Signature(*[int(v) for v in data["signature"]])
        except (TypeError, ValueError, InvariantError):
            raise ParseError(f"invalid signature field {data['signature']!r}") from None
        if sig is not None and sig != file_sig:
            raise ParseError(f"--signature {sig} disagrees with the input signature {file_sig}")
        sig = file_sig
    if sig is None:
        raise ParseError("no signature given (use --signature or a 'signature' field)")
    if X.shape[0] != sig.n:
        raise ParseError(f"matrix size {X.shape[0]} does not match signature {sig} (n = {sig.n})")
    return sig, X


# --- oracle residuals ----------------------------------------------------------

def oracle_residual(Y, X: np.ndarray) -> tuple[str, float]:
    """Residual of the generic conjugation map on a cataloged basis.

    This is independent of the strategy's own forward map: spin elements go
    through their Clifford embedding, multivectors through the matrix
    representation of a verified basis.
    """
    if isinstance(Y, Multivector):
        basis = representation_basis(Y.signature)
        R = generic_phi(basis, matrix_rep(Y, basis))
    else:
        basis = basis_for(Y.signature)
        R = generic_phi(basis, embed_spin(Y))
    return basis.name, float(np.max(np.abs(R - X)))


def group_residual(Y) -> float:
    if isinstance(Y, Multivector):
        one = Multivector.scalar(Y.signature, 1.0)
        return float((Y * Y.cc() - one).norm_inf())
    return float(Y.invariant_residual())


def _pair_report(pair: PreimagePair, X: np.ndarray) -> dict[str, Any]:
    basis_name, oracle = oracle_residual(pair.plus, X)
    return {
        "preimage": {"plus": fmt_element(pair.plus), "minus": fmt_element(pair.minus)},
        "factors": [fmt_factor(f) for f in pair.factors],
        "residuals": {
            "strategy": fmt(pair.residual),
            "oracle": fmt(oracle),
            "oracle_basis": basis_name,
            "group_relation": fmt(group_residual(pair.plus)),
        },
    }


# --- commands --------------------------------------------------------------------

class CommandFailure(Exception):
    """Carries a report and exit status out of a command."""

    def __init__(self, status: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.status = status
        self.report = report or {}


def _membership(X: np.ndarray, sig: Signature, tol: float) -> dict[str, Any]:
    rep = is_in_so_plus(X, sig, tol)
    if not rep.ok:
        raise MembershipError(f"target is not in SO+{sig}: {rep.reason}")
    return {"metric_residual": fmt(rep.metric_residual), "det": fmt(rep.det)}


def cmd_invert(job: JobSpec) -> dict[str, Any]:
    sig, X = load_target(job)
    if job.strategy not in STRATEGIES:
        raise UnsupportedError(f"unknown strategy {job.strategy!r}")
    if job.strategy not in supported_strategies(sig):
        raise UnsupportedError(f"strategy {job.strategy!r} does not support signature {sig}")
    membership = _membership(X, sig, job.tol)
    resolved = default_strategy(sig) if job.strategy == "auto" else job.strategy
    warnings: list[str] = []
    try:
        pair = invert(X, sig, resolved, job.tol)
    except GenericityError as exc:
        if job.strict:
            raise
        warnings.append(f"shirokov: {exc}; fell back to the agnostic rotor product")
        resolved = "agnostic"
        pair = agnostic_pair(X, sig, job.tol)
    warnings.extend(pair.warnings)
    out: dict[str, Any] = {"signature": [sig.p, sig.q], "resolved_strategy": resolved, "membership": membership}
    out.update(_pair_report(pair, X))
    agreements = {}
    if resolved != "agnostic" and "agnostic" in supported_strategies(sig):
        other = agnostic_pair(X, sig, job.tol)
        agreements["agnostic"] = fmt(_distance(pair, other))
    out["agreements"] = agreements
    out["warnings"] = warnings
    return out


def _distance(a: PreimagePair, b: PreimagePair) -> float:
    """Distance up to sign, comparing in a common multivector form when needed."""
    pa, pb = a.plus, b.plus
    if isinstance(pa, Multivector) == isinstance(pb, Multivector):
        return a.distance_up_to_sign(b)
    spin, mv = (pa, pb) if isinstance(pb, Multivector) else (pb, pa)
    M = embed_spin(spin)
    R = matrix_rep(mv, basis_for(spin.signature))
    return float(min(np.max(np.abs(M - R)), np.max(np.abs(M + R))))


def cmd_decompose(job: JobSpec) -> dict[str, Any]:
    sig, X = load_target(job)
    membership = _membership(X, sig, job.tol)
    factors = givens_decompose(X, sig, job.tol)
    recon = givens_product(factors, sig)
    warnings = []
    if sig in _tables.TABLES:
        for f in factors:
            try:
                row, param = _tables.lookup(sig, f)
            except UnsupportedError:
                warnings.append(f"{f.label}: no preimage table row")
                continue
            _, branch = row.evaluate(param)
            if branch in ("pi", "zero"):
                warnings.append(f"{f.label}: parameter at a half-angle boundary ({branch})")
    return {
        "signature": [sig.p, sig.q],
        "membership": membership,
        "factors": [fmt_factor(f) for f in factors],
        "residuals": {"reconstruction": fmt(np.max(np.abs(recon - X)))},
        "warnings": warnings,
    }


def cmd_polar(job: JobSpec) -> dict[str, Any]:
    sig, X = load_target(job)
    if sig.q != 1:
        raise UnsupportedError(f"the closed-form polar decomposition needs q = 1, got {sig}")
    membership = _membership(X, sig, job.tol)
    pd = polar_decompose_n1(X, sig, job.tol)
    n = sig.n
    out: dict[str, Any] = {
        "signature": [sig.p, sig.q],
        "membership": membership,
        "V": fmt_matrix(pd.V),
        "P": fmt_matrix(pd.P),
        "Q": fmt_matrix(pd.Q),
        "sigma": fmt(pd.sigma),
        "axis": [fmt(v) for v in pd.axis],
        "residuals": {
            "VP_minus_X": fmt(np.max(np.abs(pd.V @ pd.P - X))),
            "VtV_minus_I": fmt(np.max(np.abs(pd.V.T @ pd.V - np.eye(n)))),
            "P_asymmetry": fmt(np.max(np.abs(pd.P - pd.P.T))),
            "expQ_minus_P": fmt(np.max(np.abs(expm(pd.Q) - pd.P))),
            "min_leading_minor_P": fmt(np.min(leading_minors(pd.P))),
            "V_in_so_plus": bool(is_in_so_plus(pd.V, sig, job.tol).ok),
            "P_in_so_plus": bool(is_in_so_plus(pd.P, sig, job.tol).ok),
        },
        "warnings": [],
    }
    if sig == Signature(2, 1):
        res = invert_21(X, job.tol)
        out["spin"] = {"rotation_angle": fmt(res.theta), **_pair_report(res.pair, X)}
    elif sig == Signature(4, 1):
        res = invert_41_polar(X, job.tol)
        out["spin"] = {"kappas": [fmt(k) for k in res.kappas], **_pair_report(res.pair, X)}
    return out


def cmd_verify_bases(job: JobSpec) -> dict[str, Any]:
    want = job.signature
    bases = []
    all_ok = True
    for key, entry in catalog().items():
        w = entry.working
        if want is not None and w.signature != want:
            continue
        ax, bp = check_axioms(w), check_bp(w)
        all_ok &= ax.ok and bp.ok
        bases.append({
            "key": key,
            "source": entry.source,
            "field": w.field,
            "size": w.size,
            "printed_passes": entry.corrected is None or bool(check_axioms(entry.printed).ok and check_bp(entry.printed).ok),
            "corrected": entry.corrected is not None,
            "axioms": ax.ok,
            "bp1": bp.bp1_ok,
            "bp2": bp.bp2_ok,
        })
    extensions = []
    for b in extensions_up_to(10):
        if want is not None and b.signature != want:
            continue
        ax, bp = check_axioms(b), check_bp(b)
        all_ok &= ax.ok and bp.ok
        extensions.append({"name": b.name, "signature": [b.signature.p, b.signature.q], "axioms": ax.ok, "bp": bp.ok})
    discrepancies = [
        {"key": d.key, "check": d.check, "detail": d.detail, "correction": d.correction}
        for d in verify_catalog()
        if want is None or catalog()[d.key].working.signature == want
    ]
    out = {
        "bases": bases,
        "extensions": extensions,
        "basis_discrepancies": discrepancies,
        "table_discrepancies": table_discrepancies(want),
        "all_working_pass": all_ok,
        "warnings": [],
    }
    if not all_ok:
        raise CommandFailure(EXIT_MEMBERSHIP, "a working basis failed its checks", out)
    return out


_PROBE_PARAMETERS = (0.7, 2.1, 4.0, 5.5)


def _row_residual(sig: Signature, row: _tables.TableRow, variant: str) -> float:
    worst = 0.0
    for t in _PROBE_PARAMETERS:
        param = t if row.kind == "standard" else t - 3.0
        target = givens_embed(GivensFactor(row.kind, row.i, row.j, param), sig)
        M, _ = row.evaluate(param, variant)
        try:
            image = phi(SpinElement.from_matrix(sig, M), check=False)
        except InvariantError:
            return math.inf  # the printed entry is not even a spin group element
        worst = max(worst, float(np.max(np.abs(image - target))))
    return worst


def table_discrepancies(only: Signature | None = None) -> list[dict[str, Any]]:
    """Rows whose printed formula does not reproduce its Givens factor."""
    out = []
    for sig in sorted(_tables.TABLES, key=lambda s: (s.n, s.p)):
        if only is not None and sig != only:
            continue
        for row in _tables.rows(sig):
            if not row.printed_differs:
                continue
            out.append({
                "signature": [sig.p, sig.q],
                "row": row.label,
                "printed_residual": fmt(_row_residual(sig, row, "printed")),
                "corrected_residual": fmt(_row_residual(sig, row, "corrected")),
                "note": row.note,
            })
    return out


def cmd_bench(job: JobSpec) -> dict[str, Any]:
    sigs = [job.signature] if job.signature is not None else list(CONCRETE_SIGNATURES)
    rng = np.random.default_rng(job.seed)
    results = []
    for sig in sigs:
        corpus = [givens_product(random_givens_factors(sig, rng, beta_max=job.beta_max), sig) for _ in range(job.count)]
        strategies = [s for s in supported_strategies(sig) if s != "auto"]
        if job.strategy != "auto":
            if job.strategy not in strategies:
                raise UnsupportedError(f"strategy {job.strategy!r} does not support signature {sig}")
            strategies = [job.strategy]
        reference = [agnostic_pair(X, sig, job.tol) for X in corpus] if "agnostic" in supported_strategies(sig) else None
        for strategy in strategies:
            times, residuals, disagreements, failures = [], [], [], 0
            for k, X in enumerate(corpus):
                t0 = time.perf_counter()
                try:
                    pair = invert(X, sig, strategy, job.tol)
                except GenericityError:
                    failures += 1
                    continue
                times.append(time.perf_counter() - t0)
                residuals.append(oracle_residual(pair.plus, X)[1])
                if reference is not None:
                    disagreements.append(_distance(pair, reference[k]))
            entry: dict[str, Any] = {
                "signature": [sig.p, sig.q],
                "strategy": strategy,
                "targets": job.count,
                "failures": failures,
                "max_residual": fmt(max(residuals, default=math.nan)),
                "max_disagreement_vs_agnostic": fmt(max(disagreements, default=math.nan)),
            }
            if job.timing:
                entry["median_seconds"] = fmt(statistics.median(times)) if times else "nan"
            results.append(entry)
    return {"seed": job.seed, "count": job.count, "beta_max": fmt(job.beta_max), "results": results, "warnings": []}


_DISPATCH = {
    "invert": cmd_invert,
    "decompose": cmd_decompose,
    "polar": cmd_polar,
    "verify-bases": cmd_verify_bases,
    "bench": cmd_bench,
}


def run(job: JobSpec) -> tuple[dict[str, Any], int]:
    """Execute a job; returns the report and the process exit status."""
    header = {"format": REPORT_FORMAT, "job": job.echo()}
    try:
        body = _DISPATCH[job.command](job)
        status, error = EXIT_OK, None
    except CommandFailure as exc:
        body, status, error = exc.report, exc.status, str(exc)
    except ParseError as exc:
        body, status, error = {}, EXIT_PARSE, str(exc)
    except MembershipError as exc:
        body, status, error = {}, EXIT_MEMBERSHIP, str(exc)
    except GenericityError as exc:
        body, status, error = {}, EXIT_GENERICITY, str(exc)
    except UnsupportedError as exc:
        body, status, error = {}, EXIT_UNSUPPORTED, str(exc)
    except InvariantError as exc:
        # structural problems in the input (wrong determinant, pivot breakdown)
        body, status, error = {}, EXIT_MEMBERSHIP, str(exc)
    report = {**header, "status": "ok" if status == EXIT_OK else "error", "exit_code": status}
    if error is not None:
        report["error"] = error
    report.update(body)
    return report, status


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spincover", description="Spin group preimages of indefinite orthogonal matrices.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
        sig_help = "signature as p,q; must agree with the input file when both give one" if needs_input else "signature as p,q"
        p.add_argument("--signature", help=sig_help)
        if needs_input:
            p.add_argument("--input", default="-", help="JSON input file ('-' for stdin)")
        p.add_argument("--output", default="-", help="report file ('-' for stdout)")
        p.add_argument("--tol", type=float, default=STRUCTURE_TOL, help="structural tolerance")

    p = sub.add_parser("invert", help="preimage pair of a target matrix")
    common(p)
    p.add_argument("--strategy", default="auto", choices=STRATEGIES)
    p.add_argument("--strict", action="store_true", help="fail (exit 3) instead of falling back when shirokov is not generic")

    p = sub.add_parser("decompose", help="Givens factorisation of a target matrix")
    common(p)

    p = sub.add_parser("polar", help="closed-form polar decomposition in SO+(n,1)")
    common(p)

    p = sub.add_parser("verify-bases", help="exact checks of the basis catalog and its extensions")
    common(p, needs_input=False)

    p = sub.add_parser("bench", help="race strategies on random Givens-product corpora")
    common(p, needs_input=False)
    p.add_argument("--strategy", default="auto", choices=STRATEGIES, help="auto races every applicable strategy")
    p.add_argument("--count", type=int, default=20, help="targets per signature")
    p.add_argument("--beta-max", type=float, default=1.0, help="rapidities are drawn from [-beta_max, beta_max]")
    p.add_argument("--no-timing", action="store_true", help="omit wall times so the report is deterministic")
    return parser


def job_from_args(args: argparse.Namespace) -> JobSpec:
    seed_text = os.environ.get("SPINCOVER_SEED", "0")
    try:
        seed = int(seed_text)
    except ValueError:
        raise ParseError(f"SPINCOVER_SEED must be an integer, got {seed_text!r}") from None
    return JobSpec(
        command=args.command,
        signature=parse_signature(args.signature) if args.signature else None,
        strategy=getattr(args, "strategy", "auto"),
        input_path=getattr(args, "input", None),
        output_path=args.output,
        tol=args.tol,
        strict=getattr(args, "strict", False),
        count=getattr(args, "count", 20),
        timing=not getattr(args, "no_timing", False),
        seed=seed,
        beta_max=getattr(args, "beta_max", 1.0),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        job = job_from_args(args)
    except ParseError as exc:
        print(f"spincover: {exc}", file=sys.stderr)
        return EXIT_PARSE
    log.info("running %s", job.command)
    report, status = run(job)
    text = dumps(report)
    if job.output_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(job.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    if status != EXIT_OK:
        print(f"spincover: {report.get('error', 'failed')}", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
