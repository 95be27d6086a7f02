"""Command-line front end.

Reads an operator description (preset or explicit coefficient expressions),
runs the requested tasks, and emits a deterministic JSON report.  Complex
numbers are serialized as two-element [re, im] arrays and matrices as
row-major nested arrays.

Exit codes: 0 success, 1 validation failure, 2 numerical failure,
3 configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import exact, extension, spectral
from .brackets import SolutionTraces, check_bracket_constancy
from .errors import (
    EvaluationError,
    ExprSyntaxError,
    GammaBijectivityError,
    IntegrationError,
    KreinExtError,
    NumericalError,
    StructureError,
)
from .integration import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, fundamental_matrix
from .system import (
    Interval,
    MatrixFn,
    ShinZettlSystem,
    preset_four_coeff,
    preset_fourth_order,
    preset_pure,
    validate_hypothesis,
)

KNOWN_TASKS = ("validate", "krein", "friedrichs", "spectrum", "closed-form", "verify-all")
DEFAULT_LAMBDA_MAX = 100.0


class ConfigError(KreinExtError):
    pass


@dataclass
class JobConfig:
    preset: Optional[str] = None
    order: Optional[int] = None
    block_size: int = 1
    interval: Optional[tuple] = None
    coefficients: dict = field(default_factory=dict)  # p, q, r, s or W / Z.j.k
    tasks: list = field(default_factory=list)
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    lambda_max: float = DEFAULT_LAMBDA_MAX
    out: Optional[str] = None


def _as_jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.complexfloating,)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return float(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.ndarray):
        return [[_as_jsonable(complex(v)) for v in row] for row in np.atleast_2d(value)]
    if isinstance(value, (list, tuple)):
        return [_as_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _as_jsonable(v) for k, v in value.items()}
    return value


def load_config_file(path: str) -> JobConfig:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep Z.j.k key case and dots intact
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    cfg = JobConfig()
    if parser.has_section("operator"):
        op = parser["operator"]
        cfg.preset = op.get("preset", None)
        if "order" in op:
            cfg.order = int(op["order"])
        if "block_size" in op:
            cfg.block_size = int(op["block_size"])
        if "interval" in op:
            cfg.interval = _parse_interval(op["interval"])
        for key, value in op.items():
            if key in ("preset", "order", "block_size", "interval"):
                continue
            cfg.coefficients[key] = value
    if parser.has_section("tolerances"):
        tol = parser["tolerances"]
        cfg.rel_tol = float(tol.get("rel_tol", cfg.rel_tol))
        cfg.abs_tol = float(tol.get("abs_tol", cfg.abs_tol))
        cfg.lambda_max = float(tol.get("lambda_max", cfg.lambda_max))
    if parser.has_section("tasks"):
        raw = parser["tasks"].get("tasks", "")
        cfg.tasks = [t for t in raw.replace(",", " ").split() if t]
    return cfg


def _parse_interval(text: str) -> tuple:
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ConfigError(f"interval must be 'a,b', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad interval {text!r}") from exc


def build_system(cfg: JobConfig) -> ShinZettlSystem:
    interval = cfg.interval
    if cfg.preset == "pure":
        if cfg.order is None or cfg.order % 2 != 0 or cfg.order < 2:
            raise ConfigError("pure preset requires an even --order >= 2")
        return preset_pure(cfg.order // 2, interval or (0.0, 1.0))
    if cfg.preset == "fourth-order":
        return preset_fourth_order(interval)
    if cfg.preset == "four-coeff":
        coeff = {k: cfg.coefficients.get(k, "1") for k in ("p", "q", "r")}
        coeff["s"] = cfg.coefficients.get("s", "0")
        if interval is None:
            raise ConfigError("four-coeff preset requires --interval")
        return preset_four_coeff(
            coeff["p"], coeff["q"], coeff["r"], coeff["s"], interval, M=cfg.block_size
        )
    if cfg.preset is not None:
        raise ConfigError(f"unknown preset {cfg.preset!r}")

    # explicit operator: scalar entries Z.j.k and W (block size 1)
    if cfg.block_size != 1:
        raise ConfigError("explicit operators support block_size 1 only; use a preset")
    if cfg.order is None or cfg.order % 2 != 0 or cfg.order < 2:
        raise ConfigError("explicit operator requires an even order >= 2")
    if interval is None:
        raise ConfigError("explicit operator requires an interval")
    n = cfg.order
    N = n // 2
    entries = [[MatrixFn.scalar(0.0)] * n for _ in range(n)]
    for key, value in cfg.coefficients.items():
        if not key.startswith("Z."):
            continue
        try:
            _, j, k = key.split(".")
            j, k = int(j), int(k)
        except ValueError as exc:
            raise ConfigError(f"bad coefficient key {key!r}") from exc
        if not (1 <= j <= n and 1 <= k <= n):
            raise ConfigError(f"coefficient key {key!r} out of range")
        entries[j - 1][k - 1] = MatrixFn.scalar(value)
    W = MatrixFn.scalar(cfg.coefficients.get("W", "1"))
    try:
        return ShinZettlSystem(M=1, N=N, interval=Interval(*interval), W=W, Z=entries)
    except StructureError as exc:
        raise ConfigError(str(exc)) from exc


def _validation_section(report) -> dict:
    return {
        "passed": report.passed,
        "samples": report.samples,
        "checks": {
            c.name: {"worst": c.worst, "threshold": c.threshold, "mode": c.mode, "ok": c.ok}
            for c in report.checks
        },
    }


def _pair_section(pair, label, certified) -> dict:
    return {
        "A": _as_jsonable(pair.A),
        "B": _as_jsonable(pair.B),
        "role": label,
        "positivity_certified": certified,
    }


def run(cfg: JobConfig):
    """Execute the configured tasks; returns (exit_code, report dict)."""
    report = {"tasks": list(cfg.tasks), "tolerances": {
        "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol}}
    if not cfg.tasks:
        raise ConfigError("no tasks requested")
    for task in cfg.tasks:
        if task not in KNOWN_TASKS:
            raise ConfigError(f"unknown task {task!r}")

    closed_form_only = set(cfg.tasks) == {"closed-form"}
    if "closed-form" in cfg.tasks:
        if cfg.order is None or cfg.order % 2 != 0:
            raise ConfigError("closed-form task requires an even order")
        N = cfg.order // 2
        # decimal endpoints are treated as exact rationals here
        interval = tuple(Fraction(str(v)) for v in (cfg.interval or (0, 1)))
        ok = exact.verify_factorization(N, interval)
        tk = exact.toeplitz_TK(N, interval)
        report["closed_form"] = {
            "order": 2 * N,
            "factorization_ok": ok,
            "T_K": [[str(v) if isinstance(v, Fraction) else float(v) for v in row]
                    for row in tk],
        }
        if closed_form_only:
            return (0 if ok else 2), report

    sys_ = build_system(cfg)
    report["operator"] = {
        "M": sys_.M,
        "N": sys_.N,
        "order": sys_.order,
        "interval": [sys_.interval.a, sys_.interval.b],
        "preset": cfg.preset,
    }

    validation = validate_hypothesis(sys_)
    report["validation"] = _validation_section(validation)
    if not validation.passed:
        return 1, report

    need_pipeline = bool(
        {"krein", "friedrichs", "spectrum", "verify-all"} & set(cfg.tasks)
    )
    if not need_pipeline:
        return 0, report

    scan = spectral.lowest_friedrichs_eigenvalue(
        sys_, cfg.lambda_max, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol
    )
    certified = scan.certified_strictly_positive
    report["positivity"] = {
        "certified_strictly_positive": certified,
        "lambda_min": scan.lambda_min,
        "scan_bound": scan.scan_bound,
        "note": (
            "no eigenvalue found in [0, scan_bound]; certificate holds up to "
            "the scan bound only"
            if scan.lambda_min is None
            else "lowest Friedrichs eigenvalue located"
        ),
    }
    if not certified:
        report["positivity"]["warning"] = (
            "strict positivity not certified; boundary matrices are emitted "
            "under the 'candidate' label and may not define the smallest "
            "nonnegative extension"
        )

    fm = fundamental_matrix(sys_, lam=0.0, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)
    basis = extension.kernel_basis(sys_, fm)
    krein = extension.build_krein_pair(basis)
    B_inv = extension.invert_B(krein)
    T_K = extension.transfer_matrix(krein, B_inv)
    fried = extension.friedrichs_pair(sys_.M, sys_.N)
    krein_label = "Krein--von Neumann" if certified else "candidate"

    matrices = {}
    if "krein" in cfg.tasks or "verify-all" in cfg.tasks:
        matrices["A_K"] = _as_jsonable(krein.A)
        matrices["B_K"] = _as_jsonable(krein.B)
        matrices["B_K_inv"] = _as_jsonable(B_inv)
        matrices["T_K"] = _as_jsonable(T_K)
        matrices["role"] = krein_label
        matrices["conditioning"] = basis.conditioning
    if "friedrichs" in cfg.tasks or "verify-all" in cfg.tasks:
        matrices["friedrichs"] = _pair_section(fried, "Friedrichs", certified)
    report["matrices"] = matrices

    checks = {}
    sa_k = extension.verify_self_adjoint(krein)
    sa_f = extension.verify_self_adjoint(fried)
    checks["krein_self_adjoint"] = {
        "rank_AB": sa_k.rank_AB,
        "symplectic_defect": sa_k.symplectic_defect,
        "verdict": sa_k.verdict,
    }
    checks["friedrichs_self_adjoint"] = {
        "rank_AB": sa_f.rank_AB,
        "symplectic_defect": sa_f.symplectic_defect,
        "verdict": sa_f.verdict,
    }
    prime, null_dim = extension.relative_primeness(krein, fried)
    checks["relatively_prime"] = {"verdict": prime, "common_nullspace_dim": null_dim}

    if "verify-all" in cfg.tasks:
        n = sys_.size
        recon = float(np.linalg.norm(
            extension.lambda_matrix(fm) @ basis.C - np.eye(n)))
        checks["gamma_reconstruction_residual"] = recon
        checks["b_inverse_product_residual"] = float(
            np.linalg.norm(B_inv @ krein.B - np.eye(n)))
        worst = 0.0
        cols = [SolutionTraces(fm, basis.C[:, [j]]) for j in range(n)]
        for fa in cols:
            for fb in cols:
                worst = max(worst, check_bracket_constancy(fa, fb))
        checks["bracket_constancy_worst"] = worst
        for col in range(n):
            ok, res = extension.membership(
                krein, basis.C[:, col], basis.Eb[:, col], tol=1e-8
            )
            if not ok:
                checks.setdefault("membership_failures", []).append(
                    {"column": col, "residual": res})
        checks["kernel_membership_ok"] = "membership_failures" not in checks
    report["checks"] = checks

    hard_checks = [sa_k.verdict, sa_f.verdict, prime]
    if "verify-all" in cfg.tasks:
        hard_checks.append(checks["kernel_membership_ok"])
        hard_checks.append(checks["bracket_constancy_worst"] <= 1e-8)
    code = 0 if all(hard_checks) else 2
    return code, report


def write_report(report: dict, out: Optional[str]):
    text = json.dumps(_as_jsonable(report), indent=2, sort_keys=True)
    if out:
        with open(out, "w") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="path to a config file")
    parser.add_argument("--preset", choices=["pure", "fourth-order", "four-coeff"])
    parser.add_argument("--order", type=int, help="operator order 2N")
    parser.add_argument("--block-size", type=int, help="matrix block size M")
    parser.add_argument("--interval", help="endpoints 'a,b'")
    parser.add_argument("--task", action="append", default=None,
                        help="task name (repeatable)")
    parser.add_argument("--rel-tol", type=float)
    parser.add_argument("--abs-tol", type=float)
    parser.add_argument("--lambda-max", type=float)
    parser.add_argument("--out", help="write the JSON report to this path")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krein-ext",
        description="boundary-condition matrices for Krein-von Neumann extensions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, default_tasks in (
        ("compute", ["validate", "krein"]),
        ("verify", ["validate", "verify-all"]),
        ("closed-form", ["closed-form"]),
    ):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(default_tasks=default_tasks)
    return parser


def config_from_args(args) -> JobConfig:
    cfg = load_config_file(args.config) if args.config else JobConfig()
    if args.preset:
        cfg.preset = args.preset
    if args.order is not None:
        cfg.order = args.order
    if args.block_size is not None:
        cfg.block_size = args.block_size
    if args.interval:
        cfg.interval = _parse_interval(args.interval)
    if args.task:
        cfg.tasks = list(args.task)
    if not cfg.tasks:
        cfg.tasks = list(args.default_tasks)
    if args.rel_tol is not None:
        cfg.rel_tol = args.rel_tol
    if args.abs_tol is not None:
        cfg.abs_tol = args.abs_tol
    if args.lambda_max is not None:
        cfg.lambda_max = args.lambda_max
    cfg.out = args.out
    return cfg


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        code, report = run(cfg)
    except (ConfigError, ExprSyntaxError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except (GammaBijectivityError, IntegrationError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (EvaluationError, StructureError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1
    write_report(report, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
