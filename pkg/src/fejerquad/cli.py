"""Command-line front end.

Subcommands: verify-lemma, bound, quad, means, moment, check-hconvex,
battery.  Exit status is 0 when every checked inequality holds, 1 when
any is violated, and 2 on input or validation errors.  Reports render as
json (default), text, or csv; csv uses '.' decimals and 15 significant
digits.  Values may come from a JSON config file (--config); explicit
flags override the file, and the FEJER_TOL environment variable overrides
the integration abs_tol unless --abs-tol is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .applications import (
    DensitySpec,
    MeanParams,
    lambda_moment,
    means_bound_check,
    means_corollary_bound,
    moment_bound_check,
)
from .battery import run_battery
from .bounds import (
    DerivBounds,
    LipschitzConstant,
    bound_bounded_derivative,
    bound_convex_left,
    bound_convex_right,
    bound_h_convex,
    bound_h_convex_mirror,
    bound_lipschitz,
    bound_s_convex,
)
from .errors import FejerQuadError, ParameterError
from .fejer import (
    ProblemSpec,
    identity_defect,
    m_abs_integral,
    m_antisymmetry_defect,
    m_bound_holder,
    m_bound_sup,
    m_sign_violation,
    m_symmetric_form,
    m_value,
    make_problem,
    mirrored_identity_defect,
)
from .hconvexity import check_h_convex
from .integrate import QuadratureSettings
from .kernel import HKernel
from .quadrature import (
    Partition,
    adaptive_refine,
    run_quadrature,
    uniform_partition,
)

__all__ = ["main", "emit_mplot", "parse_kernel_arg"]


def _fmt(v: float) -> str:
    return f"{v:.15g}"


def parse_kernel_arg(text: str) -> HKernel:
    """Kernel CLI syntax: power:K, constant:C, or custom:<expr>."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ParameterError(f"kernel must look like power:K, got {text!r}")
    if kind == "power":
        return HKernel.power(float(rest))
    if kind == "constant":
        return HKernel.constant(float(rest))
    if kind == "custom":
        return HKernel.custom(rest)
    raise ParameterError(f"unknown kernel kind {kind!r}")


def emit_mplot(p: ProblemSpec, grid: int, path: str, settings=None) -> str:
    """Write a CSV table of M(t) at `grid` uniform t values; returns path."""
    if grid < 2:
        raise ValueError("mplot grid must be at least 2")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("t,M\n")
        for i in range(grid):
            t = i / (grid - 1)
            handle.write(f"{_fmt(t)},{_fmt(m_value(p, t, settings))}\n")
    return path


# ---------------------------------------------------------------------------
# Argument handling


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--output-path", default=None)
    common.add_argument("--config", default=None, help="JSON config file; flags win")
    common.add_argument("--abs-tol", type=float, default=None)
    common.add_argument("--rel-tol", type=float, default=None)
    common.add_argument("--max-depth", type=int, default=None)

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--f", default=None, help="expression in x")
    problem.add_argument("--fprime", default=None, help="derivative; omit for numeric")
    problem.add_argument("--g", default=None, help="weight expression in x")
    problem.add_argument("--a", type=float, default=None)
    problem.add_argument("--b", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="fejerquad",
        description="Weighted trapezoidal inequalities for h-convex functions",
    )
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("verify-lemma", parents=[common, problem])
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--sup-samples", type=int, default=None)
    sp.add_argument("--emit-mplot", default=None, help="write CSV of M(t) here")
    sp.add_argument("--mplot-grid", type=int, default=None)

    sp = sub.add_parser("bound", parents=[common, problem])
    sp.add_argument("--kernel", default=None)
    sp.add_argument("--mirror", action="store_true")
    sp.add_argument("--s-convex", type=float, default=None)
    sp.add_argument("--convex", action="store_true")
    sp.add_argument("--deriv-bounds", default=None, help="LO,HI for m <= f' <= M")
    sp.add_argument("--lipschitz", type=float, default=None)

    sp = sub.add_parser("quad", parents=[common, problem])
    sp.add_argument("--kernel", default=None)
    sp.add_argument("--partition", default=None, help="comma-separated breakpoints")
    sp.add_argument("--n", type=int, default=None, help="uniform subintervals")
    sp.add_argument("--adaptive", action="store_true")
    sp.add_argument("--tol", type=float, default=None, help="adaptive target bound")
    sp.add_argument("--max-intervals", type=int, default=None)

    sp = sub.add_parser("means", parents=[common])
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--n", type=float, default=None)
    sp.add_argument("--k", type=float, default=None)

    sp = sub.add_parser("moment", parents=[common])
    sp.add_argument("--g", default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--kernel", default=None)
    sp.add_argument("--f", default=None)
    sp.add_argument("--fprime", default=None)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)

    sp = sub.add_parser("check-hconvex", parents=[common])
    sp.add_argument("--phi", default=None, help="expression in x to test")
    sp.add_argument("--kernel", default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--grid", type=int, default=None)

    sub.add_parser("battery", parents=[common])
    return parser


_CONFIG_KEY_MAP = {"lambda": "lam"}


def _apply_config(args: argparse.Namespace):
    if not args.config:
        return
    with open(args.config, "r", encoding="utf-8") as handle:
        config = json.load(handle)
    if not isinstance(config, dict):
        raise ParameterError("config file must hold a JSON object")
    for key, value in config.items():
        dest = _CONFIG_KEY_MAP.get(key, key.replace("-", "_"))
        if not hasattr(args, dest):
            continue
        current = getattr(args, dest)
        if current is None:
            setattr(args, dest, value)
        elif current is False and isinstance(value, bool):
            setattr(args, dest, value)


def _make_settings(args: argparse.Namespace) -> QuadratureSettings:
    abs_tol = args.abs_tol
    if abs_tol is None:
        env = os.environ.get("FEJER_TOL")
        if env is not None:
            abs_tol = float(env)
    base = QuadratureSettings()
    return QuadratureSettings(
        abs_tol=abs_tol if abs_tol is not None else base.abs_tol,
        rel_tol=args.rel_tol if args.rel_tol is not None else base.rel_tol,
        max_depth=args.max_depth if args.max_depth is not None else base.max_depth,
    )


def _require(args: argparse.Namespace, *names: str):
    for name in names:
        if getattr(args, name) is None:
            raise ParameterError(f"missing required value --{name.replace('_', '-')}")


def _problem_from(args, settings, default_f=None, default_fprime=None) -> ProblemSpec:
    _require(args, "g", "a", "b")
    f = args.f if args.f is not None else default_f
    fprime = args.fprime if args.fprime is not None else (
        default_fprime if args.f is None else None
    )
    if f is None:
        raise ParameterError("missing required value --f")
    return make_problem(f, fprime, args.g, args.a, args.b)


def _problem_dict(p: ProblemSpec) -> dict:
    return {
        "f": p.f.source,
        "fprime": p.fprime.source if p.fprime is not None else None,
        "g": p.g.source,
        "a": p.a,
        "b": p.b,
        "g_symmetric": p.g_symmetric,
        "g_nonnegative": p.g_nonnegative,
    }


# ---------------------------------------------------------------------------
# Command handlers: each returns (payload dict, all-inequalities-ok flag)


def _cmd_verify_lemma(args, settings) -> tuple:
    p = _problem_from(args, settings, default_f="x^2", default_fprime="2*x")
    grid = args.grid if args.grid is not None else 101
    sup_samples = args.sup_samples if args.sup_samples is not None else 1001

    agreement = max(
        abs(
            m_value(p, i / (grid - 1), settings)
            - m_symmetric_form(p, i / (grid - 1), settings)
        )
        for i in range(grid)
    )
    antisymmetry = m_antisymmetry_defect(p, grid, settings)
    sign = m_sign_violation(p, grid, settings)
    absint = m_abs_integral(p, settings)
    sup = m_bound_sup(p, sup_samples, settings, measured=absint)
    holder = m_bound_holder(p, (2.0, 2.0), settings, measured=absint)
    ident = identity_defect(p, settings)
    mirrored = mirrored_identity_defect(p, settings)

    checks = [
        {"name": "symmetric_form_agreement", "value": agreement, "tolerance": 1e-8},
        {"name": "antisymmetry_defect", "value": antisymmetry, "tolerance": 1e-8},
        {"name": "sign_violation", "value": sign, "tolerance": 1e-10},
        {"name": "abs_integral_sup_slack", "value": -sup.slack, "tolerance": 1e-8},
        {
            "name": "abs_integral_holder_slack",
            "value": -holder.slack,
            "tolerance": 1e-8,
        },
        {"name": "identity_defect", "value": ident, "tolerance": 1e-7},
        {"name": "identity_mirrored_defect", "value": mirrored, "tolerance": 1e-7},
    ]
    for c in checks:
        c["passed"] = c["value"] <= c["tolerance"]
    ok = all(c["passed"] for c in checks)

    mplot_path = None
    if args.emit_mplot:
        mplot_grid = args.mplot_grid if args.mplot_grid is not None else 101
        mplot_path = emit_mplot(p, mplot_grid, args.emit_mplot, settings)

    payload = {
        "command": "verify-lemma",
        "problem": _problem_dict(p),
        "checks": checks,
        "passed": ok,
        "mplot_path": mplot_path,
    }
    return payload, ok


def _cmd_bound(args, settings) -> tuple:
    _require(args, "f", "kernel")
    p = _problem_from(args, settings)
    h = parse_kernel_arg(args.kernel)
    reports = [bound_h_convex(p, h, settings)]
    if args.mirror:
        reports.append(bound_h_convex_mirror(p, h, settings))
    if args.s_convex is not None:
        reports.append(bound_s_convex(p, args.s_convex, settings))
    if args.convex:
        reports.append(bound_convex_left(p, settings))
        reports.append(bound_convex_right(p, settings))
    if args.deriv_bounds is not None:
        lo, hi = (float(v) for v in args.deriv_bounds.split(","))
        reports.extend(bound_bounded_derivative(p, DerivBounds(lo, hi), settings=settings).reports())
    if args.lipschitz is not None:
        reports.extend(
            bound_lipschitz(p, LipschitzConstant(args.lipschitz), settings).reports()
        )
    ok = all(r.satisfied for r in reports)
    payload = {
        "command": "bound",
        "problem": _problem_dict(p),
        "kernel": h.to_spec(),
        "reports": [r.to_dict() for r in reports],
        "passed": ok,
    }
    return payload, ok


def _cmd_quad(args, settings) -> tuple:
    _require(args, "f", "kernel")
    p = _problem_from(args, settings)
    h = parse_kernel_arg(args.kernel)
    converged = True
    if args.adaptive:
        _require(args, "tol")
        max_intervals = args.max_intervals if args.max_intervals is not None else 256
        refined = adaptive_refine(p, h, args.tol, max_intervals, settings)
        partition = refined.partition
        converged = refined.converged
    elif args.partition is not None:
        partition = Partition(tuple(float(v) for v in args.partition.split(",")))
    else:
        partition = uniform_partition(p.a, p.b, args.n if args.n is not None else 8)
    result = run_quadrature(p, h, partition, settings)
    certified = result.actual_error <= result.error_bound + 1e-8 * (
        1.0 + result.error_bound
    )
    ok = certified and converged
    payload = {
        "command": "quad",
        "problem": _problem_dict(p),
        "kernel": h.to_spec(),
        "partition": partition.to_list(),
        "adaptive": bool(args.adaptive),
        "converged": converged,
        "value": result.value,
        "error_bound": result.error_bound,
        "reference": result.reference,
        "actual_error": result.actual_error,
        "warnings": list(result.warnings),
        "passed": ok,
    }
    return payload, ok


def _cmd_means(args, settings) -> tuple:
    _require(args, "a", "b", "n", "k")
    report = means_bound_check(MeanParams(args.a, args.b, args.n, args.k))
    payload = {
        "command": "means",
        "params": {"a": args.a, "b": args.b, "n": args.n, "k": args.k},
        "report": report.to_dict(),
        "corollary_k1_bound": means_corollary_bound(args.a, args.b, args.n),
        "passed": report.satisfied,
    }
    return payload, report.satisfied


def _cmd_moment(args, settings) -> tuple:
    _require(args, "g", "a", "b", "kernel")
    d = DensitySpec.create(args.g, args.a, args.b, settings)
    h = parse_kernel_arg(args.kernel)
    lam_moment = None
    lam_scaled_bound = None
    if args.lam is not None:
        if args.lam == 0.0:
            raise ParameterError("lambda must be nonzero")
        f = f"x^{args.lam!r}/{args.lam!r}"
        fprime = f"x^{args.lam - 1.0!r}"
        report = moment_bound_check(d, f, fprime, h, settings)
        lam_moment = lambda_moment(d, args.lam, settings)
        # variant with the extra lambda factor, reported for comparison
        lam_scaled_bound = args.lam * report.bound
    else:
        _require(args, "f")
        report = moment_bound_check(d, args.f, args.fprime, h, settings)
    payload = {
        "command": "moment",
        "density": {
            "g": d.g.source,
            "a": d.a,
            "b": d.b,
            "normalization_defect": d.normalization_defect,
        },
        "kernel": h.to_spec(),
        "lambda": args.lam,
        "lambda_moment": lam_moment,
        "lambda_scaled_bound": lam_scaled_bound,
        "report": report.to_dict(),
        "passed": report.satisfied,
    }
    return payload, report.satisfied


def _cmd_check_hconvex(args, settings) -> tuple:
    _require(args, "phi", "kernel", "a", "b")
    from .expr import parse

    phi = parse(args.phi)
    h = parse_kernel_arg(args.kernel)
    grid = args.grid if args.grid is not None else 21
    report = check_h_convex(phi, h, args.a, args.b, grid=grid)
    ok = not report.refuted
    payload = {
        "command": "check-hconvex",
        "phi": phi.source,
        "kernel": h.to_spec(),
        "a": args.a,
        "b": args.b,
        "passed": ok,
    }
    payload.update(report.to_dict())
    return payload, ok


def _cmd_battery(args, settings) -> tuple:
    summary = run_battery()
    payload = {"command": "battery"}
    payload.update(summary.to_dict())
    return payload, summary.passed


_DISPATCH = {
    "verify-lemma": _cmd_verify_lemma,
    "bound": _cmd_bound,
    "quad": _cmd_quad,
    "means": _cmd_means,
    "moment": _cmd_moment,
    "check-hconvex": _cmd_check_hconvex,
    "battery": _cmd_battery,
}


# ---------------------------------------------------------------------------
# Rendering


def _render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _report_lines(report: dict) -> list:
    verdict = "OK" if report["satisfied"] else "VIOLATED"
    lines = [
        f"{report['label']}: measured={_fmt(report['measured'])} "
        f"bound={_fmt(report['bound'])} slack={_fmt(report['slack'])} [{verdict}]"
    ]
    for w in report["warnings"]:
        lines.append(f"  warning: {w}")
    return lines


def _render_text(payload: dict) -> str:
    kind = payload["command"]
    lines = [f"command: {kind}"]
    if kind == "verify-lemma":
        for c in payload["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(
                f"{mark} {c['name']}: {_fmt(c['value'])} (tolerance {_fmt(c['tolerance'])})"
            )
    elif kind == "bound":
        for r in payload["reports"]:
            lines.extend(_report_lines(r))
    elif kind == "quad":
        lines.append(f"partition ({len(payload['partition']) - 1} intervals): "
                     + ",".join(_fmt(x) for x in payload["partition"]))
        for key in ("value", "error_bound", "reference", "actual_error"):
            lines.append(f"{key}: {_fmt(payload[key])}")
        lines.append(f"converged: {payload['converged']}")
        for w in payload["warnings"]:
            lines.append(f"warning: {w}")
    elif kind in ("means", "moment"):
        lines.extend(_report_lines(payload["report"]))
        if kind == "means":
            lines.append(f"corollary_k1_bound: {_fmt(payload['corollary_k1_bound'])}")
        elif payload["lambda"] is not None:
            lines.append(f"lambda_moment: {_fmt(payload['lambda_moment'])}")
            lines.append(f"lambda_scaled_bound: {_fmt(payload['lambda_scaled_bound'])}")
    elif kind == "check-hconvex":
        lines.append(
            f"checked_triples: {payload['checked_triples']} "
            f"violations: {payload['violation_count']} "
            f"max_violation: {_fmt(payload['max_violation'])}"
        )
        lines.append(f"note: {payload['note']}")
    elif kind == "battery":
        for c in payload["cases"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"{mark} {c['name']}")
        lines.append(f"total: {payload['total']} failures: {payload['failures']}")
    lines.append(f"passed: {payload['passed']}")
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _render_csv(payload: dict) -> str:
    kind = payload["command"]
    rows = []
    if kind == "verify-lemma":
        rows.append(("name", "value", "tolerance", "passed"))
        for c in payload["checks"]:
            rows.append((c["name"], c["value"], c["tolerance"], c["passed"]))
    elif kind == "bound":
        rows.append(("label", "measured", "bound", "slack", "satisfied"))
        for r in payload["reports"]:
            rows.append((r["label"], r["measured"], r["bound"], r["slack"], r["satisfied"]))
    elif kind in ("means", "moment"):
        rows.append(("label", "measured", "bound", "slack", "satisfied"))
        r = payload["report"]
        rows.append((r["label"], r["measured"], r["bound"], r["slack"], r["satisfied"]))
    elif kind == "quad":
        rows.append(("field", "value"))
        for key in ("value", "error_bound", "reference", "actual_error", "converged"):
            rows.append((key, payload[key]))
        rows.append(("partition", " ".join(_fmt(x) for x in payload["partition"])))
    elif kind == "check-hconvex":
        rows.append(("field", "value"))
        for key in ("checked_triples", "violation_count", "max_violation", "passed"):
            rows.append((key, payload[key]))
    elif kind == "battery":
        rows.append(("name", "passed"))
        for c in payload["cases"]:
            rows.append((c["name"], c["passed"]))
    return "\n".join(",".join(_csv_cell(v) for v in row) for row in rows) + "\n"


_RENDERERS = {"json": _render_json, "text": _render_text, "csv": _render_csv}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        _apply_config(args)
        settings = _make_settings(args)
        payload, ok = _DISPATCH[args.command](args, settings)
    except (FejerQuadError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fmt = args.format if args.format is not None else "json"
    rendered = _RENDERERS[fmt](payload)
    if args.output_path:
        with open(args.output_path, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
