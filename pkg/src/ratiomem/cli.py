"""Command-line surface.

Exit codes: 0 success, 1 usage or validation error, 2 no positive
equilibrium, 3 numeric failure.  All JSON artifacts are byte-identical
to the HTTP server's responses for the same inputs; a metadata header
(suppressible with --no-meta) is the only addition.
"""

from __future__ import annotations

import argparse
import datetime
import sys

import numpy as np

from ratiomem import __version__
from .errors import (
    DomainError,
    NoPositiveEquilibriumError,
    NumericFailureError,
    RatioMemError,
)
from .model import ModelParams, State, equilibrium, prey_nullcline_sample
from .linearize import build_jacobians
from .presets import PRESETS, load_preset
from .serialize import (
    equilibrium_to_dict,
    jacobians_to_dict,
    nullcline_to_dict,
    params_from_dict,
    params_to_dict,
    report_to_dict,
    scan_to_csv,
    scan_to_dict,
    to_json_bytes,
    trajectory_to_csv,
    trajectory_to_dict,
)
from .simulate import integrate
from .stability import alpha_scan, stability_report
from . import oracle


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise UsageError(message)


def _add_param_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("model parameters")
    g.add_argument("--preset", choices=sorted(PRESETS),
                   help="named parameter set (r, alpha still overridable)")
    g.add_argument("--params", metavar="FILE.json",
                   help="JSON file with the full parameter document")
    g.add_argument("--r", type=float, help="maximal prey growth rate")
    g.add_argument("--K", type=float, help="carrying capacity")
    g.add_argument("--alpha", type=float,
                   help="memory rate (omit for the undelayed system)")
    g.add_argument("--predator", action="append", metavar="kind:m:a:d",
                   help="repeatable predator spec, e.g. holling:16:4:8")
    p.add_argument("--out", metavar="PATH", help="artifact path (default stdout)")
    p.add_argument("--format", choices=["json", "csv", "table"], default="json")
    p.add_argument("--no-meta", action="store_true",
                   help="omit the timestamp metadata header")


def _parse_predator(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"--predator wants kind:m:a:d, got {text!r}")
    kind, m, a, d = parts
    try:
        return {"kind": kind, "m": float(m), "a": float(a), "d": float(d)}
    except ValueError:
        raise UsageError(f"non-numeric predator spec {text!r}")


def _params_from_args(args, need_alpha: bool = False) -> ModelParams:
    if args.params:
        import json
        with open(args.params) as fh:
            doc = json.load(fh)
        if args.r is not None:
            doc["r"] = args.r
        if args.K is not None:
            doc["K"] = args.K
        if args.alpha is not None:
            doc["alpha"] = args.alpha
        params = params_from_dict(doc)
    elif args.preset:
        params = load_preset(args.preset, r=args.r, alpha=args.alpha)
        if args.K is not None:
            from .model import GrowthLaw
            params = params.with_(growth=GrowthLaw(K=args.K))
        if args.predator:
            raise UsageError("--predator cannot be combined with --preset")
    else:
        if args.r is None or args.K is None or not args.predator:
            raise UsageError(
                "need --preset, --params FILE, or all of --r/--K/--predator")
        doc = {"r": args.r, "K": args.K, "alpha": args.alpha,
               "predators": [_parse_predator(t) for t in args.predator]}
        params = params_from_dict(doc)
    if need_alpha and params.alpha is None:
        raise UsageError("this command requires --alpha")
    return params


def _meta(args) -> dict:
    return {
        "tool": f"ratiomem {__version__}",
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "command": " ".join(sys.argv[1:]) if sys.argv else "",
    }


def _emit(args, payload: dict, csv_text: str | None = None,
          table_text: str | None = None) -> None:
    if args.format == "json":
        body = dict(payload)
        if not args.no_meta:
            body = {"meta": _meta(args), **payload}
        data = to_json_bytes(body) + b"\n"
    elif args.format == "csv":
        if csv_text is None:
            raise UsageError("this command has no CSV representation")
        head = "" if args.no_meta else f"# ratiomem {__version__}, {_meta(args)['created']}\n"
        data = (head + csv_text).encode()
    else:
        text = table_text if table_text is not None else _default_table(payload)
        data = (text + "\n").encode()
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _default_table(payload: dict, indent: str = "") -> str:
    lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_default_table(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            lines.append(f"{indent}{key}: [{len(value)} rows]")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def _applicability(report=None) -> dict:
    failed = []
    if report is not None and report.has_equilibrium:
        if not report.sign_stability.sign_stable:
            failed.append("sign stability (a11 <= 0, decreasing responses, negative prey-loss row)")
        if report.hurwitz is not None and not report.hurwitz.sufficient:
            failed.append("quartic Routh-Hurwitz sufficiency a3(a1 a2 - a0 a3) - a1^2 > 0")
        if report.delay_robust is not None and not report.delay_robust.holds:
            failed.append("delay robustness a11^2 > diag_i^2 > -row_i col_i")
    return {"ok": True, "failed_conditions": failed}


# ----------------------------------------------------------------------
# commands

def cmd_equilibrium(args) -> int:
    params = _params_from_args(args)
    eq = equilibrium(params)
    payload = {"params": params_to_dict(params),
               "equilibrium": equilibrium_to_dict(eq),
               "applicability": {"ok": True, "failed_conditions": []}}
    _emit(args, payload)
    return 0


def cmd_jacobian(args) -> int:
    params = _params_from_args(args)
    jac = build_jacobians(params, equilibrium(params))
    payload = {"params": params_to_dict(params),
               "jacobians": jacobians_to_dict(jac),
               "applicability": {"ok": True, "failed_conditions": []}}
    _emit(args, payload)
    return 0


def cmd_stability(args) -> int:
    params = _params_from_args(args)
    report = stability_report(params)
    payload = {"params": params_to_dict(params),
               "report": report_to_dict(report),
               "applicability": _applicability(report)}
    _emit(args, payload)
    return 0


def cmd_hscan(args) -> int:
    params = _params_from_args(args)
    scan = alpha_scan(params, alpha_min=args.from_, alpha_max=args.to,
                      points=args.steps)
    payload = {"params": params_to_dict(params), "scan": scan_to_dict(scan),
               "applicability": {"ok": True, "failed_conditions": []}}
    _emit(args, payload, csv_text=scan_to_csv(scan))
    return 0


def cmd_simulate(args) -> int:
    params = _params_from_args(args, need_alpha=args.alpha is not None)
    if args.initial:
        values = [float(v) for v in args.initial.split(",")]
        expect = 1 + params.n + (1 if params.delayed else 0)
        if len(values) not in (expect, expect - (1 if params.delayed else 0)):
            raise UsageError(f"--initial wants {expect} comma-separated values")
        if params.delayed and len(values) == expect:
            s0 = State(values[0], tuple(values[1:-1]), values[-1])
        else:
            s0 = State(values[0], tuple(values[1:]), None)
    else:
        eq = equilibrium(params)
        s0 = eq.state(delayed=params.delayed).scaled(1.0 + args.perturb)
    samples = np.linspace(0.0, args.t_end, args.samples)
    traj = integrate(params, s0, t_end=args.t_end, rel_tol=args.rtol,
                     abs_tol=args.atol, sample_times=samples)
    payload = {"params": params_to_dict(params),
               "trajectory": trajectory_to_dict(traj),
               "applicability": {"ok": True, "failed_conditions": []}}
    _emit(args, payload, csv_text=trajectory_to_csv(traj))
    return 0


def cmd_bifurcate(args) -> int:
    if args.param != "r":
        raise UsageError("only --param r sweeps are supported")
    params = _params_from_args(args)
    grid = np.linspace(args.from_, args.to, args.steps)
    rows = []
    for r in grid:
        report = stability_report(params.with_(r=float(r)))
        stable_a = (report.has_equilibrium
                    and report.spectral_abscissa_A < -1e-9)
        rows.append({
            "r": float(r),
            "has_equilibrium": report.has_equilibrium,
            "stable": bool(stable_a),
            "sign_stable": bool(report.has_equilibrium
                                and report.sign_stability.sign_stable),
            "delay_robust": bool(report.has_equilibrium
                                 and report.delay_robust is not None
                                 and report.delay_robust.holds),
            "classification": report.classification,
        })
    transitions = []
    for prev, cur in zip(rows, rows[1:]):
        if prev["classification"] != cur["classification"]:
            transitions.append({"r_below": prev["r"], "r_above": cur["r"],
                                "from": prev["classification"],
                                "to": cur["classification"]})
    payload = {"params": params_to_dict(params),
               "sweep": {"param": "r", "rows": rows, "transitions": transitions},
               "applicability": {"ok": True, "failed_conditions": []}}
    import csv as _csv
    import io as _io
    buf = _io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "has_equilibrium", "stable", "sign_stable",
                "delay_robust", "classification"])
    for row in rows:
        w.writerow([repr(row["r"]), row["has_equilibrium"], row["stable"],
                    row["sign_stable"], row["delay_robust"],
                    row["classification"]])
    _emit(args, payload, csv_text=buf.getvalue())
    return 0


def cmd_nullcline(args) -> int:
    params = _params_from_args(args)
    eq = equilibrium(params)
    y1_hi = args.y1_to if args.y1_to is not None else 3.0 * eq.y_star[0]
    y2_hi = args.y2_to if args.y2_to is not None else 3.0 * eq.y_star[1]
    y1_lo = args.y1_from if args.y1_from is not None else y1_hi / 100.0
    y2_lo = args.y2_from if args.y2_from is not None else y2_hi / 100.0
    mesh = prey_nullcline_sample(
        params,
        np.linspace(y1_lo, y1_hi, args.grid),
        np.linspace(y2_lo, y2_hi, args.grid))
    payload = {"params": params_to_dict(params),
               "nullcline": nullcline_to_dict(mesh),
               "applicability": {"ok": True, "failed_conditions": []}}
    import csv as _csv
    import io as _io
    buf = _io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["y1", "y2", "x"])
    for x, y1, y2 in mesh.points():
        w.writerow([repr(float(y1)), repr(float(y2)), repr(float(x))])
    _emit(args, payload, csv_text=buf.getvalue())
    return 0


def cmd_verify(args) -> int:
    reports = oracle.run_verification(seed=args.seed)
    for rep in reports:
        print(rep.line())
    ok = all(r.ok for r in reports)
    if args.out:
        payload = {"reports": [
            {"name": r.name, "cases": r.cases, "max_abs_error": r.max_abs_error,
             "max_rel_error": r.max_rel_error, "tolerance": r.tolerance,
             "ok": r.ok, "worst_case": r.worst_case}
            for r in reports]}
        with open(args.out, "wb") as fh:
            fh.write(to_json_bytes(payload) + b"\n")
    print("all checks passed" if ok else "VERIFICATION FAILED")
    return 0 if ok else 3


def build_parser() -> _Parser:
    parser = _Parser(prog="ratiomem",
                     description="ratio-dependent predator-prey systems "
                                 "with exponentially fading memory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equilibrium", help="interior equilibrium")
    _add_param_flags(p)
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("jacobian", help="undelayed and delayed Jacobians")
    _add_param_flags(p)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("stability", help="full stability report")
    _add_param_flags(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("hscan", help="H(alpha) and spectrum over a log grid")
    _add_param_flags(p)
    p.add_argument("--from", dest="from_", type=float, default=0.01)
    p.add_argument("--to", type=float, default=100.0)
    p.add_argument("--steps", type=int, default=200)
    p.set_defaults(func=cmd_hscan)

    p = sub.add_parser("simulate", help="integrate a trajectory")
    _add_param_flags(p)
    p.add_argument("--t-end", type=float, default=200.0)
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--atol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--perturb", type=float, default=0.1,
                   help="relative equilibrium perturbation when no --initial")
    p.add_argument("--initial", help="comma-separated x,y1,...,[q]")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bifurcate", help="classification sweep over r")
    _add_param_flags(p)
    p.add_argument("--param", default="r")
    p.add_argument("--from", dest="from_", type=float, default=4.0)
    p.add_argument("--to", type=float, default=14.0)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_bifurcate)

    p = sub.add_parser("nullcline", help="prey zero-growth surface (n = 2)")
    _add_param_flags(p)
    p.add_argument("--grid", type=int, default=40)
    p.add_argument("--y1-from", type=float)
    p.add_argument("--y1-to", type=float)
    p.add_argument("--y2-from", type=float)
    p.add_argument("--y2-to", type=float)
    p.set_defaults(func=cmd_nullcline)

    p = sub.add_parser("verify", help="run the oracle cross-check suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NoPositiveEquilibriumError as exc:
        print(f"no positive equilibrium: {exc}", file=sys.stderr)
        return 2
    except NumericFailureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    except RatioMemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
