"""JSON and CSV wire formats shared by the CLI, the HTTP server and the
browser explorer.

The parameter schema is
    {"r": ..., "K": ..., "alpha": ...|null,
     "predators": [{"kind": "holling"|"ivlev", "m": ..., "a": ..., "d": ...}, ...]}

`to_json_bytes` is the single JSON encoder for artifacts and responses,
so identical payloads are identical bytes on every surface.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import DomainError
from .linearize import JacobianPair
from .model import Equilibrium, FunctionalResponse, GrowthLaw, ModelParams, NullclineMesh
from .simulate import Trajectory
from .stability import AlphaScan, StabilityReport


def to_json_bytes(payload) -> bytes:
    return json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      separators=(",", ":")).encode("utf-8")


def params_to_dict(params: ModelParams) -> dict:
    return {
        "r": params.r,
        "K": params.K,
        "alpha": params.alpha,
        "predators": [
            {"kind": resp.kind, "m": resp.m, "a": resp.a, "d": d}
            for resp, d in zip(params.responses, params.d)
        ],
    }


def params_from_dict(doc: dict) -> ModelParams:
    if not isinstance(doc, dict):
        raise DomainError("parameter document must be a JSON object")
    try:
        preds = doc["predators"]
        if not isinstance(preds, list) or not preds:
            raise DomainError("'predators' must be a non-empty list")
        responses = []
        deaths = []
        for i, p in enumerate(preds):
            responses.append(FunctionalResponse(
                kind=str(p["kind"]), m=float(p["m"]), a=float(p["a"])))
            deaths.append(float(p["d"]))
        alpha = doc.get("alpha")
        return ModelParams(
            r=float(doc["r"]),
            growth=GrowthLaw(K=float(doc["K"])),
            responses=tuple(responses),
            d=tuple(deaths),
            alpha=None if alpha is None else float(alpha),
        )
    except KeyError as exc:
        raise DomainError(f"missing parameter field: {exc.args[0]!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed parameter document: {exc}")


def _complex_list(values) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def matrix_to_dict(M: np.ndarray, labels: dict) -> dict:
    return {"matrix": [[float(v) for v in row] for row in M],
            "labels": labels}


def jacobians_to_dict(jac: JacobianPair) -> dict:
    labels = {
        "a11": jac.a11,
        "a_diag": [float(v) for v in jac.a_diag],
        "a_row": [float(v) for v in jac.a_row],
        "a_col": [float(v) for v in jac.a_col],
        "alpha": jac.alpha,
    }
    out = {"A": matrix_to_dict(jac.A, labels)}
    out["A_d"] = None if jac.A_d is None else matrix_to_dict(jac.A_d, labels)
    return out


def equilibrium_to_dict(eq: Equilibrium) -> dict:
    return {
        "x_star": eq.x_star,
        "y_star": list(eq.y_star),
        "q_star": eq.q_star,
        "u_star": list(eq.u_star),
    }


def report_to_dict(report: StabilityReport) -> dict:
    out: dict = {"has_equilibrium": report.has_equilibrium,
                 "classification": report.classification}
    if not report.has_equilibrium:
        return out
    sign = report.sign_stability
    out["equilibrium"] = equilibrium_to_dict(report.equilibrium)
    out["sign_stability"] = {
        "a11_nonpositive": sign.a11_nonpositive,
        "response_decreasing": list(sign.response_decreasing),
        "predation_row_negative": list(sign.predation_row_negative),
        "sign_stable": sign.sign_stable,
    }
    if report.quartic is not None:
        q = report.quartic
        out["quartic"] = {"a3": q.a3, "a2": q.a2, "a1": q.a1, "a0": q.a0}
    if report.hurwitz is not None:
        out["hurwitz"] = {
            "necessary": report.hurwitz.necessary,
            "sufficient": report.hurwitz.sufficient,
            "critical": report.hurwitz.critical,
        }
    if report.delay_robust is not None:
        dr = report.delay_robust
        out["delay_robust"] = {
            "applicable": dr.applicable,
            "competition_dominant": list(dr.competition_dominant),
            "strategy_ok": list(dr.strategy_ok),
            "holds": dr.holds,
        }
    if report.strategy is not None:
        out["strategy"] = [
            {"kind": s.kind, "a": s.a, "bound": s.bound, "passes": s.passes,
             "above_half": s.above_half,
             "product_threshold": s.product_threshold,
             "product_holds": s.product_holds}
            for s in report.strategy
        ]
    out["eigenvalues_A"] = _complex_list(report.eigenvalues_A)
    out["spectral_abscissa_A"] = report.spectral_abscissa_A
    if report.eigenvalues_Ad is not None:
        out["eigenvalues_Ad"] = _complex_list(report.eigenvalues_Ad)
        out["spectral_abscissa_Ad"] = report.spectral_abscissa_Ad
    out["allee_zone"] = report.allee_zone
    return out


def scan_to_dict(scan: AlphaScan) -> dict:
    return {
        "alphas": [float(v) for v in scan.alphas],
        "H": [float(v) for v in scan.H],
        "abscissa": [float(v) for v in scan.abscissa],
        "stability": list(scan.stability),
        "switch_points": [
            {"alpha": s.alpha, "omega": s.omega, "critical": s.critical,
             "pair_real_part": s.pair_real_part}
            for s in scan.switch_points
        ],
    }


def scan_to_csv(scan: AlphaScan) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "H", "abscissa", "stable"])
    for a, h, ab, st in zip(scan.alphas, scan.H, scan.abscissa, scan.stability):
        w.writerow([repr(float(a)), repr(float(h)), repr(float(ab)), st])
    return buf.getvalue()


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "times": [float(t) for t in traj.times],
        "states": [[float(v) for v in row] for row in traj.states],
        "delayed": traj.delayed,
        "accepted_steps": traj.accepted_steps,
        "rejected_steps": traj.rejected_steps,
    }


def trajectory_to_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t", "x"] + [f"y{i+1}" for i in range(traj.n)]
    if traj.delayed:
        header.append("q")
    w.writerow(header)
    for t, row in zip(traj.times, traj.states):
        w.writerow([repr(float(t))] + [repr(float(v)) for v in row])
    return buf.getvalue()


def nullcline_to_dict(mesh: NullclineMesh) -> dict:
    return {
        "y1": [float(v) for v in mesh.y1],
        "y2": [float(v) for v in mesh.y2],
        "roots": [[list(map(float, cell)) for cell in row] for row in mesh.roots],
        "max_residual": mesh.max_residual,
    }
