"""Stateless HTTP JSON API over the analysis core.

Request bodies carry the shared parameter schema plus per-endpoint
options; every successful response echoes the validated parameters and
is byte-identical to the CLI's JSON artifact for the same inputs.
Errors are structured as {"code", "paper_condition", "message"} where
paper_condition names the violated mathematical condition.

Status codes: 400 validation, 422 no positive equilibrium, 408 budget
exceeded, 500 numeric failure.
"""

from __future__ import annotations

import time

import numpy as np
from fastapi import Body, FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (
    BudgetExceededError,
    DomainError,
    NoPositiveEquilibriumError,
    NumericFailureError,
    RatioMemError,
)
from .linearize import build_jacobians
from .model import State, equilibrium, prey_nullcline_sample
from .presets import PRESETS, load_preset
from .serialize import (
    equilibrium_to_dict,
    jacobians_to_dict,
    nullcline_to_dict,
    params_from_dict,
    params_to_dict,
    report_to_dict,
    scan_to_dict,
    to_json_bytes,
    trajectory_to_dict,
)
from .simulate import integrate
from .stability import alpha_scan, stability_report

REQUEST_BUDGET_SECONDS = 10.0
MAX_SIMULATION_SAMPLES = 100_000
MAX_SCAN_POINTS = 20_000
MAX_NULLCLINE_GRID = 200


def _error(status: int, code: str, condition: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={
        "code": code, "paper_condition": condition, "message": message})


def _ok(payload: dict) -> Response:
    return Response(content=to_json_bytes(payload),
                    media_type="application/json")


def _applicability_block(report=None) -> dict:
    failed = []
    if report is not None and report.has_equilibrium:
        if not report.sign_stability.sign_stable:
            failed.append("sign stability (a11 <= 0, decreasing responses, negative prey-loss row)")
        if report.hurwitz is not None and not report.hurwitz.sufficient:
            failed.append("quartic Routh-Hurwitz sufficiency a3(a1 a2 - a0 a3) - a1^2 > 0")
        if report.delay_robust is not None and not report.delay_robust.holds:
            failed.append("delay robustness a11^2 > diag_i^2 > -row_i col_i")
    return {"ok": True, "failed_conditions": failed}


def create_app() -> FastAPI:
    app = FastAPI(title="ratiomem", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RatioMemError)
    async def _handle(request, exc: RatioMemError):
        if isinstance(exc, NoPositiveEquilibriumError):
            return _error(422, "no_positive_equilibrium",
                          "positive equilibrium requires r > sum_i d_i u_i*",
                          str(exc))
        if isinstance(exc, BudgetExceededError):
            return _error(408, "budget_exceeded", "10 s per-request budget",
                          str(exc))
        if isinstance(exc, NumericFailureError):
            return _error(500, "numeric_failure", "numerical convergence",
                          str(exc))
        return _error(400, "validation",
                      "parameter validity (positivity, m_i > d_i)", str(exc))

    @app.get("/healthz")
    async def healthz():
        return PlainTextResponse("ok")

    @app.get("/api/presets")
    async def presets():
        out = {}
        for name in sorted(PRESETS):
            out[name] = params_to_dict(load_preset(name))
        return _ok({"presets": out})

    @app.get("/api/schema")
    async def schema():
        return JSONResponse(app.openapi())

    @app.post("/api/equilibrium")
    async def api_equilibrium(body: dict = Body(...)):
        params = params_from_dict(body)
        eq = equilibrium(params)
        return _ok({"params": params_to_dict(params),
                    "equilibrium": equilibrium_to_dict(eq),
                    "applicability": {"ok": True, "failed_conditions": []}})

    @app.post("/api/jacobian")
    async def api_jacobian(body: dict = Body(...)):
        params = params_from_dict(body)
        jac = build_jacobians(params, equilibrium(params))
        return _ok({"params": params_to_dict(params),
                    "jacobians": jacobians_to_dict(jac),
                    "applicability": {"ok": True, "failed_conditions": []}})

    @app.post("/api/stability")
    async def api_stability(body: dict = Body(...)):
        params = params_from_dict(body)
        report = stability_report(params)
        return _ok({"params": params_to_dict(params),
                    "report": report_to_dict(report),
                    "applicability": _applicability_block(report)})

    @app.post("/api/hcurve")
    async def api_hcurve(body: dict = Body(...)):
        params = params_from_dict(body)
        points = int(body.get("points", 200))
        if not (2 <= points <= MAX_SCAN_POINTS):
            raise DomainError(f"points must lie in [2, {MAX_SCAN_POINTS}]")
        scan = alpha_scan(params,
                          alpha_min=float(body.get("alpha_min", 0.01)),
                          alpha_max=float(body.get("alpha_max", 100.0)),
                          points=points,
                          deadline=time.monotonic() + REQUEST_BUDGET_SECONDS)
        return _ok({"params": params_to_dict(params),
                    "scan": scan_to_dict(scan),
                    "applicability": {"ok": True, "failed_conditions": []}})

    @app.post("/api/simulate")
    async def api_simulate(body: dict = Body(...)):
        params = params_from_dict(body)
        t_end = float(body.get("t_end", 200.0))
        samples = int(body.get("samples", 2001))
        if not (2 <= samples <= MAX_SIMULATION_SAMPLES):
            raise DomainError(
                f"samples must lie in [2, {MAX_SIMULATION_SAMPLES}]")
        initial = body.get("initial")
        if initial is not None:
            values = [float(v) for v in initial]
            if params.delayed and len(values) == params.n + 2:
                s0 = State(values[0], tuple(values[1:-1]), values[-1])
            elif len(values) == params.n + 1:
                s0 = State(values[0], tuple(values[1:]), None)
            else:
                raise DomainError("initial state has the wrong dimension")
        else:
            perturb = float(body.get("perturb", 0.1))
            s0 = equilibrium(params).state(delayed=params.delayed)
            s0 = s0.scaled(1.0 + perturb)
        traj = integrate(params, s0, t_end=t_end,
                         rel_tol=float(body.get("rel_tol", 1e-8)),
                         abs_tol=float(body.get("abs_tol", 1e-10)),
                         sample_times=np.linspace(0.0, t_end, samples),
                         time_budget=REQUEST_BUDGET_SECONDS)
        return _ok({"params": params_to_dict(params),
                    "trajectory": trajectory_to_dict(traj),
                    "applicability": {"ok": True, "failed_conditions": []}})

    @app.post("/api/nullcline")
    async def api_nullcline(body: dict = Body(...)):
        params = params_from_dict(body)
        grid = int(body.get("grid", 40))
        if not (2 <= grid <= MAX_NULLCLINE_GRID):
            raise DomainError(f"grid must lie in [2, {MAX_NULLCLINE_GRID}]")
        eq = equilibrium(params)
        y1_hi = float(body.get("y1_to", 3.0 * eq.y_star[0]))
        y2_hi = float(body.get("y2_to", 3.0 * eq.y_star[1]))
        y1_lo = float(body.get("y1_from", y1_hi / 100.0))
        y2_lo = float(body.get("y2_from", y2_hi / 100.0))
        mesh = prey_nullcline_sample(params,
                                     np.linspace(y1_lo, y1_hi, grid),
                                     np.linspace(y2_lo, y2_hi, grid))
        return _ok({"params": params_to_dict(params),
                    "nullcline": nullcline_to_dict(mesh),
                    "applicability": {"ok": True, "failed_conditions": []}})

    return app


app = create_app()


def main(argv=None):
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="ratiomem-server")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
