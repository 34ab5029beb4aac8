"""HTTP service exposing run, sweep, and report execution.

Experiments run synchronously inside the request (desk-scale runs take
seconds); artifacts are written under the request's output directory on
the server's filesystem and the response carries the paths plus the
headline metrics. Config errors map to 400, execution failures to 500.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import ConfigError
from ..report import build_report
from ..runner import execute_run, execute_sweep
from .schemas import (
    CellResult,
    HealthResponse,
    ReportRequest,
    ReportResponse,
    RunRequest,
    RunResponse,
    SweepRequest,
    SweepResponse,
    summary_to_model,
)


def create_app() -> FastAPI:
    app = FastAPI(title="fairfedcs", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/run", response_model=RunResponse)
    def run(request: RunRequest) -> RunResponse:
        try:
            config = request.config.to_config()
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            result = execute_run(config, request.out_dir, full_trace=request.full_trace)
        except Exception as exc:
            raise HTTPException(status_code=500, detail=f"run failed: {exc}")
        return RunResponse(
            out_dir=result["out_dir"],
            files=result["files"],
            summary=summary_to_model(result["summary"]),
        )

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(request: SweepRequest) -> SweepResponse:
        try:
            config = request.config.to_config()
            result = execute_sweep(config, request.policies, request.seeds, request.out_dir)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except Exception as exc:
            raise HTTPException(status_code=500, detail=f"sweep failed: {exc}")
        return SweepResponse(
            out_dir=result["out_dir"],
            sweep_csv=result["sweep_csv"],
            cells=[CellResult(**cell) for cell in result["cells"]],
        )

    @app.post("/report", response_model=ReportResponse)
    def report(request: ReportRequest) -> ReportResponse:
        try:
            files = build_report(request.sweep_dir, request.out_dir)
        except FileNotFoundError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except Exception as exc:
            raise HTTPException(status_code=500, detail=f"report failed: {exc}")
        return ReportResponse(out_dir=request.out_dir, files=[str(p) for p in files])

    return app
