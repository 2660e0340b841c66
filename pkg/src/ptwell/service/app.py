"""HTTP service exposing the simulator experiments.

Each experiment is one POST endpoint taking the run configuration in the
request body; output files are written server-side under the configured
``out_dir`` and the response carries the summary payload. Validation
failures map to 422, numerical failures (divergence) to 409, both with a
machine-readable error record.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, experiments
from ..config import ConfigError
from ..integration import DivergenceError
from . import schemas

app = FastAPI(title="ptwell", version=__version__)


@app.exception_handler(ConfigError)
async def _config_error(_request: Request, err: ConfigError) -> JSONResponse:
    record = schemas.ErrorRecord(code="validation", message=str(err))
    return JSONResponse(status_code=422, content=record.model_dump())


@app.exception_handler(ValueError)
async def _value_error(_request: Request, err: ValueError) -> JSONResponse:
    record = schemas.ErrorRecord(code="validation", message=str(err))
    return JSONResponse(status_code=422, content=record.model_dump())


@app.exception_handler(DivergenceError)
async def _divergence(_request: Request, err: DivergenceError) -> JSONResponse:
    record = schemas.ErrorRecord(
        code="numerical_failure",
        message=str(err),
        time=err.time,
        realization=err.realization,
    )
    return JSONResponse(status_code=409, content=record.model_dump())


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


def _run(req: schemas.RunRequest, experiment: str) -> dict:
    return experiments.run(
        req.config, experiment=experiment, seed=req.seed, workers=req.workers
    )


@app.post("/run/simulate", response_model=schemas.SimulateResponse)
def run_simulate(req: schemas.RunRequest) -> dict:
    return _run(req, "simulate")


@app.post("/run/ensemble", response_model=schemas.EnsembleResponse)
def run_ensemble(req: schemas.RunRequest) -> dict:
    return _run(req, "ensemble")


@app.post("/run/steady", response_model=schemas.SteadyResponse)
def run_steady(req: schemas.RunRequest) -> dict:
    return _run(req, "steady")


@app.post("/run/spectrum", response_model=schemas.SpectrumResponse)
def run_spectrum(req: schemas.RunRequest) -> dict:
    return _run(req, "spectrum")


@app.post("/run/correlate", response_model=schemas.CorrelateResponse)
def run_correlate(req: schemas.RunRequest) -> dict:
    return _run(req, "correlate")


@app.post("/run/sweep", response_model=schemas.SweepResponse)
def run_sweep(req: schemas.RunRequest) -> dict:
    return _run(req, "sweep")
