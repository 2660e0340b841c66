"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..config import RunConfig


class RunRequest(BaseModel):
    """One experiment run. ``seed`` and ``workers`` override the config."""

    config: RunConfig
    seed: Optional[int] = None
    workers: Optional[int] = Field(default=None, ge=1)


class HealthResponse(BaseModel):
    status: str
    version: str


class FinalState(BaseModel):
    t: float
    pop_l: float
    pop_r: float
    n_l: float
    n_r: float
    re_theta: float
    im_theta: float


class SimulateResponse(BaseModel):
    experiment: str
    out_dir: str
    files: dict[str, str]
    seed: int
    clamp_count: int
    final: FinalState


class MeanTail(BaseModel):
    pop_l: float
    pop_r: float
    re_theta: float
    im_theta: float


class EnsembleResponse(BaseModel):
    experiment: str
    out_dir: str
    files: dict[str, str]
    n_realizations: int
    base_seed: int
    final_mean: MeanTail


class SteadyResponse(BaseModel):
    experiment: str
    out_dir: str
    files: dict[str, str]
    threshold_pump: float
    above_threshold: bool
    pop: float
    n_l: float
    n_r: float
    gamma: float
    im_theta: float
    re_theta: float
    decay_rate: Optional[float] = None


class SpectrumResponse(BaseModel):
    experiment: str
    out_dir: str
    files: dict[str, str]
    steps: int
    gamma_min: float
    gamma_max: float
    exceptional_point: float


class DecayFit(BaseModel):
    rate: float
    r_squared: float


class CorrelateResponse(BaseModel):
    experiment: str
    out_dir: str
    files: dict[str, str]
    n_realizations: int
    t0: float
    well: str
    ensemble_fit: DecayFit
    time_avg_fit: Optional[DecayFit] = None
    ergodicity: Optional[float] = None


class SweepResponse(BaseModel):
    experiment: str
    out_dir: str
    files: dict[str, str]
    n_points: int


class ErrorRecord(BaseModel):
    """Machine-readable failure description."""

    code: str
    message: str
    time: Optional[float] = None
    realization: Optional[int] = None
