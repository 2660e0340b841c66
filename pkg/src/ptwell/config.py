"""Run configuration: parsing, validation, defaults, canonical echo.

Config documents are YAML (JSON is a subset and parses too) with namespaced
sections. Unknown keys are rejected, physical rates are range-checked, and
every error names the offending key. All energies and rates are in units of
the Josephson coupling magnitude (J = 1), time in 1/J.
"""

from __future__ import annotations

import cmath
import json
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .ensemble import EnsembleConfig
from .integration import DEFAULT_DIVERGENCE_BOUND, IntegrationConfig, NoiseConfig
from .model import ModelParams

__all__ = [
    "ConfigError",
    "ModelSection",
    "IntegrationSection",
    "NoiseSection",
    "EnsembleSection",
    "SpectrumSection",
    "CorrelateSection",
    "SweepSection",
    "RunConfig",
    "EXPERIMENTS",
    "parse_config",
    "emit_config",
]

EXPERIMENTS = ("simulate", "ensemble", "steady", "spectrum", "correlate", "sweep")


class ConfigError(ValueError):
    """Invalid or malformed run configuration."""


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSection(_Section):
    kappa: float = Field(gt=0, description="polariton decay rate")
    gamma_x: float = Field(gt=0, description="exciton decay rate")
    r_scatter: float = Field(gt=0, description="reservoir scattering rate")
    p_l: float = Field(ge=0, description="left pump rate")
    p_r: float = Field(ge=0, description="right pump rate")
    eps_l: float = 0.0
    eps_r: float = 0.0
    eta: float = 0.0
    j_re: float = 1.0
    j_im: float = 0.0

    @model_validator(mode="after")
    def _check_coupling(self) -> "ModelSection":
        if self.j_re == 0.0 and self.j_im == 0.0:
            raise ValueError("j_re/j_im: coupling must be nonzero")
        return self

    def to_params(self) -> ModelParams:
        return ModelParams(
            kappa=self.kappa,
            gamma_x=self.gamma_x,
            r_scatter=self.r_scatter,
            p_l=self.p_l,
            p_r=self.p_r,
            eps_l=self.eps_l,
            eps_r=self.eps_r,
            eta=self.eta,
            j_coupling=complex(self.j_re, self.j_im),
        )


class IntegrationSection(_Section):
    dt: float = Field(default=1e-3, gt=0)
    t_end: float = Field(default=200.0, gt=0)
    record_stride: int = Field(default=100, ge=1)
    seed_amp_l: float = Field(default=0.1, ge=0, description="left seed magnitude")
    seed_amp_r: float = Field(default=0.1, ge=0, description="right seed magnitude")
    seed_phase_l: float = 0.0
    seed_phase_r: float = 0.0
    n0_policy: Literal["pump_over_gamma", "explicit"] = "pump_over_gamma"
    n_l0: Optional[float] = Field(default=None, ge=0)
    n_r0: Optional[float] = Field(default=None, ge=0)
    divergence_bound: float = Field(default=DEFAULT_DIVERGENCE_BOUND, gt=0)

    @model_validator(mode="after")
    def _check_n0(self) -> "IntegrationSection":
        if self.n0_policy == "explicit" and (self.n_l0 is None or self.n_r0 is None):
            raise ValueError("n_l0/n_r0: required for n0_policy 'explicit'")
        return self

    def to_config(self) -> IntegrationConfig:
        return IntegrationConfig(
            t_end=self.t_end,
            dt=self.dt,
            record_stride=self.record_stride,
            seed_amp_l=cmath.rect(self.seed_amp_l, self.seed_phase_l),
            seed_amp_r=cmath.rect(self.seed_amp_r, self.seed_phase_r),
            n0_policy=self.n0_policy,
            n_l0=self.n_l0,
            n_r0=self.n_r0,
            divergence_bound=self.divergence_bound,
        )


class NoiseSection(_Section):
    enabled: bool = False
    xi: float = Field(default=0.0, ge=0)
    noise_dt: Optional[float] = Field(default=None, gt=0, description="defaults to dt")

    def to_config(self, dt: float) -> NoiseConfig:
        return NoiseConfig(
            xi=self.xi,
            noise_dt=self.noise_dt if self.noise_dt is not None else dt,
            enabled=self.enabled,
        )


class EnsembleSection(_Section):
    n_realizations: int = Field(default=1000, ge=1)
    base_seed: int = 12345
    workers: int = Field(default=1, ge=1)


class SpectrumSection(_Section):
    gamma_min: float = 0.0
    gamma_max: float = 2.0
    steps: int = Field(default=200, ge=2)


class CorrelateSection(_Section):
    t0: float = Field(default=50.0, ge=0)
    well: Literal["l", "r"] = "l"
    fit_floor: float = Field(default=0.05, gt=0, lt=1)
    time_avg: bool = True
    t_i: float = Field(default=50.0, ge=0)
    window: float = Field(default=3000.0, gt=0, description="t_f - t_i")
    max_lag: float = Field(default=50.0, gt=0)
    time_avg_seed: int = 777


class SweepSection(_Section):
    p_l_min: float = Field(ge=0)
    p_l_max: float = Field(ge=0)
    p_l_steps: int = Field(ge=1)
    p_r_min: float = Field(ge=0)
    p_r_max: float = Field(ge=0)
    p_r_steps: int = Field(ge=1)


class RunConfig(_Section):
    """Complete, validated description of one experiment run."""

    model: ModelSection
    experiment: Literal[
        "simulate", "ensemble", "steady", "spectrum", "correlate", "sweep"
    ] = "simulate"
    out_dir: Optional[str] = None
    seed: int = 1
    integration: IntegrationSection = IntegrationSection()
    noise: NoiseSection = NoiseSection()
    ensemble: EnsembleSection = EnsembleSection()
    spectrum: SpectrumSection = SpectrumSection()
    correlate: CorrelateSection = CorrelateSection()
    sweep: Optional[SweepSection] = None

    def model_params(self) -> ModelParams:
        return self.model.to_params()

    def integration_config(self) -> IntegrationConfig:
        return self.integration.to_config()

    def noise_config(self) -> NoiseConfig:
        return self.noise.to_config(self.integration.dt)

    def ensemble_config(self) -> EnsembleConfig:
        return EnsembleConfig(
            params=self.model_params(),
            integration=self.integration_config(),
            noise=self.noise_config(),
            n_realizations=self.ensemble.n_realizations,
            base_seed=self.ensemble.base_seed,
        )


def _format_validation_error(err: ValidationError) -> str:
    lines = []
    for item in err.errors():
        loc = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{loc}: {item['msg']}")
    return "; ".join(lines)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML/JSON config document."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigError(f"malformed config document: {err}") from None
    if data is None:
        raise ConfigError("empty config document")
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a mapping, got {type(data).__name__}")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as err:
        raise ConfigError(_format_validation_error(err)) from None


def emit_config(cfg: RunConfig) -> str:
    """Canonical JSON echo of an effective config; parse_config inverts it."""
    return json.dumps(cfg.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
