"""JSON run configuration: parsing, validation with field paths, and conversion to domain types."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .core import DomainError, DriveParams, Environment, MoleculeParams, Thresholds
from .ensemble import DispersionData, EnsembleParams
from .oracle.simulate import OracleConfig

SCHEMA_VERSION = "1.0"


class ConfigError(Exception):
    """Configuration failure; ``category`` is ``missing_file``, ``syntax`` or ``invalid``."""

    def __init__(self, category, message, paths=()):
        super().__init__(message)
        self.category = category
        self.paths = tuple(paths)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class MoleculeSection(_Section):
    omega0_eV: float = Field(gt=0)
    omega_v_eV: float = Field(gt=0)
    gamma_perp_eV: float = Field(gt=0)
    gamma_v_eV: float = Field(gt=0)
    g_eV: float = Field(ge=0)
    d_eg_enm: float = Field(1.0, gt=0)

    def build(self):
        return MoleculeParams(self.omega0_eV, self.omega_v_eV, self.gamma_perp_eV,
                              self.gamma_v_eV, self.g_eV, self.d_eg_enm)

    @model_validator(mode="after")
    def _domain(self):
        self.build()
        return self


class DriveSection(_Section):
    omega_vis_eV: float = Field(gt=0)
    rabi_vis_eV: float = Field(0.0, ge=0)
    omega_ir_eV: float = Field(gt=0)
    rabi_ir_eV: float = Field(0.0, ge=0)

    def build(self):
        return DriveParams(self.omega_vis_eV, self.rabi_vis_eV, self.omega_ir_eV, self.rabi_ir_eV)

    @model_validator(mode="after")
    def _domain(self):
        self.build()
        return self


class EnvironmentSection(_Section):
    kT_eV: float = Field(0.025, gt=0)

    def build(self):
        return Environment(self.kT_eV)


class EnsembleSection(_Section):
    concentration_cm3: Optional[float] = Field(None, gt=0)
    volume_mm3: Optional[float] = Field(None, gt=0)
    n_molecules: Optional[float] = Field(None, gt=0)
    delta_n: Optional[float] = None
    n_vis: Optional[float] = None
    n_ir: Optional[float] = None
    n_ast: Optional[float] = None

    def build(self):
        return EnsembleParams(self.concentration_cm3, self.volume_mm3, self.n_molecules)

    def dispersion(self):
        explicit = (self.n_vis, self.n_ir, self.n_ast)
        if self.delta_n is not None:
            return DispersionData.from_delta_n(self.delta_n)
        return DispersionData(*(1.0 if v is None else v for v in explicit))

    @model_validator(mode="after")
    def _domain(self):
        if self.delta_n is not None and any(v is not None for v in (self.n_vis, self.n_ir, self.n_ast)):
            raise ValueError("give either delta_n or explicit indices, not both")
        if self.n_molecules is not None or (self.concentration_cm3 and self.volume_mm3):
            self.build()
        self.dispersion()
        return self


class OracleSection(_Section):
    fock_cutoff: int = Field(8, ge=2)
    t_final: Optional[float] = Field(None, gt=0)
    demod_window: Optional[tuple[float, float]] = None
    rtol: float = Field(1e-8, gt=0)
    atol: float = Field(1e-10, gt=0)
    n_bar_override: Optional[float] = Field(None, ge=0)
    spectrum_enabled: bool = False
    tau_max: Optional[float] = Field(None, gt=0)
    window: Literal["hann", "none"] = "hann"
    spectrum_part: Literal["incoherent", "total"] = "incoherent"
    n_time_samples: Optional[int] = Field(None, ge=1)
    initial_state: Literal["thermal", "ground", "excited"] = "thermal"
    truncation_threshold: float = Field(1e-6, gt=0)
    tolerance: float = Field(0.1, gt=0)

    def build(self):
        data = self.model_dump(exclude={"tolerance"})
        return OracleConfig(**data)


class GridSection(_Section):
    omega_min_eV: float
    omega_max_eV: float
    n_points: int = Field(2001, ge=2)

    @model_validator(mode="after")
    def _order(self):
        if not self.omega_min_eV < self.omega_max_eV:
            raise ValueError("omega_min_eV must be below omega_max_eV")
        return self


class OutputSection(_Section):
    directory: Optional[str] = None
    grid: Optional[GridSection] = None
    render_delta_width_eV: Optional[float] = Field(None, gt=0)


class DetuningScanSection(_Section):
    half_span_eV: Optional[float] = Field(None, gt=0)
    n_points: int = Field(201, ge=2)


class SweepSection(_Section):
    parameter: str
    start: float
    stop: float
    n_points: int = Field(10, ge=2)
    scale: Literal["linear", "log"] = "linear"
    oracle: bool = False

    @model_validator(mode="after")
    def _path(self):
        section, _, key = self.parameter.partition(".")
        models = {"molecule": MoleculeSection, "drive": DriveSection, "environment": EnvironmentSection}
        if section not in models or key not in models[section].model_fields:
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log sweep needs positive start and stop")
        return self


class ThresholdsSection(_Section):
    detuning_factor: float = Field(10.0, gt=0)
    temperature_factor: float = Field(10.0, gt=0)
    epsilon_factor: float = Field(10.0, gt=0)

    def build(self):
        return Thresholds(self.detuning_factor, self.temperature_factor, self.epsilon_factor)


class RunConfig(_Section):
    molecule: MoleculeSection
    drive: DriveSection
    environment: EnvironmentSection = EnvironmentSection()
    ensemble: Optional[EnsembleSection] = None
    oracle: OracleSection = OracleSection()
    output: OutputSection = OutputSection()
    detuning_scan: DetuningScanSection = DetuningScanSection()
    sweep: Optional[SweepSection] = None
    thresholds: ThresholdsSection = ThresholdsSection()

    def echo(self):
        return self.model_dump(mode="json")

    def with_value(self, path, value):
        """Copy with one ``section.key`` replaced, re-validated."""
        data = self.echo()
        section, key = path.split(".", 1)
        data[section][key] = value
        return config_from_dict(data)


def _format(err):
    issues = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"])
        msg = e["msg"]
        if isinstance(e.get("ctx", {}).get("error"), DomainError):
            msg = str(e["ctx"]["error"])
        issues.append((loc, msg))
    return issues


def config_from_dict(data):
    try:
        return RunConfig.model_validate(data)
    except ValidationError as err:
        issues = _format(err)
        text = "; ".join(f"{loc}: {msg}" for loc, msg in issues)
        raise ConfigError("invalid", f"invalid configuration: {text}", [loc for loc, _ in issues]) from None


def parse_config(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError("missing_file", f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ConfigError("syntax", f"malformed JSON in {path}: {err}") from None
    if not isinstance(data, dict):
        raise ConfigError("syntax", f"top level of {path} must be a JSON object")
    return config_from_dict(data)
