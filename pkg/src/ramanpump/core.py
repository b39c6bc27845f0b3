"""Parameter types, unit conventions and regime diagnostics.

Every frequency, rate and temperature is carried as an energy in eV with
hbar = 1. Lengths are in nm; dipole moments in e*nm. Gaussian units are
used where electromagnetic prefactors appear, so ``e**2 = E2_EV_NM``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

HBAR_C_EV_NM = 197.327
E2_EV_NM = 1.43996
NM3_PER_CM3 = 1e21


class DomainError(ValueError):
    """Raised when a physics formula is evaluated outside its domain."""


def _require_positive(name, value):
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")


def _require_nonnegative(name, value):
    if not value >= 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class MoleculeParams:
    """Two-level electronic system coupled to one vibrational mode.

    ``g`` may be zero to switch off the electron-vibration coupling; all other
    fields are strictly positive.
    """

    omega0: float
    omega_v: float
    gamma_perp: float
    gamma_v: float
    g: float
    d_eg: float = 1.0

    def __post_init__(self):
        for name in ("omega0", "omega_v", "gamma_perp", "gamma_v", "d_eg"):
            _require_positive(name, getattr(self, name))
        _require_nonnegative("g", self.g)
        if not self.gamma_v < self.omega_v:
            raise DomainError("gamma_v must be below omega_v (underdamped vibration)")
        if not self.gamma_perp < self.omega0:
            raise DomainError("gamma_perp must be below omega0")


@dataclass(frozen=True)
class DriveParams:
    omega_vis: float
    rabi_vis: float
    omega_ir: float
    rabi_ir: float

    def __post_init__(self):
        for name in ("omega_vis", "rabi_vis", "omega_ir", "rabi_ir"):
            _require_nonnegative(name, getattr(self, name))
        if not self.omega_vis > self.omega_ir:
            raise DomainError("omega_vis must exceed omega_ir")


@dataclass(frozen=True)
class Environment:
    kT: float

    def __post_init__(self):
        _require_positive("kT", self.kT)

    def n_bar(self, omega_v):
        return thermal_occupation(omega_v, self.kT)


@dataclass(frozen=True)
class Thresholds:
    """Factors used to decide when a ``>>`` assumption counts as satisfied."""

    detuning_factor: float = 10.0
    temperature_factor: float = 10.0
    epsilon_factor: float = 10.0


@dataclass(frozen=True)
class Diagnostics:
    epsilon: float
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def valid(self):
        return not self.warnings

    def as_dict(self):
        return {"epsilon": self.epsilon, "warnings": list(self.warnings), "valid": self.valid}


def thermal_occupation(omega_v, kT):
    """Bose-Einstein occupation 1/(exp(omega_v/kT) - 1); exactly 0 as kT -> 0+."""
    _require_positive("omega_v", omega_v)
    _require_positive("kT", kT)
    x = omega_v / kT
    if x > 700.0:
        # expm1 overflows soon after; here 1/(e^x - 1) = e^-x to double precision
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def perturbation_parameter(mol, drive):
    """Largest ratio of Rabi energy to drive detuning from the TLS transition."""
    d_vis = drive.omega_vis - mol.omega0
    d_ir = drive.omega_ir - mol.omega0
    if d_vis == 0 or d_ir == 0:
        raise DomainError("a drive is exactly resonant with the TLS transition")
    return max(drive.rabi_vis / abs(d_vis), drive.rabi_ir / abs(d_ir))


def validate_params(mol, drive, env, thresholds=Thresholds()):
    warnings = []
    for label, omega in (("probe", drive.omega_vis), ("IR pump", drive.omega_ir)):
        detuning = abs(omega - mol.omega0)
        if detuning < thresholds.detuning_factor * mol.gamma_perp:
            warnings.append(
                f"{label} resonant with TLS: |omega - omega0| = {detuning:.6g} eV "
                f"is not >> gamma_perp = {mol.gamma_perp:.6g} eV"
            )
    if mol.omega0 < thresholds.temperature_factor * env.kT:
        warnings.append(
            f"ħω₀ ≫ kT violated: omega0 = {mol.omega0:.6g} eV, kT = {env.kT:.6g} eV"
        )
    try:
        eps = perturbation_parameter(mol, drive)
    except DomainError:
        eps = math.inf
    if not eps * thresholds.epsilon_factor < 1.0:
        warnings.append(f"perturbation theory breakdown: epsilon = {eps:.6g} is not << 1")
    return Diagnostics(epsilon=eps, warnings=tuple(warnings))
