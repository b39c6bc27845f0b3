"""Ensemble-scale estimates: phase matching, coherence length and signal enhancement."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .core import HBAR_C_EV_NM, DomainError

NM_PER_M = 1e9
MM3_PER_CM3 = 1e3
INDEX_FLOOR = 1.0 - 1e-3


@dataclass(frozen=True)
class DispersionData:
    """Refractive indices at the probe, the IR pump and the anti-Stokes line.

    ``from_delta_n`` builds the shorthand where all legs share index 1 except
    the anti-Stokes leg, which carries the whole mismatch ``delta_n``.
    """

    n_vis: float = 1.0
    n_ir: float = 1.0
    n_ast: float = 1.0

    def __post_init__(self):
        for name in ("n_vis", "n_ir", "n_ast"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < INDEX_FLOOR:
                raise DomainError(f"{name} must be finite and >= {INDEX_FLOOR}, got {v}")

    @classmethod
    def from_delta_n(cls, delta_n):
        return cls(1.0, 1.0, 1.0 + delta_n)


@dataclass(frozen=True)
class EnsembleParams:
    """Molecule count from a concentration (cm^-3) and volume (mm^3), or given directly."""

    concentration: Optional[float] = None
    volume_mm3: Optional[float] = None
    n_molecules: Optional[float] = None
    consistency: float = 0.01

    def __post_init__(self):
        for name in ("concentration", "volume_mm3", "n_molecules"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be positive, got {v}")
        derived = self._derived()
        if derived is None and self.n_molecules is None:
            raise DomainError("need n_molecules or both concentration and volume_mm3")
        if derived is not None and self.n_molecules is not None:
            if abs(derived - self.n_molecules) > self.consistency * self.n_molecules:
                raise DomainError(
                    f"n_molecules = {self.n_molecules:.6g} inconsistent with "
                    f"concentration x volume = {derived:.6g}"
                )

    def _derived(self):
        if self.concentration is None or self.volume_mm3 is None:
            return None
        return self.concentration * self.volume_mm3 / MM3_PER_CM3

    @property
    def count(self):
        return self.n_molecules if self.n_molecules is not None else self._derived()


def antistokes_frequency(drive):
    return drive.omega_vis + 2.0 * drive.omega_ir


def wavevector_mismatch(disp, drive):
    """Collinear mismatch ``k_aSt - k_vis - 2 k_ir`` in nm^-1."""
    # grouped by index differences so equal indices give exactly zero
    return (
        (disp.n_ast - disp.n_vis) * drive.omega_vis + 2.0 * (disp.n_ast - disp.n_ir) * drive.omega_ir
    ) / HBAR_C_EV_NM


def coherence_length(delta_k):
    """``2 pi / delta_k`` in metres for ``delta_k`` in nm^-1; ``inf`` when matched."""
    if delta_k < 0:
        warnings.warn(f"negative wavevector mismatch {delta_k:.6g} nm^-1; using its magnitude",
                      RuntimeWarning, stacklevel=2)
        delta_k = -delta_k
    if delta_k == 0:
        return math.inf
    return 2.0 * math.pi / delta_k / NM_PER_M


def enhancement_factor(ens, n_coh, n_incoh):
    """Coherent (N^2 n_coh) over spontaneous (N n_incoh) signal: ``N n_coh / n_incoh``."""
    if n_incoh <= 0:
        raise DomainError("n_incoh must be positive (zero-temperature comparison is undefined)")
    if n_coh < 0:
        raise DomainError("n_coh must be non-negative")
    n = ens.count if isinstance(ens, EnsembleParams) else float(ens)
    if n < 1:
        raise DomainError(f"molecule count must be >= 1, got {n}")
    return n * n_coh / n_incoh
