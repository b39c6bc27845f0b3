"""Master-equation oracle for the driven two-level system with a vibrational mode."""

from .correlation import CorrelationSpectrum, emission_spectrum
from .integrator import IntegratorError, propagate
from .simulate import OracleConfig, OracleResult, ResonanceScan, resonance_scan, simulate
from .validation import ValidationReport, compare_with_analytic

__all__ = [
    "CorrelationSpectrum",
    "IntegratorError",
    "OracleConfig",
    "OracleResult",
    "ResonanceScan",
    "ValidationReport",
    "compare_with_analytic",
    "emission_spectrum",
    "propagate",
    "resonance_scan",
    "simulate",
]
