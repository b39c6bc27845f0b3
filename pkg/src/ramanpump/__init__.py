"""Coherent Raman scattering from a molecule whose vibration is driven parametrically by an IR pump."""

from .analytic import (
    chi3,
    chi3_from_cross_section,
    coherent_quanta,
    coherent_sideband_weights,
    coherent_stokes_antistokes_ratio,
    coherent_vibration_amplitude,
    effective_force_components,
    incoherent_spectrum,
    incoherent_stokes_antistokes_ratio,
    linear_response,
    resonant_to_nonresonant_ratio,
    stokes_cross_section,
)
from .core import (
    Diagnostics,
    DomainError,
    DriveParams,
    Environment,
    MoleculeParams,
    Thresholds,
    perturbation_parameter,
    thermal_occupation,
    validate_params,
)
from .ensemble import (
    DispersionData,
    EnsembleParams,
    coherence_length,
    enhancement_factor,
    wavevector_mismatch,
)
from .spectra import FrequencyGrid, SampledSpectrum, integrated_line_power, sample

__version__ = "0.1.0"
