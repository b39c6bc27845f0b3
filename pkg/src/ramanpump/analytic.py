"""Closed-form perturbative results for IR-pumped Raman scattering.

Spectral weights are quoted in arbitrary intensity units in which the common
dipole-radiation prefactor ``2|d_eg|^2 / 3c^3`` equals one. Cross-sections
(nm^2) and susceptibilities (nm^3/eV, Gaussian) keep full physical units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .core import E2_EV_NM, HBAR_C_EV_NM, NM3_PER_CM3, DomainError

FORCE_LABELS = ("2w_vis", "w_vis-w_ir", "w_vis+w_ir", "2w_ir", "DC")

DELTA_LABELS = ("rayleigh_vis", "rayleigh_ir", "coherent_stokes", "coherent_antistokes")
LORENTZ_LABELS = ("stokes_vis", "antistokes_vis", "stokes_ir", "antistokes_ir")

# 1 nm^3/eV expressed in cm^3/erg
ESU_PER_NM3_EV = 1e-21 / 1.602176634e-12


def _nonzero(name, value):
    if value == 0:
        raise DomainError(f"zero denominator: {name} = 0")
    return value


# -- linear response ---------------------------------------------------------


@dataclass(frozen=True)
class LinearResponse:
    """First-order TLS coherence.

    ``sigma_1(t) = c_vis_minus e^{-i w_vis t} + c_vis_plus e^{+i w_vis t}
    + c_ir_minus e^{-i w_ir t} + c_ir_plus e^{+i w_ir t}``.
    """

    c_vis_minus: complex
    c_vis_plus: complex
    c_ir_minus: complex
    c_ir_plus: complex
    omega_vis: float
    omega_ir: float

    def terms(self):
        """(amplitude, nu) pairs with sigma_1 = sum amplitude * exp(-i nu t)."""
        return (
            (self.c_vis_minus, self.omega_vis),
            (self.c_vis_plus, -self.omega_vis),
            (self.c_ir_minus, self.omega_ir),
            (self.c_ir_plus, -self.omega_ir),
        )

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return sum(c * np.exp(-1j * nu * t) for c, nu in self.terms())


def linear_response(mol, drive):
    d_vis = _nonzero("omega_vis - omega0", drive.omega_vis - mol.omega0)
    d_ir = _nonzero("omega_ir - omega0", drive.omega_ir - mol.omega0)
    # the counter-rotating amplitudes carry a minus sign: solving
    # d(sigma)/dt + i w0 sigma = -i Omega cos(w t) for the e^{+iwt} part gives
    # -Omega / 2(w + w0)
    return LinearResponse(
        c_vis_minus=drive.rabi_vis / (2.0 * d_vis),
        c_vis_plus=-drive.rabi_vis / (2.0 * (drive.omega_vis + mol.omega0)),
        c_ir_minus=drive.rabi_ir / (2.0 * d_ir),
        c_ir_plus=-drive.rabi_ir / (2.0 * (drive.omega_ir + mol.omega0)),
        omega_vis=drive.omega_vis,
        omega_ir=drive.omega_ir,
    )


# -- effective force on the vibration ----------------------------------------


@dataclass(frozen=True)
class ForceComponent:
    """Coefficient of ``exp(-i frequency t)`` in ``-i g sigma_1^dagger sigma_1``."""

    frequency: float
    complex_weight: complex
    label: str


def effective_force_components(mol, drive):
    """Five-term decomposition of the force driving the vibration.

    The ``exp(+i frequency t)`` partner of each component has weight
    ``-i g conj(r)`` where ``r = complex_weight / (-i g)``; for real Rabi
    energies it equals ``complex_weight``.
    """
    lr = linear_response(mol, drive)
    a, p = lr.c_vis_minus, lr.c_vis_plus
    c, q = lr.c_ir_minus, lr.c_ir_plus
    cj = np.conj
    products = {
        "2w_vis": cj(p) * a,
        "w_vis-w_ir": cj(p) * q + cj(c) * a,
        "w_vis+w_ir": cj(p) * c + cj(q) * a,
        "2w_ir": cj(q) * c,
        "DC": abs(a) ** 2 + abs(p) ** 2 + abs(c) ** 2 + abs(q) ** 2,
    }
    freqs = {
        "2w_vis": 2.0 * drive.omega_vis,
        "w_vis-w_ir": drive.omega_vis - drive.omega_ir,
        "w_vis+w_ir": drive.omega_vis + drive.omega_ir,
        "2w_ir": 2.0 * drive.omega_ir,
        "DC": 0.0,
    }
    return [
        ForceComponent(freqs[k], complex(-1j * mol.g * products[k]), k) for k in FORCE_LABELS
    ]


# -- coherent vibration ------------------------------------------------------


class CoherentAmplitude(NamedTuple):
    amplitude: complex
    frequency: float


def coherent_vibration_amplitude(mol, drive):
    """Steady coherent <b> driven at 2 w_ir by the resonant force component.

    Magnitude ``(g/4) Omega_ir^2 / (w0^2 - w_ir^2) / |(w_v - 2 w_ir) - i gamma_v|``.
    """
    force = -0.25j * mol.g * drive.rabi_ir**2 / _nonzero(
        "omega0^2 - omega_ir^2", mol.omega0**2 - drive.omega_ir**2
    )
    detuning = mol.omega_v - 2.0 * drive.omega_ir
    # db/dt + (i w_v + gamma_v) b = force e^{-2i w_ir t}
    amp = -1j * force / (detuning - 1j * mol.gamma_v)
    return CoherentAmplitude(complex(amp), 2.0 * drive.omega_ir)


def coherent_quanta_exact(mol, drive):
    return abs(coherent_vibration_amplitude(mol, drive).amplitude) ** 2


def is_resonant(mol, drive, rel=1e-12):
    return math.isclose(2.0 * drive.omega_ir, mol.omega_v, rel_tol=rel, abs_tol=0.0)


def coherent_quanta(mol, drive):
    """Number of coherent vibrational quanta.

    At 2 w_ir = w_v this is the simplified ``(Omega_ir/w0)^4 (g/gamma_v)^2 / 16``
    (drops O((w_ir/w0)^2)); off resonance it is ``|b_coh|^2``.
    """
    if is_resonant(mol, drive):
        return (drive.rabi_ir / mol.omega0) ** 4 * (mol.g / mol.gamma_v) ** 2 / 16.0
    return coherent_quanta_exact(mol, drive)


# -- spectra -----------------------------------------------------------------


@dataclass(frozen=True)
class DeltaLine:
    center: float
    weight: float
    label: str


@dataclass(frozen=True)
class LorentzLine:
    """``weight * width / ((center - w)^2 + width^2 / 4)``; integrates to 2 pi weight."""

    center: float
    weight: float
    width: float
    label: str

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.weight * self.width / ((self.center - omega) ** 2 + self.width**2 / 4.0)


@dataclass(frozen=True)
class SpectrumModel:
    delta_lines: tuple[DeltaLine, ...] = ()
    lorentz_lines: tuple[LorentzLine, ...] = ()
    radiation_factor: bool = True

    def __post_init__(self):
        for line in (*self.delta_lines, *self.lorentz_lines):
            if not line.weight >= 0:
                raise DomainError(f"negative weight on line {line.label}")

    def line(self, label):
        for line in (*self.delta_lines, *self.lorentz_lines):
            if line.label == label:
                return line
        raise KeyError(f"no line labelled {label!r}")

    def continuum(self, omega):
        omega = np.asarray(omega, dtype=float)
        out = np.zeros_like(omega)
        for line in self.lorentz_lines:
            out = out + line(omega)
        return out

    def scaled(self, factor):
        return replace(
            self,
            delta_lines=tuple(replace(d, weight=d.weight * factor) for d in self.delta_lines),
            lorentz_lines=tuple(replace(l, weight=l.weight * factor) for l in self.lorentz_lines),
        )

    def __add__(self, other):
        if self.radiation_factor != other.radiation_factor:
            raise ValueError("cannot combine spectra with different radiation conventions")
        return SpectrumModel(
            self.delta_lines + other.delta_lines,
            self.lorentz_lines + other.lorentz_lines,
            self.radiation_factor,
        )

    def as_dict(self):
        return {
            "radiation_factor": self.radiation_factor,
            "delta_lines": [
                {"label": d.label, "center_eV": d.center, "weight": d.weight}
                for d in self.delta_lines
            ],
            "lorentz_lines": [
                {"label": l.label, "center_eV": l.center, "weight": l.weight, "width_eV": l.width}
                for l in self.lorentz_lines
            ],
        }


def _rad(omega, on):
    return omega**4 if on else 1.0


def incoherent_spectrum(mol, drive, env, *, radiation_factor=True, n_bar=None):
    """Rayleigh deltas plus thermal Stokes/anti-Stokes Lorentzians of both drives.

    With ``radiation_factor=False`` the w^4 dipole-radiation factors are
    dropped, leaving the bare two-time-correlator weights.
    """
    nb = env.n_bar(mol.omega_v) if n_bar is None else n_bar
    g2, wv, w0 = mol.g**2, mol.omega_v, mol.omega0
    deltas, lorentz = [], []
    for tag, w, rabi in (("vis", drive.omega_vis, drive.rabi_vis), ("ir", drive.omega_ir, drive.rabi_ir)):
        base = 0.25 * (rabi / _nonzero(f"omega_{tag} - omega0", w - w0)) ** 2
        deltas.append(DeltaLine(w, _rad(w, radiation_factor) * base, f"rayleigh_{tag}"))
        stokes = base * _rad(w - wv, radiation_factor) * g2 / _nonzero(
            "omega0 - omega_x + omega_v", w0 - w + wv
        ) ** 2 * (1.0 + nb)
        anti = base * _rad(w + wv, radiation_factor) * g2 / _nonzero(
            "omega0 - omega_x - omega_v", w0 - w - wv
        ) ** 2 * nb
        lorentz.append(LorentzLine(w - wv, stokes, mol.gamma_v, f"stokes_{tag}"))
        lorentz.append(LorentzLine(w + wv, anti, mol.gamma_v, f"antistokes_{tag}"))
    return SpectrumModel(tuple(deltas), tuple(lorentz), radiation_factor)


def incoherent_stokes_antistokes_ratio(env, mol):
    """Thermal anti-Stokes/Stokes intensity ratio exp(-w_v / kT)."""
    return math.exp(-mol.omega_v / env.kT)


def _sideband_frequencies(mol, drive):
    w_ast = drive.omega_vis + 2.0 * drive.omega_ir
    w_st = drive.omega_vis - 2.0 * drive.omega_ir
    if w_st == 0:
        raise DomainError("omega_vis = 2 omega_ir puts the Stokes line at zero frequency")
    return w_st, w_ast


def sideband_bracket(mol, drive, branch):
    """``1 + g^2 / 8 (w_vis - w0)((w_v - 2 w_ir) -/+ i gamma_v)``.

    The anti-Stokes branch takes ``- i gamma_v``, the Stokes branch its conjugate.
    """
    if branch not in ("stokes", "antistokes"):
        raise ValueError(f"unknown branch {branch!r}")
    sign = -1.0 if branch == "antistokes" else 1.0
    detuning = mol.omega_v - 2.0 * drive.omega_ir
    denom = 8.0 * _nonzero("omega_vis - omega0", drive.omega_vis - mol.omega0) * (
        detuning + sign * 1j * mol.gamma_v
    )
    return 1.0 + mol.g**2 / _nonzero("resonant denominator", denom)


def resonant_to_nonresonant_ratio(mol, drive):
    """|resonant term| / |non-resonant term| inside the sideband bracket."""
    return abs(sideband_bracket(mol, drive, "antistokes") - 1.0)


def coherent_sideband_weights(mol, drive, *, radiation_factor=True):
    """Delta lines at w_vis -/+ 2 w_ir from the coherent vibration (no temperature input)."""
    w_st, w_ast = _sideband_frequencies(mol, drive)
    common = drive.rabi_vis**2 * drive.rabi_ir**4 / _nonzero(
        "omega0^2 - omega_ir^2", mol.omega0**2 - drive.omega_ir**2
    ) ** 2
    lines = []
    for label, w, branch in (("coherent_stokes", w_st, "stokes"), ("coherent_antistokes", w_ast, "antistokes")):
        bracket = abs(sideband_bracket(mol, drive, branch)) ** 2
        det = _nonzero(f"{label} detuning", w - mol.omega0)
        lines.append(DeltaLine(w, common * bracket * _rad(w, radiation_factor) / det**2, label))
    return SpectrumModel(tuple(lines), (), radiation_factor)


def coherent_stokes_antistokes_ratio(mol, drive):
    """I_St / I_aSt from the coherent parts alone, ((w_aSt - w0)/(w_St - w0))^2."""
    model = coherent_sideband_weights(mol, drive, radiation_factor=False)
    return model.line("coherent_stokes").weight / model.line("coherent_antistokes").weight


# -- susceptibility and cross-section ----------------------------------------


@dataclass(frozen=True)
class Chi3Value:
    """Third-order susceptibility in nm^3/eV (Gaussian units)."""

    value: complex
    branch: str

    @property
    def esu(self):
        return self.value * ESU_PER_NM3_EV


def _d4(mol):
    return (E2_EV_NM * mol.d_eg**2) ** 2


def chi3(mol, drive, concentration, *, resonant_only=False):
    """chi3(w_vis +/- 2 w_ir; w_vis, w_ir) for both branches.

    ``concentration`` is in cm^-3. Returns ``{"stokes": ..., "antistokes": ...}``.
    """
    if concentration < 0:
        raise DomainError("concentration must be non-negative")
    n = concentration / NM3_PER_CM3
    w_st, w_ast = _sideband_frequencies(mol, drive)
    pre = n * _d4(mol) / _nonzero("omega0^2 - omega_ir^2", mol.omega0**2 - drive.omega_ir**2)
    out = {}
    for branch, w in (("stokes", w_st), ("antistokes", w_ast)):
        bracket = sideband_bracket(mol, drive, branch)
        if resonant_only:
            bracket = bracket - 1.0
        out[branch] = Chi3Value(complex(pre * bracket / _nonzero("w - omega0", w - mol.omega0)), branch)
    return out


def raman_stokes_frequency(mol, drive):
    return drive.omega_vis - mol.omega_v


def stokes_cross_section(mol, drive):
    """Spontaneous Stokes cross-section in nm^2 (zero-temperature form)."""
    w_st = raman_stokes_frequency(mol, drive)
    k = w_st / HBAR_C_EV_NM
    d_vis = _nonzero("omega_vis - omega0", drive.omega_vis - mol.omega0)
    d_st = _nonzero("omega0 - omega_St", mol.omega0 - w_st)
    return 4.0 * math.pi / 3.0 * k**4 * _d4(mol) * mol.g**2 / (d_vis**2 * d_st**2)


def chi3_from_cross_section(mol, drive, concentration, sigma):
    """Stokes-branch resonant susceptibility recovered from a measured cross-section.

    Uses the sign convention of :func:`chi3`, i.e. the factor ``(w_St - w0)``.
    """
    if sigma < 0:
        raise DomainError("cross-section must be non-negative")
    n = concentration / NM3_PER_CM3
    w_st = raman_stokes_frequency(mol, drive)
    k = w_st / HBAR_C_EV_NM
    detuning = mol.omega_v - 2.0 * drive.omega_ir
    denom = _nonzero("omega0^2 - omega_ir^2", mol.omega0**2 - drive.omega_ir**2) * (
        detuning + 1j * mol.gamma_v
    )
    value = (
        3.0 / (32.0 * math.pi) * n / k**4
        * (drive.omega_vis - mol.omega0) * (w_st - mol.omega0) / denom * sigma
    )
    return Chi3Value(complex(value), "stokes")
