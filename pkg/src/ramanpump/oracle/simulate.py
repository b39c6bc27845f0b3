"""Full-quantum master-equation runs and extraction of driven observables."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import curve_fit

from .integrator import propagate
from .model import build_generator, expectation_functional, initial_state


@dataclass(frozen=True)
class OracleConfig:
    """Controls for one master-equation run.

    Times are in units of hbar/eV (i.e. 1/energy). ``None`` entries are
    resolved from the molecule's vibrational damping by :meth:`resolve`.
    """

    fock_cutoff: int = 8
    t_final: Optional[float] = None
    rtol: float = 1e-8
    atol: float = 1e-10
    demod_window: Optional[tuple[float, float]] = None
    n_bar_override: Optional[float] = None
    spectrum_enabled: bool = False
    tau_max: Optional[float] = None
    window: str = "hann"
    spectrum_part: str = "incoherent"
    n_time_samples: Optional[int] = None
    sample_dt: Optional[float] = None
    tau_dt: Optional[float] = None
    initial_state: str = "thermal"
    truncation_threshold: float = 1e-6
    transient_factor: float = 5.0
    demod_start_factor: float = 3.0

    def resolve(self, mol, drive):
        gv = mol.gamma_v
        t_final = self.t_final if self.t_final is not None else 8.0 / gv
        window = self.demod_window if self.demod_window is not None else (5.0 / gv, t_final)
        fast = max(mol.omega_v, 2.0 * drive.omega_ir)
        sample_dt = self.sample_dt if self.sample_dt is not None else 2.0 * math.pi / (20.0 * fast)
        tau_dt = self.tau_dt if self.tau_dt is not None else 2.0 * math.pi / (
            2.5 * (max(mol.omega0, drive.omega_vis) + 2.0 * mol.omega_v)
        )
        n_samples = self.n_time_samples
        if n_samples is None:
            # enough start times to cancel every non-stationary harmonic of sigma
            fundamental = 2.0 * math.pi / common_period(drive, mol.omega0)
            top = 2.0 * (drive.omega_vis + 2.0 * drive.omega_ir) / fundamental + 1.0
            n_samples = min(64, 1 << int(math.ceil(math.log2(top))))
        return replace(
            self,
            n_time_samples=int(n_samples),
            t_final=float(t_final),
            demod_window=(float(window[0]), float(window[1])),
            tau_max=float(self.tau_max if self.tau_max is not None else 10.0 / gv),
            sample_dt=float(sample_dt),
            tau_dt=float(tau_dt),
        )

    def check(self, mol):
        if self.fock_cutoff < 2:
            raise ValueError("fock_cutoff must be >= 2")
        if self.t_final < self.transient_factor / mol.gamma_v:
            raise ValueError(
                f"t_final = {self.t_final:.6g} is not >> 1/gamma_v "
                f"(need >= {self.transient_factor / mol.gamma_v:.6g})"
            )
        t0, t1 = self.demod_window
        if t0 < self.demod_start_factor / mol.gamma_v:
            raise ValueError(
                f"demodulation window starts at {t0:.6g}, inside the transient "
                f"(need >= {self.demod_start_factor / mol.gamma_v:.6g})"
            )
        if not t0 < t1 <= self.t_final:
            raise ValueError("demodulation window must satisfy t_start < t_end <= t_final")
        if self.window not in ("hann", "none"):
            raise ValueError(f"unknown window {self.window!r}")
        if self.spectrum_part not in ("incoherent", "total"):
            raise ValueError(f"unknown spectrum part {self.spectrum_part!r}")
        if self.spectrum_enabled and self.tau_max < 10.0 / mol.gamma_v:
            raise ValueError("tau_max must be >= 10/gamma_v")


@dataclass(frozen=True)
class Demodulation:
    """Least-squares fit ``x(t) ~ A e^{-i w t} + B e^{+i w t} + C``."""

    frequency: float
    A: complex
    B: complex
    C: complex
    residual_rms: float


@dataclass(frozen=True)
class OracleResult:
    b_amplitude: complex
    demodulation: Demodulation
    n_b_mean: float
    sigma_population: float
    top_fock_population: float
    reliable: bool
    max_trace_error: float
    max_hermiticity_error: float
    min_eigenvalue: float
    n_bar: float
    n_steps: int
    times: np.ndarray
    b_trace: np.ndarray
    spectrum: Optional[object] = None

    def as_dict(self):
        return {
            "b_amplitude": {"re": self.b_amplitude.real, "im": self.b_amplitude.imag},
            "b_abs": abs(self.b_amplitude),
            "n_b_mean": self.n_b_mean,
            "sigma_population": self.sigma_population,
            "top_fock_population": self.top_fock_population,
            "reliable": self.reliable,
            "max_trace_error": self.max_trace_error,
            "max_hermiticity_error": self.max_hermiticity_error,
            "min_eigenvalue": self.min_eigenvalue,
            "n_bar": self.n_bar,
            "n_steps": self.n_steps,
        }


def demodulate(times, values, frequency):
    times = np.asarray(times, dtype=float)
    M = np.stack(
        [np.exp(-1j * frequency * times), np.exp(1j * frequency * times), np.ones_like(times)],
        axis=1,
    )
    coef, *_ = np.linalg.lstsq(M, values, rcond=None)
    resid = values - M @ coef
    return Demodulation(frequency, complex(coef[0]), complex(coef[1]), complex(coef[2]),
                        float(np.sqrt(np.mean(np.abs(resid) ** 2))))


def bath_occupation(mol, env, cfg):
    if cfg.n_bar_override is not None:
        return float(cfg.n_bar_override)
    return env.n_bar(mol.omega_v)


def common_period(drive, fallback):
    """Smallest period shared by the active drives (2 pi / fallback if none)."""
    active = [w for a, w in ((drive.rabi_vis, drive.omega_vis), (drive.rabi_ir, drive.omega_ir)) if a != 0]
    if not active:
        return 2.0 * math.pi / fallback
    if len(active) == 1:
        return 2.0 * math.pi / active[0]
    ratio = Fraction(active[0] / active[1]).limit_denominator(1000)
    if abs(float(ratio) - active[0] / active[1]) > 1e-9 * active[0] / active[1]:
        # incommensurate drives: average over the slower drive's period
        return 2.0 * math.pi / min(active)
    return 2.0 * math.pi * ratio.numerator / active[0]


def simulate(mol, drive, env, cfg=OracleConfig()):
    cfg = cfg.resolve(mol, drive)
    cfg.check(mol)
    n_bar = bath_occupation(mol, env, cfg)
    ops, gen = build_generator(mol, drive, n_bar, cfg.fock_cutoff)
    W = np.array([
        expectation_functional(ops.b),
        expectation_functional(ops.num_b),
        expectation_functional(ops.num_sigma),
        expectation_functional(ops.fock_projector(cfg.fock_cutoff)),
    ])
    y0 = initial_state(cfg.initial_state, n_bar, cfg.fock_cutoff)
    n = int(math.floor(cfg.t_final / cfg.sample_dt))
    times = np.arange(n + 1) * cfg.sample_dt
    if times[-1] < cfg.t_final:
        times = np.append(times, cfg.t_final)
    traj = propagate(gen, y0, 0.0, times, W, rtol=cfg.rtol, atol=cfg.atol)

    b, nb, ns, top = (traj.observables[:, k] for k in range(4))
    t0, t1 = cfg.demod_window
    win = (times >= t0) & (times <= t1)
    demod = demodulate(times[win], b[win], 2.0 * drive.omega_ir)
    dim = ops.dim
    rho = traj.final_state.reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(rho).min())
    top_pop = float(np.max(top.real))

    spectrum = None
    if cfg.spectrum_enabled:
        from .correlation import emission_spectrum_from_state

        spectrum = emission_spectrum_from_state(
            mol, drive, cfg, ops, gen, traj.final_state, cfg.t_final
        )

    return OracleResult(
        b_amplitude=demod.A,
        demodulation=demod,
        n_b_mean=float(np.mean(nb[win].real)),
        sigma_population=float(np.mean(ns[win].real)),
        top_fock_population=top_pop,
        reliable=top_pop < cfg.truncation_threshold,
        max_trace_error=traj.max_trace_error,
        max_hermiticity_error=traj.max_hermiticity_error,
        min_eigenvalue=min_eig,
        n_bar=n_bar,
        n_steps=traj.n_steps,
        times=times,
        b_trace=b,
        spectrum=spectrum,
    )


def lorentzian_b2(x, amplitude, center, half_width):
    return amplitude / ((x - center) ** 2 + half_width**2)


@dataclass(frozen=True)
class ResonanceScan:
    detunings: np.ndarray
    b2: np.ndarray
    center: float
    half_width: float
    amplitude: float

    def as_dict(self):
        return {
            "detunings": self.detunings.tolist(),
            "b2": self.b2.tolist(),
            "center": self.center,
            "half_width": self.half_width,
            "amplitude": self.amplitude,
        }


def _scan_point(args):
    mol, drive, env, cfg = args
    return abs(simulate(mol, drive, env, cfg).b_amplitude) ** 2


def resonance_scan(mol, drive, env, cfg, detunings, *, jobs=1):
    """|b|^2 versus w_v - 2 w_ir, with a Lorentzian fit of centre and half-width."""
    detunings = np.asarray(detunings, dtype=float)
    tasks = [
        (mol, replace(drive, omega_ir=0.5 * (mol.omega_v - d)), env, cfg) for d in detunings
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            b2 = np.array(list(pool.map(_scan_point, tasks)))
    else:
        b2 = np.array([_scan_point(t) for t in tasks])
    # fit in units of gamma_v and peak height
    x = detunings / mol.gamma_v
    peak = b2.max()
    y = b2 / peak
    i = int(np.argmax(y))
    popt, _ = curve_fit(lorentzian_b2, x, y, p0=(1.0, x[i], 1.0), maxfev=10000)
    return ResonanceScan(
        detunings,
        b2,
        float(popt[1] * mol.gamma_v),
        float(abs(popt[2]) * mol.gamma_v),
        float(popt[0] * peak * mol.gamma_v**2),
    )
