"""Emission spectra from two-time correlators via the quantum regression theorem."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .integrator import propagate
from .model import build_generator, expectation_functional, initial_state
from .simulate import bath_occupation, common_period


@dataclass(frozen=True)
class CorrelationSpectrum:
    """``S(w) = Re int_0^tau_max w(tau) <sigma^dag(t+tau) sigma(t)>_t e^{-i w tau} d tau``."""

    omega: np.ndarray
    intensity: np.ndarray
    tau: np.ndarray
    correlation: np.ndarray
    part: str
    window: str

    def band_power(self, center, half_width):
        """Integral of the spectrum over ``[center - half_width, center + half_width]``."""
        m = (self.omega >= center - half_width) & (self.omega <= center + half_width)
        return float(trapezoid(self.intensity[m], self.omega[m]))

    def value_at(self, omega):
        return np.interp(omega, self.omega, self.intensity)

    def as_dict(self):
        return {"part": self.part, "window": self.window, "n_points": int(self.omega.size)}


def taper(kind, tau, tau_max):
    if kind == "none":
        return np.ones_like(tau)
    # decaying half of a Hann window: 1 at tau = 0, 0 at tau_max
    return 0.5 * (1.0 + np.cos(np.pi * tau / tau_max))


def spectrum_from_correlation(tau, corr, window="hann", pad=8):
    """One-sided windowed Fourier transform on the FFT frequency grid [0, 2 pi / d tau)."""
    dtau = tau[1] - tau[0]
    f = corr * taper(window, tau, tau[-1])
    f = f.astype(complex)
    f[0] *= 0.5
    n_fft = 1 << int(math.ceil(math.log2(pad * f.size)))
    transform = np.fft.fft(f, n=n_fft) * dtau
    omega = 2.0 * math.pi * np.fft.fftfreq(n_fft, d=dtau)
    order = np.argsort(omega)
    return omega[order], transform.real[order]


def correlation_function(ops, gen, rho_t, t, tau, cfg):
    """<sigma^dag(t+tau) sigma(t)> by propagating sigma rho(t), optionally minus the coherent part."""
    dim = ops.dim
    rho = rho_t.reshape(dim, dim)
    sig = ops.sigma.toarray()
    x0 = sig @ rho
    if cfg.spectrum_part == "incoherent":
        x0 = x0 - np.trace(x0) * rho
    W = expectation_functional(ops.sigma.conj().T)[None, :]
    traj = propagate(
        gen, x0.ravel(), t, t + tau, W, rtol=cfg.rtol, atol=cfg.atol, check_density=False
    )
    return traj.observables[:, 0]


def emission_spectrum_from_state(mol, drive, cfg, ops, gen, state, t_start):
    """Average the correlator over start times spread across one drive period."""
    period = common_period(drive, mol.omega0)
    n_tau = int(math.floor(cfg.tau_max / cfg.tau_dt)) + 1
    tau = np.arange(n_tau) * cfg.tau_dt
    starts = t_start + period * np.arange(cfg.n_time_samples) / cfg.n_time_samples
    identity = np.eye(ops.dim).ravel()[None, :]
    corr = np.zeros(n_tau, dtype=complex)
    rho, t = state, t_start
    for ts in starts:
        if ts > t:
            rho = propagate(gen, rho, t, np.array([ts]), identity, rtol=cfg.rtol, atol=cfg.atol).final_state
            t = ts
        corr += correlation_function(ops, gen, rho, t, tau, cfg)
    corr /= len(starts)
    omega, intensity = spectrum_from_correlation(tau, corr, cfg.window)
    return CorrelationSpectrum(omega, intensity, tau, corr, cfg.spectrum_part, cfg.window)


def emission_spectrum(mol, drive, env, cfg):
    """Sampled emission spectrum of the driven molecule in its quasi-stationary regime."""
    cfg = cfg.resolve(mol, drive)
    cfg.check(mol)
    n_bar = bath_occupation(mol, env, cfg)
    ops, gen = build_generator(mol, drive, n_bar, cfg.fock_cutoff)
    y0 = initial_state(cfg.initial_state, n_bar, cfg.fock_cutoff)
    t_start = cfg.demod_window[0]
    identity = np.eye(ops.dim).ravel()[None, :]
    state = propagate(gen, y0, 0.0, np.array([t_start]), identity, rtol=cfg.rtol, atol=cfg.atol).final_state
    return emission_spectrum_from_state(mol, drive, cfg, ops, gen, state, t_start)
