"""Adaptive Dormand-Prince 5(4) integrator for periodically driven Liouvillians.

The generator has the form ``L(t) = L0 + f(t) L1`` with ``f(t) = sum_k
a_k cos(w_k t)``; both superoperators are held in CSR form so one right-hand
side costs two sparse mat-vecs. The stepping loop is compiled with numba since
the lab-frame TLS oscillation forces ~10^5 steps per run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
import scipy.sparse as sps

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_STEP_UNDERFLOW = 2


class IntegratorError(RuntimeError):
    def __init__(self, message, last_time):
        super().__init__(f"{message} (last good time t = {last_time:.9g})")
        self.last_time = last_time


@dataclass(frozen=True)
class Generator:
    """``L(t) = L0 + (sum_k amplitudes[k] cos(frequencies[k] t)) L1``."""

    L0: sps.csr_matrix
    L1: sps.csr_matrix
    amplitudes: np.ndarray
    frequencies: np.ndarray

    @property
    def dim(self):
        return self.L0.shape[0]


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    observables: np.ndarray
    final_state: np.ndarray
    n_steps: int
    n_rejected: int
    max_trace_error: float
    max_hermiticity_error: float


@numba.njit(cache=True)
def _rhs(t, y, out, p0, i0, x0, p1, i1, x1, amps, freqs):
    f = 0.0
    for k in range(amps.shape[0]):
        f += amps[k] * np.cos(freqs[k] * t)
    n = y.shape[0]
    for r in range(n):
        acc = 0.0j
        for k in range(p0[r], p0[r + 1]):
            acc += x0[k] * y[i0[k]]
        if f != 0.0:
            acc1 = 0.0j
            for k in range(p1[r], p1[r + 1]):
                acc1 += x1[k] * y[i1[k]]
            acc += f * acc1
        out[r] = acc


@numba.njit(cache=True)
def _record(y, W, dim, check_density, out_row):
    for m in range(W.shape[0]):
        acc = 0.0j
        for k in range(y.shape[0]):
            acc += W[m, k] * y[k]
        out_row[m] = acc
    trace_err = 0.0
    herm_err = 0.0
    if check_density:
        tr = 0.0j
        for i in range(dim):
            tr += y[i * dim + i]
            for j in range(i, dim):
                d = abs(y[i * dim + j] - np.conj(y[j * dim + i]))
                if d > herm_err:
                    herm_err = d
        trace_err = abs(tr - 1.0)
    return trace_err, herm_err


@numba.njit(cache=True)
def _dopri5(
    t0, y0, t_eval, W, dim, check_density,
    p0, i0, x0, p1, i1, x1, amps, freqs,
    rtol, atol, h_init, h_max, max_steps,
):
    n = y0.shape[0]
    y = y0.copy()
    y_new = np.empty(n, dtype=np.complex128)
    ytmp = np.empty(n, dtype=np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    k5 = np.empty(n, dtype=np.complex128)
    k6 = np.empty(n, dtype=np.complex128)
    k7 = np.empty(n, dtype=np.complex128)
    obs = np.zeros((t_eval.shape[0], W.shape[0]), dtype=np.complex128)

    t = t0
    h = h_init
    n_steps = 0
    n_rejected = 0
    max_trace = 0.0
    max_herm = 0.0
    status = 0
    idx = 0
    # outputs that coincide with the start time
    while idx < t_eval.shape[0] and t_eval[idx] <= t:
        tr, he = _record(y, W, dim, check_density, obs[idx])
        max_trace = max(max_trace, tr)
        max_herm = max(max_herm, he)
        idx += 1
    if idx == t_eval.shape[0]:
        return obs, y, n_steps, n_rejected, max_trace, max_herm, status, t

    _rhs(t, y, k1, p0, i0, x0, p1, i1, x1, amps, freqs)
    while idx < t_eval.shape[0]:
        if n_steps + n_rejected >= max_steps:
            status = 1
            break
        target = t_eval[idx]
        step = min(h, h_max)
        hit = False
        if t + step >= target:
            step = target - t
            hit = True
        if step < 1e-14 * max(1.0, abs(t)):
            status = 2
            break

        for r in range(n):
            ytmp[r] = y[r] + step * _A21 * k1[r]
        _rhs(t + _C2 * step, ytmp, k2, p0, i0, x0, p1, i1, x1, amps, freqs)
        for r in range(n):
            ytmp[r] = y[r] + step * (_A31 * k1[r] + _A32 * k2[r])
        _rhs(t + _C3 * step, ytmp, k3, p0, i0, x0, p1, i1, x1, amps, freqs)
        for r in range(n):
            ytmp[r] = y[r] + step * (_A41 * k1[r] + _A42 * k2[r] + _A43 * k3[r])
        _rhs(t + _C4 * step, ytmp, k4, p0, i0, x0, p1, i1, x1, amps, freqs)
        for r in range(n):
            ytmp[r] = y[r] + step * (_A51 * k1[r] + _A52 * k2[r] + _A53 * k3[r] + _A54 * k4[r])
        _rhs(t + _C5 * step, ytmp, k5, p0, i0, x0, p1, i1, x1, amps, freqs)
        for r in range(n):
            ytmp[r] = y[r] + step * (
                _A61 * k1[r] + _A62 * k2[r] + _A63 * k3[r] + _A64 * k4[r] + _A65 * k5[r]
            )
        _rhs(t + step, ytmp, k6, p0, i0, x0, p1, i1, x1, amps, freqs)
        for r in range(n):
            y_new[r] = y[r] + step * (
                _B1 * k1[r] + _B3 * k3[r] + _B4 * k4[r] + _B5 * k5[r] + _B6 * k6[r]
            )
        _rhs(t + step, y_new, k7, p0, i0, x0, p1, i1, x1, amps, freqs)

        err = 0.0
        for r in range(n):
            e = step * (
                _E1 * k1[r] + _E3 * k3[r] + _E4 * k4[r] + _E5 * k5[r] + _E6 * k6[r] + _E7 * k7[r]
            )
            sc = atol + rtol * max(abs(y[r]), abs(y_new[r]))
            q = abs(e) / sc
            err += q * q
        err = np.sqrt(err / n)

        if err <= 1.0:
            t = target if hit else t + step
            for r in range(n):
                y[r] = y_new[r]
                k1[r] = k7[r]
            n_steps += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            # a step shortened to land on an output time says nothing about h
            if not hit or step >= h:
                h = step * fac
            while idx < t_eval.shape[0] and t_eval[idx] <= t:
                tr, he = _record(y, W, dim, check_density, obs[idx])
                max_trace = max(max_trace, tr)
                max_herm = max(max_herm, he)
                idx += 1
        else:
            n_rejected += 1
            h = step * max(0.2, 0.9 * err ** -0.2)
    return obs, y, n_steps, n_rejected, max_trace, max_herm, status, t


def propagate(
    gen,
    y0,
    t0,
    t_eval,
    observables,
    *,
    rtol=1e-8,
    atol=1e-10,
    h_init=1e-3,
    h_max=np.inf,
    max_steps=50_000_000,
    check_density=True,
):
    """Integrate ``dy/dt = L(t) y`` from ``t0`` and sample ``observables @ y``.

    ``observables`` is an ``(n_obs, dim)`` complex array of linear functionals.
    With ``check_density`` the trace and Hermiticity of the row-major
    vectorised density matrix are monitored at every output time.
    """
    t_eval = np.ascontiguousarray(t_eval, dtype=np.float64)
    if t_eval.ndim != 1 or np.any(np.diff(t_eval) <= 0):
        raise ValueError("t_eval must be strictly increasing")
    if t_eval.size and t_eval[0] < t0:
        raise ValueError("t_eval must not precede t0")
    W = np.ascontiguousarray(np.atleast_2d(observables), dtype=np.complex128)
    y0 = np.ascontiguousarray(y0, dtype=np.complex128)
    dim = int(round(np.sqrt(y0.size)))
    L0 = gen.L0.tocsr()
    L1 = gen.L1.tocsr()
    obs, y, n_steps, n_rej, max_tr, max_he, status, t_last = _dopri5(
        float(t0), y0, t_eval, W, dim, bool(check_density),
        L0.indptr.astype(np.int64), L0.indices.astype(np.int64), L0.data.astype(np.complex128),
        L1.indptr.astype(np.int64), L1.indices.astype(np.int64), L1.data.astype(np.complex128),
        np.asarray(gen.amplitudes, dtype=np.float64), np.asarray(gen.frequencies, dtype=np.float64),
        float(rtol), float(atol), float(h_init), float(h_max), int(max_steps),
    )
    if status == STATUS_MAX_STEPS:
        raise IntegratorError("step budget exhausted", t_last)
    if status == STATUS_STEP_UNDERFLOW:
        raise IntegratorError("step size underflow", t_last)
    return Trajectory(
        times=t_eval,
        observables=obs,
        final_state=y,
        n_steps=n_steps,
        n_rejected=n_rej,
        max_trace_error=max_tr,
        max_hermiticity_error=max_he,
    )
