"""Operators and Liouvillian of the driven TLS coupled to a truncated oscillator.

Basis ordering is ``|s> (x) |n>`` with ``s = 0`` the ground and ``s = 1`` the
excited electronic state, ``n = 0 .. fock_cutoff``. Density matrices are
vectorised row-major, so ``vec(A rho B) = kron(A, B.T) vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from .integrator import Generator


@dataclass(frozen=True)
class Operators:
    sigma: sps.csr_matrix
    b: sps.csr_matrix
    n_fock: int

    @property
    def dim(self):
        return self.sigma.shape[0]

    @property
    def identity(self):
        return sps.identity(self.dim, dtype=complex, format="csr")

    @property
    def num_b(self):
        return (self.b.conj().T @ self.b).tocsr()

    @property
    def num_sigma(self):
        return (self.sigma.conj().T @ self.sigma).tocsr()

    def fock_projector(self, n):
        p = sps.lil_matrix((self.n_fock + 1, self.n_fock + 1), dtype=complex)
        p[n, n] = 1.0
        return sps.kron(sps.identity(2), p, format="csr")


def operators(fock_cutoff):
    n = fock_cutoff + 1
    lower = sps.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    a = sps.diags(np.sqrt(np.arange(1, n)), 1, shape=(n, n), dtype=complex)
    sigma = sps.kron(lower, sps.identity(n), format="csr")
    b = sps.kron(sps.identity(2), a, format="csr")
    return Operators(sigma=sigma, b=b, n_fock=fock_cutoff)


def _commutator_super(H):
    eye = sps.identity(H.shape[0], dtype=complex, format="csr")
    return -1j * (sps.kron(H, eye) - sps.kron(eye, H.T))


def _dissipator_super(c):
    eye = sps.identity(c.shape[0], dtype=complex, format="csr")
    cdc = (c.conj().T @ c).tocsr()
    return sps.kron(c, c.conj()) - 0.5 * sps.kron(cdc, eye) - 0.5 * sps.kron(eye, cdc.T)


def collapse_rates(mol, n_bar):
    """Collapse rates (sigma, b, b^dagger).

    Rates are chosen so that <sigma> decays at gamma_perp and <b> at gamma_v,
    the amplitude damping constants of the Heisenberg-Langevin equations,
    while the oscillator relaxes to occupation n_bar.
    """
    return 2.0 * mol.gamma_perp, 2.0 * mol.gamma_v * (1.0 + n_bar), 2.0 * mol.gamma_v * n_bar


def build_generator(mol, drive, n_bar, fock_cutoff):
    ops = operators(fock_cutoff)
    sig, b = ops.sigma, ops.b
    bd = b.conj().T.tocsr()
    ns = ops.num_sigma
    H0 = mol.omega0 * ns + mol.omega_v * ops.num_b + mol.g * (ns @ (b + bd))
    V = (sig + sig.conj().T).tocsr()
    r_sig, r_down, r_up = collapse_rates(mol, n_bar)
    L0 = _commutator_super(H0.tocsr())
    L0 = L0 + r_sig * _dissipator_super(sig) + r_down * _dissipator_super(b)
    if r_up > 0:
        L0 = L0 + r_up * _dissipator_super(bd)
    L1 = _commutator_super(V)
    amps, freqs = [], []
    for a, w in ((drive.rabi_vis, drive.omega_vis), (drive.rabi_ir, drive.omega_ir)):
        if a != 0.0:
            amps.append(a)
            freqs.append(w)
    L0 = sps.csr_matrix(L0)
    L0.eliminate_zeros()
    L1 = sps.csr_matrix(L1)
    L1.eliminate_zeros()
    return ops, Generator(L0=L0, L1=L1, amplitudes=np.array(amps), frequencies=np.array(freqs))


def expectation_functional(A):
    """Row vector ``w`` with ``w @ vec(rho) = Tr(A rho)`` for row-major vec."""
    A = sps.csr_matrix(A)
    return np.asarray(A.T.todense()).ravel()


def thermal_oscillator(n_bar, fock_cutoff):
    n = np.arange(fock_cutoff + 1)
    if n_bar == 0:
        p = (n == 0).astype(float)
    else:
        p = (n_bar / (1.0 + n_bar)) ** n
    return p / p.sum()


def initial_state(kind, n_bar, fock_cutoff):
    """Product state of a TLS level and a vibrational state, vectorised."""
    if kind == "thermal":
        tls, vib = np.diag([1.0, 0.0]), np.diag(thermal_oscillator(n_bar, fock_cutoff))
    elif kind == "ground":
        tls, vib = np.diag([1.0, 0.0]), np.diag(thermal_oscillator(0.0, fock_cutoff))
    elif kind == "excited":
        tls, vib = np.diag([0.0, 1.0]), np.diag(thermal_oscillator(0.0, fock_cutoff))
    else:
        raise ValueError(f"unknown initial state {kind!r}")
    return np.kron(tls, vib).astype(complex).ravel()
