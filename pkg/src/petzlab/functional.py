"""Entropies, relative entropy, fidelity and trace distance (natural logarithms)."""

from dataclasses import dataclass
import math

import numpy as np

from .matfun import complex_power_on_support, eigh, schatten_norm
from .qstate import as_matrix

KERNEL_TOL = 1e-10


@dataclass(frozen=True)
class RelativeEntropy:
    """Value of D(rho||sigma); ``value`` is ``inf`` when support(rho) leaks out of support(sigma)."""

    value: float
    kernel_mass: float = 0.0

    @property
    def infinite(self):
        return math.isinf(self.value)

    def __float__(self):
        return self.value


def von_neumann_entropy(rho):
    dec = eigh(as_matrix(rho))
    w = dec.eigenvalues[dec.support_mask]
    return float(max(-np.sum(w * np.log(w)), 0.0))


def relative_entropy_full(rho, sigma, kernel_tol=KERNEL_TOL):
    """D(rho||sigma) with the kernel-violation mass reported."""
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    dr = eigh(rho)
    ds = eigh(sigma)
    vs = ds.eigenvectors[:, ds.support_mask]
    ls = ds.eigenvalues[ds.support_mask]
    # mass of rho outside the support of sigma
    inside = np.real(np.trace(vs.conj().T @ rho @ vs))
    leak = float(np.real(np.trace(rho)) - inside)
    if leak > kernel_tol:
        return RelativeEntropy(math.inf, leak)
    wr = dr.eigenvalues[dr.support_mask]
    ent = float(np.sum(wr * np.log(wr)))
    # tr(rho log sigma) computed in sigma's eigenbasis
    cross = float(np.real(np.sum(np.diag(vs.conj().T @ rho @ vs) * np.log(ls))))
    return RelativeEntropy(ent - cross, max(leak, 0.0))


def relative_entropy(rho, sigma, kernel_tol=KERNEL_TOL):
    return relative_entropy_full(rho, sigma, kernel_tol).value


def fidelity(rho, sigma):
    """F = ||sqrt(rho) sqrt(sigma)||_1 ** 2."""
    a = complex_power_on_support(as_matrix(rho), 0.5)
    b = complex_power_on_support(as_matrix(sigma), 0.5)
    return schatten_norm(a @ b, 1) ** 2


def neg_log_fidelity(rho, sigma):
    f = fidelity(rho, sigma)
    return math.inf if f <= 0.0 else -math.log(f)


def trace_distance(rho, sigma):
    """Trace norm ||rho - sigma||_1 (no factor 1/2)."""
    return schatten_norm(as_matrix(rho) - as_matrix(sigma), 1)
