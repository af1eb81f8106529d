"""Spectral kernel: Hermitian eigendecomposition and support-restricted matrix functions."""

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NotPositiveError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    support_mask: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    @property
    def rank(self):
        return int(self.support_mask.sum())


def support_threshold(eigenvalues, dim=None):
    """Default kernel cutoff: ``dim * eps * max(lambda_max, 1)``."""
    eigenvalues = np.asarray(eigenvalues)
    dim = eigenvalues.size if dim is None else dim
    top = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    return dim * np.finfo(float).eps * max(top, 1.0)


def check_hermitian(op, tol=HERMITIAN_TOL):
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {op.shape}")
    scale = max(float(np.max(np.abs(op))), 1.0) if op.size else 1.0
    asym = float(np.max(np.abs(op - op.conj().T))) if op.size else 0.0
    if asym > tol * scale:
        raise NotHermitianError(f"operator is not Hermitian (max asymmetry {asym:.3e})")
    return op


def eigh(op, threshold=None, hermitian_tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian operator with a support mask.

    Eigenvalues come back in ascending order. ``threshold`` overrides the
    default support cutoff from :func:`support_threshold`.
    """
    op = check_hermitian(op, hermitian_tol)
    herm = 0.5 * (op + op.conj().T)
    w, v = np.linalg.eigh(herm)
    cut = support_threshold(w) if threshold is None else threshold
    return SpectralDecomposition(w, v, w > cut)


def spectral_apply(op, f, threshold=None):
    """Apply ``f`` to the support eigenvalues of ``op``; the kernel maps to 0."""
    dec = eigh(op, threshold)
    mask = dec.support_mask
    v = dec.eigenvectors[:, mask]
    vals = np.asarray(f(dec.eigenvalues[mask]), dtype=complex)
    return (v * vals) @ v.conj().T


def _psd_decomposition(op, threshold):
    dec = eigh(op, threshold)
    w = dec.eigenvalues
    if w.size and w[0] < -PSD_TOL * max(1.0, float(np.max(np.abs(w)))):
        raise NotPositiveError(f"operator has negative eigenvalue {w[0]:.3e}")
    return dec


def complex_power_on_support(op, z, threshold=None):
    """``sum_i lambda_i**z |v_i><v_i|`` over the support of a PSD operator.

    Negative real parts give the inverse on the support (pseudo-inverse
    convention), so ``P**z @ P**-z`` is the support projector.
    """
    dec = _psd_decomposition(op, threshold)
    mask = dec.support_mask
    v = dec.eigenvectors[:, mask]
    vals = np.exp(complex(z) * np.log(dec.eigenvalues[mask]))
    return (v * vals) @ v.conj().T


def support_projector(op, threshold=None):
    dec = _psd_decomposition(op, threshold)
    v = dec.eigenvectors[:, dec.support_mask]
    return v @ v.conj().T


def schatten_norm(m, p):
    s = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    if p == 1:
        return float(np.sum(s))
    if p == 2:
        return float(np.sqrt(np.sum(s**2)))
    if p in (np.inf, "inf"):
        return float(s[0]) if s.size else 0.0
    raise ValueError(f"unsupported Schatten index {p!r}; use 1, 2 or inf")
