"""Symmetric and antisymmetric subspaces of (C^d)^n, Slater determinants."""

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations
from math import comb, factorial

import numpy as np

from .errors import CapExceededError, RejectedInput
from .qstate import DensityOperator

MAX_TOTAL_DIM = 4096


def check_cap(d, n, cap=MAX_TOTAL_DIM):
    if d**n > cap:
        raise CapExceededError(f"d**n = {d}**{n} = {d**n} exceeds the size cap {cap}")


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Isometry (d**n x r) whose columns span a subspace of n qudits."""

    d: int
    n: int
    isometry: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        v = np.asarray(self.isometry, dtype=complex)
        if v.ndim != 2 or v.shape[0] != self.d**self.n:
            raise ValueError(f"isometry shape {v.shape} does not fit d={self.d}, n={self.n}")
        gram_err = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) if v.shape[1] else 0.0
        if gram_err > 1e-10:
            raise RejectedInput(f"columns are not orthonormal (defect {gram_err:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "isometry", v)

    @property
    def r(self):
        return self.isometry.shape[1]

    @property
    def dims(self):
        return (self.d,) * self.n

    def projector(self):
        v = self.isometry
        return v @ v.conj().T


def custom_subspace(d, n, vectors):
    """Orthonormalize ``vectors`` (columns) into a SubspaceBasis."""
    check_cap(d, n)
    q, _ = np.linalg.qr(np.asarray(vectors, dtype=complex))
    return SubspaceBasis(d, n, q, "custom")


def _index(word, d):
    i = 0
    for s in word:
        i = i * d + s
    return i


def symmetric_subspace_basis(d, n):
    """Occupation-number basis of the symmetric subspace, multisets in lexicographic order."""
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    check_cap(d, n)
    cols = []
    for ms in combinations_with_replacement(range(d), n):
        words = set(permutations(ms))
        col = np.zeros(d**n, dtype=complex)
        for w in words:
            col[_index(w, d)] = 1.0
        cols.append(col / np.sqrt(len(words)))
    basis = SubspaceBasis(d, n, np.stack(cols, axis=1), "symmetric")
    assert basis.r == comb(d + n - 1, n)
    return basis


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def wedge(vectors):
    """Normalized alternating tensor of the columns of ``vectors`` (d x n)."""
    vs = np.asarray(vectors, dtype=complex)
    d, n = vs.shape
    out = np.zeros(d**n, dtype=complex)
    for p in permutations(range(n)):
        term = np.ones(1, dtype=complex)
        for j in p:
            term = np.kron(term, vs[:, j])
        out += _perm_sign(p) * term
    return out / np.sqrt(factorial(n))


def antisymmetric_subspace_basis(d, n):
    if n < 1:
        raise ValueError("need n >= 1")
    if n > d:
        raise ValueError(f"antisymmetric subspace of {n} qudits with d={d} is zero")
    check_cap(d, n)
    eye = np.eye(d)
    cols = [wedge(eye[:, list(sub)]) for sub in combinations(range(d), n)]
    basis = SubspaceBasis(d, n, np.stack(cols, axis=1), "antisymmetric")
    assert basis.r == comb(d, n)
    return basis


def maximally_mixed(basis):
    if basis.r < 1:
        raise ValueError("empty subspace")
    return DensityOperator(basis.projector() / basis.r, basis.dims)


def symmetric_dimension(d, n):
    return comb(d + n - 1, n)


def _check_orthonormal(vectors, tol=1e-10):
    vs = np.asarray(vectors, dtype=complex)
    if vs.ndim != 2:
        raise ValueError("vectors must be a d x n array of columns")
    d, n = vs.shape
    if n > d:
        raise ValueError(f"{n} orthonormal vectors do not fit in dimension {d}")
    overlap = float(np.max(np.abs(vs.conj().T @ vs - np.eye(n))))
    if overlap > tol:
        raise RejectedInput(f"vectors are not orthonormal (max overlap defect {overlap:.3e})")
    return vs


def slater_determinant(vectors):
    """Rank-one state of the wedge product of orthonormal columns of ``vectors``."""
    vs = _check_orthonormal(vectors)
    d, n = vs.shape
    check_cap(d, n)
    psi = wedge(vs)
    return DensityOperator(np.outer(psi, psi.conj()), (d,) * n)


def slater_marginal_oracle(vectors, k):
    """Uniform mixture of the Slater states of all k-subsets of the orbitals.

    Built combinatorially; it never calls a partial trace.
    """
    vs = _check_orthonormal(vectors)
    d, n = vs.shape
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    subsets = list(combinations(range(n), k))
    acc = np.zeros((d**k, d**k), dtype=complex)
    for sub in subsets:
        psi = wedge(vs[:, list(sub)])
        acc += np.outer(psi, psi.conj())
    return DensityOperator(acc / len(subsets), (d,) * k)
