"""Density operators on multipartite tensor spaces."""

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import NotHermitianError, NotPositiveError, RejectedInput

STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A unit-trace PSD matrix together with its tensor factor dimensions.

    Factors are ordered left to right as in the Kronecker product.
    """

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dims = tuple(int(x) for x in self.dims)
        if any(x < 1 for x in dims):
            raise ValueError(f"factor dimensions must be positive: {dims}")
        if m.shape != (prod(dims), prod(dims)):
            raise ValueError(f"matrix shape {m.shape} does not match factors {dims}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def n_factors(self):
        return len(self.dims)

    def validate(self, tol=STATE_TOL):
        """Raise unless Hermitian, PSD and unit trace within ``tol``."""
        m = self.matrix
        asym = float(np.max(np.abs(m - m.conj().T)))
        if asym > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
            raise NotHermitianError(f"state is not Hermitian (max asymmetry {asym:.3e})")
        w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if w[0] < -tol:
            raise NotPositiveError(f"state has negative eigenvalue {w[0]:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol:
            raise RejectedInput(f"state trace is {tr:.12g}, expected 1")
        return self


def as_matrix(x):
    return np.asarray(x, dtype=complex)


def dims_of(x, default=None):
    if isinstance(x, DensityOperator):
        return x.dims
    if default is not None:
        return tuple(default)
    return (np.asarray(x).shape[0],)


def density(matrix, dims=None, validate=True):
    matrix = as_matrix(matrix)
    rho = DensityOperator(matrix, (matrix.shape[0],) if dims is None else dims)
    return rho.validate() if validate else rho


def pure(vector, dims=None):
    v = np.asarray(vector, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return DensityOperator(np.outer(v, v.conj()), (v.size,) if dims is None else dims)


def basis_state(d, i):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return pure(v)


def maximally_mixed_full(d):
    return DensityOperator(np.eye(d, dtype=complex) / d, (d,))


def tensor_product(*states):
    """Kronecker product of states; factor lists are concatenated."""
    if not states:
        raise ValueError("need at least one state")
    m = as_matrix(states[0])
    dims = list(dims_of(states[0]))
    for s in states[1:]:
        m = np.kron(m, as_matrix(s))
        dims.extend(dims_of(s))
    return DensityOperator(m, tuple(dims))


def tensor_power(state, n):
    return tensor_product(*([state] * n))


def partial_trace_matrix(m, dims, keep):
    """Partial trace of a plain matrix keeping the factors in ``keep`` (original order)."""
    dims = tuple(dims)
    nf = len(dims)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one factor")
    if keep[0] < 0 or keep[-1] >= nf:
        raise ValueError(f"factor indices {keep} out of range for {nf} factors")
    m = np.asarray(m).reshape(dims + dims)
    traced = [i for i in range(nf) if i not in keep]
    # trace from the highest index down so remaining axis numbers stay valid
    for cnt, i in enumerate(sorted(traced, reverse=True)):
        cur = nf - cnt
        m = np.trace(m, axis1=i, axis2=i + cur)
    kd = tuple(dims[i] for i in keep)
    size = prod(kd)
    return m.reshape(size, size), kd


def partial_trace(rho, keep, dims=None):
    """Trace out every factor not listed in ``keep``.

    ``dims`` is only needed when ``rho`` is a bare array.
    """
    m, kd = partial_trace_matrix(as_matrix(rho), dims_of(rho, dims), keep)
    return DensityOperator(m, kd)


def marginal(rho, i, dims=None):
    return partial_trace(rho, [i], dims)


def permute_factors(m, dims, perm):
    """Reorder tensor factors: new factor ``j`` is old factor ``perm[j]``."""
    dims = tuple(dims)
    nf = len(dims)
    t = np.asarray(m).reshape(dims + dims)
    t = t.transpose(list(perm) + [p + nf for p in perm])
    size = prod(dims)
    return t.reshape(size, size), tuple(dims[p] for p in perm)


def as_generator(seed):
    """Normalize ``seed`` (int, None or Generator) to a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_random_vector(d, seed=None):
    rng = as_generator(seed)
    v = complex_gaussian(rng, d)
    return v / np.linalg.norm(v)


def haar_random_pure(d, seed=None):
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return pure(haar_random_vector(d, seed))


def ginibre_random_density(d, rank=None, seed=None):
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    g = complex_gaussian(as_generator(seed), (d, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityOperator(m / np.trace(m).real, (d,))


def haar_random_unitary(d, seed=None):
    rng = as_generator(seed)
    q, r = np.linalg.qr(complex_gaussian(rng, (d, d)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_orthonormal_vectors(d, n, seed=None):
    return haar_random_unitary(d, seed)[:, :n]


def epsilon_mix(sigma1, sigma2, eps):
    """``eps * sigma1 + (1 - eps) * sigma2``; restores ker(sigma2) within ker(sigma1)."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    d1, d2 = dims_of(sigma1), dims_of(sigma2)
    if as_matrix(sigma1).shape != as_matrix(sigma2).shape:
        raise ValueError("states have different shapes")
    m = eps * as_matrix(sigma1) + (1.0 - eps) * as_matrix(sigma2)
    return DensityOperator(m, d2 if isinstance(sigma2, DensityOperator) else d1)
