"""Quantum channels stored as dense superoperators.

Vectorization stacks columns: ``vec(X) = X.ravel(order="F")``, so the map
``X -> A @ X @ B`` has superoperator ``kron(B.T, A)``.
"""

from dataclasses import dataclass
from itertools import permutations
from math import prod

import numpy as np

from .errors import CapExceededError, RejectedInput
from .qstate import as_generator, as_matrix, complex_gaussian, permute_factors
from .subspace import SubspaceBasis, symmetric_dimension, symmetric_subspace_basis

# in_dim * out_dim; keeps a superoperator below ~1e6 complex entries
MAX_CHANNEL_DIM_PRODUCT = 1000
CP_TOL = 1e-9


def vec(x):
    return np.asarray(x).ravel(order="F")


def unvec(v, d):
    return np.asarray(v).reshape((d, d), order="F")


def sandwich_superop(a, b):
    """Superoperator of ``X -> a @ X @ b``."""
    return np.kron(np.asarray(b).T, np.asarray(a))


def _check_size(din, dout):
    if din * dout > MAX_CHANNEL_DIM_PRODUCT:
        raise CapExceededError(
            f"channel of size {din} -> {dout} exceeds the dense superoperator cap "
            f"(in_dim * out_dim <= {MAX_CHANNEL_DIM_PRODUCT})"
        )


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Linear map between multipartite operator spaces.

    Complete positivity is expected but only checked on request
    (:meth:`cp_gap`); trace preservation may hold only on a subspace.
    """

    superop: np.ndarray
    in_dims: tuple
    out_dims: tuple

    def __post_init__(self):
        s = np.asarray(self.superop, dtype=complex)
        in_dims = tuple(int(x) for x in self.in_dims)
        out_dims = tuple(int(x) for x in self.out_dims)
        din, dout = prod(in_dims), prod(out_dims)
        if s.shape != (dout**2, din**2):
            raise ValueError(f"superoperator shape {s.shape} does not match {in_dims} -> {out_dims}")
        s.setflags(write=False)
        object.__setattr__(self, "superop", s)
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)

    @property
    def in_dim(self):
        return prod(self.in_dims)

    @property
    def out_dim(self):
        return prod(self.out_dims)

    def __call__(self, rho):
        return apply(self, rho)

    def __matmul__(self, other):
        return compose(self, other)

    def choi(self):
        return choi_matrix(self)

    def cp_gap(self):
        """Smallest eigenvalue of the Choi matrix (negative means not CP)."""
        return float(np.linalg.eigvalsh(self.choi())[0])


def from_superop(superop, in_dims, out_dims):
    return QuantumChannel(superop, tuple(in_dims), tuple(out_dims))


def from_function(f, in_dims, out_dims):
    """Tabulate a linear map ``f`` on matrix units."""
    din, dout = prod(in_dims), prod(out_dims)
    _check_size(din, dout)
    s = np.empty((dout**2, din**2), dtype=complex)
    e = np.zeros((din, din), dtype=complex)
    for j in range(din):
        for i in range(din):
            e[i, j] = 1.0
            s[:, i + j * din] = vec(f(e.copy()))
            e[i, j] = 0.0
    return QuantumChannel(s, in_dims, out_dims)


def from_kraus(kraus, in_dims, out_dims):
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    _check_size(prod(in_dims), prod(out_dims))
    s = sum(np.kron(k.conj(), k) for k in kraus)
    return QuantumChannel(s, in_dims, out_dims)


def identity_channel(dims):
    d = prod(dims)
    return QuantumChannel(np.eye(d * d, dtype=complex), dims, dims)


def unitary_channel(u, dims=None):
    u = np.asarray(u, dtype=complex)
    dims = (u.shape[0],) if dims is None else dims
    return from_kraus([u], dims, dims)


def apply(ch, rho):
    """Apply ``ch`` to an operator; returns a plain matrix on ``ch.out_dims``."""
    m = as_matrix(rho)
    if m.shape != (ch.in_dim, ch.in_dim):
        raise ValueError(f"operator shape {m.shape} does not match channel input {ch.in_dims}")
    return unvec(ch.superop @ vec(m), ch.out_dim)


def kraus_apply(kraus, rho):
    m = as_matrix(rho)
    return sum(k @ m @ k.conj().T for k in kraus)


def choi_matrix(ch):
    """``sum_ij E_ij (x) ch(E_ij)`` on input (x) output."""
    din, dout = ch.in_dim, ch.out_dim
    t = ch.superop.reshape(dout, dout, din, din)  # [b, a, j, i] -> ch(E_ij)[a, b]
    return t.transpose(3, 1, 2, 0).reshape(din * dout, din * dout)


def adjoint(ch):
    """Hilbert-Schmidt adjoint: <adjoint(ch)(X), Y> = <X, ch(Y)>."""
    return QuantumChannel(ch.superop.conj().T, ch.out_dims, ch.in_dims)


def compose(after, before):
    """``after o before``."""
    if before.out_dim != after.in_dim:
        raise ValueError(f"cannot compose: {before.out_dims} feeds {after.in_dims}")
    _check_size(before.in_dim, after.out_dim)
    return QuantumChannel(after.superop @ before.superop, before.in_dims, after.out_dims)


def scale(ch, c):
    return QuantumChannel(c * ch.superop, ch.in_dims, ch.out_dims)


def add(*channels, weights=None):
    weights = [1.0] * len(channels) if weights is None else weights
    first = channels[0]
    s = sum(w * c.superop for w, c in zip(weights, channels))
    return QuantumChannel(s, first.in_dims, first.out_dims)


def tensor(ch1, ch2):
    """Parallel composition; factor lists are concatenated."""
    _check_size(ch1.in_dim * ch2.in_dim, ch1.out_dim * ch2.out_dim)
    i1, o1, i2, o2 = ch1.in_dim, ch1.out_dim, ch2.in_dim, ch2.out_dim
    s1 = ch1.superop.reshape(o1, o1, i1, i1)
    s2 = ch2.superop.reshape(o2, o2, i2, i2)
    s = np.einsum("BAJI,bajl->BbAaJjIl", s1, s2).reshape((o1 * o2) ** 2, (i1 * i2) ** 2)
    return QuantumChannel(s, ch1.in_dims + ch2.in_dims, ch1.out_dims + ch2.out_dims)


def tensor_power(ch, n):
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_size(ch.in_dim**n, ch.out_dim**n)
    out = ch
    for _ in range(n - 1):
        out = tensor(out, ch)
    return out


def partial_trace_channel(dims, keep):
    """Channel tracing out every factor not in ``keep``."""
    from .qstate import partial_trace_matrix

    dims = tuple(dims)
    kd = tuple(dims[i] for i in sorted(set(keep)))
    return from_function(lambda x: partial_trace_matrix(x, dims, keep)[0], dims, kd)


def append_identity_channel(dims, extra_dims):
    """``X -> X (x) I`` on the trailing factors ``extra_dims``."""
    m = prod(extra_dims)
    prep = QuantumChannel(vec(np.eye(m, dtype=complex)).reshape(m * m, 1), (), tuple(extra_dims))
    return tensor(identity_channel(dims), prep)


def permutation_unitary(dims, perm):
    """Unitary ``U`` with ``U X U^dag`` equal to ``permute_factors(X, dims, perm)``."""
    d = prod(dims)
    eye = np.eye(d)
    # permute_factors acts on both indices; apply it to the row index only
    t = eye.reshape(tuple(dims) + (d,))
    nf = len(dims)
    t = t.transpose(list(perm) + [nf])
    return t.reshape(d, d)


def constant_channel(tau, in_dims, out_dims=None):
    """``rho -> tr(rho) * tau``."""
    tau = as_matrix(tau)
    out_dims = (tau.shape[0],) if out_dims is None else tuple(out_dims)
    din = prod(in_dims)
    s = np.outer(vec(tau), vec(np.eye(din)))
    return QuantumChannel(s, in_dims, out_dims)


def measure_prepare(povm, preps, in_dims, out_dims, tol=1e-10):
    """``rho -> sum_i tr(E_i rho) tau_i``."""
    povm = [as_matrix(e) for e in povm]
    preps = [as_matrix(t) for t in preps]
    if len(povm) != len(preps):
        raise ValueError("need one prepared state per POVM element")
    din = prod(in_dims)
    total = sum(povm)
    if np.max(np.abs(total - np.eye(din))) > tol:
        raise RejectedInput("POVM elements do not sum to the identity")
    for e in povm:
        if np.max(np.abs(e - e.conj().T)) > tol or np.linalg.eigvalsh(e)[0] < -tol:
            raise RejectedInput("POVM element is not positive semidefinite")
    s = sum(np.outer(vec(t), vec(e.T)) for e, t in zip(povm, preps))
    return QuantumChannel(s, in_dims, out_dims)


def symmetrized_output(ch):
    """Average ``ch`` over all permutations of its output factors."""
    n = len(ch.out_dims)
    if len(set(ch.out_dims)) > 1:
        raise ValueError("output factors must share one dimension")
    perms = list(permutations(range(n)))
    acc = np.zeros_like(ch.superop)
    for p in perms:
        u = permutation_unitary(ch.out_dims, p)
        acc += np.kron(u.conj(), u) @ ch.superop
    return QuantumChannel(acc / len(perms), ch.in_dims, ch.out_dims)


def random_channel(in_dim, out_dim, n_kraus=None, seed=None, return_kraus=False):
    """Random CPTP map from a Gaussian Stinespring isometry."""
    rng = as_generator(seed)
    n_kraus = in_dim * out_dim if n_kraus is None else n_kraus
    if out_dim * n_kraus < in_dim:
        raise ValueError(f"need out_dim * n_kraus >= in_dim for an isometry, got {out_dim} * {n_kraus} < {in_dim}")
    g = complex_gaussian(rng, (out_dim * n_kraus, in_dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    kraus = [q[i * out_dim : (i + 1) * out_dim, :] for i in range(n_kraus)]
    ch = from_kraus(kraus, (in_dim,), (out_dim,))
    return (ch, kraus) if return_kraus else ch


def _sym_projector(d, n):
    return symmetric_subspace_basis(d, n).projector()


def subspace_cloner(x_n: SubspaceBasis, y_k: SubspaceBasis):
    """``(r_Y / r_X) P_X [P_Y (.) P_Y (x) I^(n-k)] P_X``."""
    d, n, k = x_n.d, x_n.n, y_k.n
    if y_k.d != d or k > n:
        raise ValueError("need matching local dimension and k <= n")
    _check_size(d**k, d**n)
    py, px = y_k.projector(), x_n.projector()
    inner = QuantumChannel(sandwich_superop(py, py), y_k.dims, y_k.dims)
    if n > k:
        inner = compose(append_identity_channel(y_k.dims, (d,) * (n - k)), inner)
    outer = QuantumChannel(sandwich_superop(px, px), x_n.dims, x_n.dims)
    return scale(compose(outer, inner), y_k.r / x_n.r)


def subspace_partial_trace(x_n: SubspaceBasis, y_k: SubspaceBasis):
    """``P_Y tr_(n-k)[P_X (.) P_X] P_Y``; traces the last n-k factors."""
    d, n, k = x_n.d, x_n.n, y_k.n
    if y_k.d != d or k > n:
        raise ValueError("need matching local dimension and k <= n")
    _check_size(d**k, d**n)
    py, px = y_k.projector(), x_n.projector()
    first = QuantumChannel(sandwich_superop(px, px), x_n.dims, x_n.dims)
    if n > k:
        first = compose(partial_trace_channel(x_n.dims, range(k)), first)
    last = QuantumChannel(sandwich_superop(py, py), y_k.dims, y_k.dims)
    return compose(last, first)


def uqcm(d, k, n):
    """Universal symmetric k -> n cloner."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    _check_size(d**k, d**n)
    return subspace_cloner(symmetric_subspace_basis(d, n), symmetric_subspace_basis(d, k))


def symmetrized_partial_trace(d, n, k):
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    _check_size(d**k, d**n)
    return subspace_partial_trace(symmetric_subspace_basis(d, n), symmetric_subspace_basis(d, k))


def duality_constant(d, n, k):
    return symmetric_dimension(d, n) / symmetric_dimension(d, k)


@dataclass(frozen=True)
class ChannelDiagnostics:
    cp_gap: float
    tp_defect: float

    def ok(self, cp_tol=CP_TOL, tp_tol=1e-10):
        return self.cp_gap >= -cp_tol and self.tp_defect <= tp_tol


def trace_functional(ch):
    """Matrix ``T`` with ``tr(ch(X)) = sum(T * X)``."""
    t = vec(np.eye(ch.out_dim)) @ ch.superop
    return unvec(t, ch.in_dim)


def channel_diagnostics(ch, support=None):
    """Choi minimum eigenvalue and trace-preservation defect on ``support``.

    The TP defect is ``max |tr ch(|v_i><v_j|) - delta_ij|`` over an orthonormal
    basis of the support (the whole input space when ``support`` is None).
    """
    v = np.eye(ch.in_dim) if support is None else support.isometry
    g = v.conj().T @ trace_functional(ch).T @ v
    defect = float(np.max(np.abs(g - np.eye(g.shape[0]))))
    return ChannelDiagnostics(ch.cp_gap(), defect)
