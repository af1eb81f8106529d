"""Rotated and beta-averaged Petz recovery maps, recovery differences, improved cloners."""

from dataclasses import dataclass
from functools import lru_cache
import numpy as np

from . import channel as ch_mod
from .channel import QuantumChannel, adjoint, sandwich_superop
from .matfun import eigh, schatten_norm, spectral_apply
from .qstate import as_matrix, partial_trace_matrix


def beta_density(t):
    """beta(t) = (pi/2) / (1 + cosh(pi t))."""
    t = np.asarray(t, dtype=float)
    return (np.pi / 2.0) / (1.0 + np.cosh(np.pi * t))


def beta_mass(T):
    """Probability that |t| <= T under beta."""
    return float(np.tanh(np.pi * T / 2.0))


@dataclass(frozen=True, eq=False)
class BetaQuadrature:
    nodes: np.ndarray
    weights: np.ndarray
    raw_weight_sum: float = 1.0

    def __len__(self):
        return self.nodes.size

    def __iter__(self):
        return iter(zip(self.nodes, self.weights))


@lru_cache(maxsize=32)
def beta_nodes(panels=16, order=8, T=8.0):
    """Composite Gauss-Legendre rule for integrals against beta(t) dt on [-T, T].

    Weights are ``panel_weight * beta(t_j)`` renormalized to sum to one; the
    pre-normalization sum is kept as ``raw_weight_sum``.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-T, T, panels + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        t = 0.5 * (hi + lo) + half * x
        nodes.append(t)
        weights.append(half * w * beta_density(t))
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    raw = float(weights.sum())
    nodes.setflags(write=False)
    weights = weights / raw
    weights.setflags(write=False)
    return BetaQuadrature(nodes, weights, raw)


def single_node(t=0.0):
    return BetaQuadrature(np.array([float(t)]), np.array([1.0]), 1.0)


class _Powers:
    """Cached spectral data of a PSD operator for repeated complex powers on its support."""

    def __init__(self, op):
        dec = eigh(as_matrix(op))
        if dec.eigenvalues.size and dec.eigenvalues[0] < -1e-10:
            raise ValueError(f"operator has negative eigenvalue {dec.eigenvalues[0]:.3e}")
        self.v = dec.eigenvectors[:, dec.support_mask]
        self.log = np.log(dec.eigenvalues[dec.support_mask])

    def power(self, z):
        return (self.v * np.exp(z * self.log)) @ self.v.conj().T

    def projector(self):
        return self.v @ self.v.conj().T


def rotated_petz_family(N, sigma, ts):
    """Rotated Petz maps R^t_{N,sigma} for every t in ``ts``, sharing eigendecompositions."""
    sigma = as_matrix(sigma)
    ps = _Powers(sigma)
    pn = _Powers(N(sigma))
    adj = adjoint(N).superop
    out = []
    for t in ts:
        a = (1.0 + 1j * float(t)) / 2.0
        left = ps.power(a)
        right = pn.power(-a)
        s = sandwich_superop(left, left.conj().T) @ adj @ sandwich_superop(right, right.conj().T)
        out.append(QuantumChannel(s, N.out_dims, N.in_dims))
    return out


def rotated_petz(N, sigma, t=0.0):
    """sigma^{(1+it)/2} N^dag[N(sigma)^{-(1+it)/2} (.) N(sigma)^{-(1-it)/2}] sigma^{(1-it)/2}."""
    return rotated_petz_family(N, sigma, [t])[0]


def averaged_petz(N, sigma, quad=None):
    """Beta-weighted average of rotated Petz maps over the quadrature nodes."""
    quad = beta_nodes() if quad is None else quad
    maps = rotated_petz_family(N, sigma, quad.nodes)
    s = sum(w * m.superop for w, m in zip(quad.weights, maps))
    return QuantumChannel(s, N.out_dims, N.in_dims)


def _petz_pt_superops(X, dims, traced, ts):
    dA, dB = dims
    X = as_matrix(X)
    keep = 1 if traced == "A" else 0
    kept_dim = dims[keep]
    px = _Powers(X)
    pm = _Powers(partial_trace_matrix(X, dims, [keep])[0])
    if traced == "A":
        embed = ch_mod.tensor(
            ch_mod.append_identity_channel((), (dA,)), ch_mod.identity_channel((dB,))
        ).superop
    elif traced == "B":
        embed = ch_mod.append_identity_channel((dA,), (dB,)).superop
    else:
        raise ValueError("traced must be 'A' or 'B'")
    out = []
    for t in ts:
        a = (1.0 + 1j * float(t)) / 2.0
        xa = px.power(a)
        m = pm.power(-a)
        s = sandwich_superop(xa, xa.conj().T) @ embed @ sandwich_superop(m, m.conj().T)
        out.append(QuantumChannel(s, (kept_dim,), tuple(dims)))
    return out


def rotated_petz_partial_trace(X, traced, t=0.0, dims=None):
    """Rotated Petz map of a bipartite state X for the partial trace over ``traced``.

    ``traced='A'`` gives X^{a}(I_A (x) X_B^{-a} (.) X_B^{-a*})X^{a*} acting on
    B operators; ``traced='B'`` is the mirror image acting on A operators,
    with ``a = (1 + i t)/2``.
    """
    dims = _bipartite_dims(X, dims)
    return _petz_pt_superops(X, dims, traced, [t])[0]


def _bipartite_dims(X, dims):
    if dims is None:
        dims = getattr(X, "dims", None)
    if dims is None:
        d = int(round(np.sqrt(as_matrix(X).shape[0])))
        dims = (d, d)
    if len(dims) != 2:
        raise ValueError(f"expected a bipartite state, got factors {dims}")
    return tuple(dims)


def recovery_difference_R(sigma1_tilde, rho2_out, quad=None, dims=None):
    """(1/8) int ||R^t_{B,rho2}(s1) - R^t_{A,rho2}(s1)||_1^2 dbeta(t)."""
    quad = beta_nodes() if quad is None else quad
    dims = _bipartite_dims(rho2_out, dims)
    s1 = as_matrix(sigma1_tilde)
    rb = _petz_pt_superops(rho2_out, dims, "B", quad.nodes)
    ra = _petz_pt_superops(rho2_out, dims, "A", quad.nodes)
    total = 0.0
    for w, mb, ma in zip(quad.weights, rb, ra):
        total += w * schatten_norm(mb(s1) - ma(s1), 1) ** 2
    return total / 8.0


def _compressed_exp(exponent, support_vectors):
    """exp of ``exponent`` compressed to span(support_vectors), zero elsewhere."""
    v = support_vectors
    m = v.conj().T @ exponent @ v
    m = 0.5 * (m + m.conj().T)
    w, u = np.linalg.eigh(m)
    vu = v @ u
    return (vu * np.exp(w)) @ vu.conj().T


def recovery_difference_CL(sigma1_tilde, sigma2_tilde, rho2_out, dims=None):
    """Strengthened-monotonicity remainder averaged over the two output factors.

    For each factor X in {A, B}:
    ``||sqrt(rho2) - exp(((log rho2 - log s2_X + log s1_X)/2) P)||_2^2`` where P
    projects on the support of rho2; the exponent is compressed to that
    support before exponentiating.
    """
    dA, dB = _bipartite_dims(rho2_out, dims)
    rho2 = as_matrix(rho2_out)
    s1, s2 = as_matrix(sigma1_tilde), as_matrix(sigma2_tilde)
    dec = eigh(rho2)
    v = dec.eigenvectors[:, dec.support_mask]
    log_rho2 = spectral_apply(rho2, np.log)
    sqrt_rho2 = spectral_apply(rho2, np.sqrt)
    diff = spectral_apply(s1, np.log) - spectral_apply(s2, np.log)
    total = 0.0
    for lifted in (np.kron(diff, np.eye(dB)), np.kron(np.eye(dA), diff)):
        e = _compressed_exp(0.5 * (log_rho2 + lifted), v)
        total += 0.5 * schatten_norm(sqrt_rho2 - e, 2) ** 2
    return total


def local_recovery(Lam, sigma2, quad=None, m=1):
    """Averaged Petz map of ``tr_{m+1..n} o Lam`` at ``sigma2``; maps m output factors back."""
    N = ch_mod.compose(ch_mod.partial_trace_channel(Lam.out_dims, range(m)), Lam)
    return averaged_petz(N, sigma2, quad)


def improved_cloning_channel(Lam, sigma2, quad=None):
    """(R1)^{(x) n} o Lam, R1 being the single-factor local recovery map at sigma2."""
    n = len(Lam.out_dims)
    if Lam.out_dims[0] != Lam.in_dim:
        raise ValueError(
            f"output factor dimension {Lam.out_dims[0]} does not match input dimension {Lam.in_dim}"
        )
    r1 = local_recovery(Lam, sigma2, quad, m=1)
    return ch_mod.compose(ch_mod.tensor_power(r1, n), Lam)
