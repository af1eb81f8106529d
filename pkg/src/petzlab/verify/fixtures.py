"""Channels and input pairs that satisfy the cloning/broadcasting hypotheses exactly."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .. import channel as chm
from ..errors import HypothesisViolation
from ..qstate import (
    DensityOperator,
    as_generator,
    complex_gaussian,
    ginibre_random_density,
    haar_random_unitary,
    partial_trace_matrix,
    tensor_power,
)

FAMILIES = ("constant", "measure_prepare", "symmetrized", "clone_exact", "classical_diagonal")
CLONING_FAMILIES = ("constant", "measure_prepare", "clone_exact", "classical_diagonal")
BUILD_TOL = 1e-10


@dataclass(frozen=True)
class FixtureSpec:
    family: str
    d: int = 2
    n: int = 2
    k_copies: int = 1
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown fixture family {self.family!r}; choose from {FAMILIES}")
        if self.n < 1 or self.k_copies < 1 or self.d < 2:
            raise ValueError("need d >= 2, n >= 1, k_copies >= 1")


@dataclass(eq=False)
class Fixture:
    """Input states, the channel acting on ``k_copies`` of them, and cached outputs."""

    spec: FixtureSpec
    sigma1: DensityOperator
    sigma2: DensityOperator
    channel: chm.QuantumChannel

    @property
    def d(self):
        return self.spec.d

    @property
    def n(self):
        return len(self.channel.out_dims)

    @property
    def k_copies(self):
        return self.spec.k_copies

    @cached_property
    def inputs(self):
        k = self.k_copies
        return tensor_power(self.sigma1, k).matrix, tensor_power(self.sigma2, k).matrix

    @cached_property
    def outputs(self):
        return tuple(self.channel(x) for x in self.inputs)

    def output_marginal(self, which, site):
        return partial_trace_matrix(self.outputs[which], self.channel.out_dims, [site])[0]

    @property
    def sigma1_tilde(self):
        return self.output_marginal(0, 0)

    @property
    def sigma2_tilde(self):
        return self.output_marginal(1, 0)

    def marginal_defect(self, which):
        ref = self.output_marginal(which, 0)
        return max(
            (float(np.max(np.abs(self.output_marginal(which, j) - ref))) for j in range(1, self.n)),
            default=0.0,
        )

    def product_defect(self):
        s2t = self.sigma2_tilde
        prod_state = s2t
        for _ in range(self.n - 1):
            prod_state = np.kron(prod_state, s2t)
        return float(np.max(np.abs(self.outputs[1] - prod_state)))

    def clone_defects(self):
        return {
            "sigma1_marginal_defect": self.marginal_defect(0),
            "sigma2_product_defect": self.product_defect(),
        }

    def broadcast_defects(self):
        return {
            "sigma1_marginal_defect": self.marginal_defect(0),
            "sigma2_marginal_defect": self.marginal_defect(1),
        }

    def require_clone(self, tol):
        defects = self.clone_defects()
        if max(defects.values()) > tol:
            raise HypothesisViolation(
                f"fixture does not broadcast sigma1 and clone sigma2 (tolerance {tol:g})", defects
            )
        return defects

    def require_broadcast(self, tol):
        defects = self.broadcast_defects()
        if max(defects.values()) > tol:
            raise HypothesisViolation(
                f"fixture outputs do not have identical marginals (tolerance {tol:g})", defects
            )
        return defects

    def with_sigma2(self, sigma2):
        return Fixture(self.spec, self.sigma1, sigma2, self.channel)


def _state(m, d):
    return DensityOperator(m, (d,))


def _clone_preps(q, nus, n, rng, max_halvings=60):
    """States omega_i with all marginals mu_i and sum_i q_i omega_i = tau^(x)n.

    ``mu_i = (1-s) tau + s nu_i`` with ``tau = sum_i q_i nu_i``; the
    correction ``tau^(x)n - sum_j q_j mu_j^(x)n`` has vanishing single-site
    marginals and is O(s^2), so a small enough ``s`` keeps every omega_i PSD.
    """
    tau = sum(qi * nu for qi, nu in zip(q, nus))
    s = 0.5
    for _ in range(max_halvings):
        mus = [(1 - s) * tau + s * nu for nu in nus]
        powers = [_kron_power(mu, n) for mu in mus]
        corr = _kron_power(tau, n) - sum(qi * p for qi, p in zip(q, powers))
        omegas = [p + corr for p in powers]
        if all(np.linalg.eigvalsh(o)[0] >= 1e-12 for o in omegas):
            return omegas, tau, mus
        s /= 2
    raise RuntimeError("could not build positive prepared states")


def _kron_power(m, n):
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    return out


def _random_diag_state(rng, d):
    p = rng.dirichlet(np.ones(d))
    return np.diag(p).astype(complex)


def build_fixture(spec: FixtureSpec):
    rng = as_generator(spec.seed)
    d, n, k = spec.d, spec.n, spec.k_copies
    din = d**k
    in_dims, out_dims = (d,) * k, (d,) * n

    if spec.family == "constant":
        s1 = ginibre_random_density(d, seed=rng)
        s2 = ginibre_random_density(d, seed=rng)
        tau = ginibre_random_density(d, seed=rng).matrix
        lam = chm.constant_channel(_kron_power(tau, n), in_dims, out_dims)

    elif spec.family in ("measure_prepare", "classical_diagonal"):
        if spec.family == "classical_diagonal":
            s1 = _state(_random_diag_state(rng, d), d)
            s2 = _state(_random_diag_state(rng, d), d)
            u = np.eye(din)
            nus = [_random_diag_state(rng, d) for _ in range(din)]
        else:
            s1 = ginibre_random_density(d, seed=rng)
            s2 = ginibre_random_density(d, seed=rng)
            u = haar_random_unitary(din, seed=rng)
            nus = [ginibre_random_density(d, seed=rng).matrix for _ in range(din)]
        s2k = tensor_power(s2, k).matrix
        q = np.real(np.einsum("ai,ab,bi->i", u.conj(), s2k, u))
        omegas, _, _ = _clone_preps(q, nus, n, rng)
        povm = [np.outer(u[:, i], u[:, i].conj()) for i in range(din)]
        lam = chm.measure_prepare(povm, omegas, in_dims, out_dims)

    elif spec.family == "clone_exact":
        if d < 3:
            raise ValueError("clone_exact needs d >= 3 so that sigma2 can be mixed")
        u = haar_random_unitary(d, seed=rng)
        r = d - 1
        v = u[:, :r]
        p1 = v @ v.conj().T

        def embedded(rank):
            g = complex_gaussian(rng, (r, rank))
            m = v @ (g @ g.conj().T) @ v.conj().T
            return _state(m / np.trace(m).real, d)

        s2 = embedded(r)
        s1 = embedded(r)
        pk = _kron_power(p1, k)
        taus = [ginibre_random_density(d, seed=rng).matrix for _ in range(2)]
        lam = chm.measure_prepare(
            [pk, np.eye(din) - pk], [_kron_power(t, n) for t in taus], in_dims, out_dims
        )

    else:  # symmetrized
        s1 = ginibre_random_density(d, seed=rng)
        s2 = ginibre_random_density(d, seed=rng)
        base = chm.random_channel(din, d**n, n_kraus=spec.params.get("n_kraus", 2), seed=rng)
        lam = chm.symmetrized_output(chm.QuantumChannel(base.superop, in_dims, out_dims))

    fix = Fixture(spec, s1, s2, lam)
    if spec.family in CLONING_FAMILIES:
        fix.require_clone(BUILD_TOL)
    else:
        fix.require_broadcast(BUILD_TOL)
    return fix


def corrupt(fix: Fixture, amount=1e-3):
    """Same fixture with a channel perturbed so that output marginals differ by ~``amount``."""
    out_dims = fix.channel.out_dims
    d = out_dims[0]
    rng = np.random.default_rng(12345)
    bump = ginibre_random_density(d, seed=rng).matrix - np.eye(d) / d
    rest = np.eye(d ** (len(out_dims) - 1)) / d ** (len(out_dims) - 1)
    delta = np.kron(bump, rest)
    bad = chm.add(
        fix.channel,
        chm.constant_channel(delta, fix.channel.in_dims, out_dims),
        weights=[1.0, amount / max(float(np.max(np.abs(bump))), 1e-300)],
    )
    return Fixture(fix.spec, fix.sigma1, fix.sigma2, bad)
