"""Seeded ensembles of theorem checks."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .. import channel as chm
from ..qstate import (
    as_generator,
    complex_gaussian,
    ginibre_random_density,
    random_orthonormal_vectors,
)
from ..subspace import antisymmetric_subspace_basis, slater_determinant
from . import checks
from .fixtures import FixtureSpec, build_fixture

THEOREMS = ("thm3", "thm4", "thm13", "thm5", "thm6", "thm7", "thm8", "thm14", "duality", "pinsker")


def split_seeds(seed, trials):
    """Independent 32-bit replay seeds, one per trial."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [int(c.generate_state(1)[0]) for c in children]


def _fixture(params, seed, default_family, n_default=2, k_copies=1):
    spec = FixtureSpec(
        family=params.get("family", default_family),
        d=int(params.get("d", 3 if params.get("family") == "clone_exact" else 2)),
        n=int(params.get("n", n_default)),
        k_copies=int(params.get("k_copies", k_copies)),
        seed=seed,
    )
    return build_fixture(spec)


def _nested_pair(rng, d):
    sigma = ginibre_random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng).matrix
    w, v = np.linalg.eigh(sigma)
    v = v[:, w > 1e-12]
    r = int(rng.integers(1, v.shape[1] + 1))
    g = complex_gaussian(rng, (v.shape[1], r))
    rho = v @ (g @ g.conj().T) @ v.conj().T
    return rho / np.trace(rho).real, sigma


def _antisym_state(d, n, kind, rng):
    if kind == "slater":
        return slater_determinant(random_orthonormal_vectors(d, n, rng)).matrix
    basis = antisymmetric_subspace_basis(d, n)
    g = complex_gaussian(rng, (basis.r, basis.r))
    m = basis.isometry @ (g @ g.conj().T) @ basis.isometry.conj().T
    return m / np.trace(m).real


def run_check(theorem_id, params, seed):
    """Run one check of ``theorem_id`` with fixture randomness drawn from ``seed``."""
    p = dict(params or {})
    if theorem_id == "thm3":
        return checks.check_clone_broadcast(_fixture(p, seed, "classical_diagonal"))
    if theorem_id == "thm4":
        fix = _fixture(p, seed, "classical_diagonal")
        return checks.check_clone_broadcast_recovery(fix, m=int(p.get("m", 1)))
    if theorem_id == "thm13":
        fix = _fixture(p, seed, "classical_diagonal", k_copies=2)
        return checks.check_clone_broadcast_recovery(fix, m=int(p.get("m", 1)))
    if theorem_id == "thm5":
        return checks.check_uqcm_recovery(
            int(p.get("d", 2)), int(p.get("n", 2)), int(p.get("k", 1)), p.get("omega", "random"), seed
        )
    if theorem_id == "thm6":
        return checks.check_reverse_recovery(
            int(p.get("d", 2)), int(p.get("n", 3)), int(p.get("k", 2)), p.get("omega", "random"), seed
        )
    if theorem_id == "thm7":
        d, n, k = int(p.get("d", 3)), int(p.get("n", 2)), int(p.get("k", 1))
        rng = as_generator(seed)
        omega = _antisym_state(d, n, p.get("omega", "slater"), rng)
        return checks.check_subspace_recovery(
            antisymmetric_subspace_basis(d, n), antisymmetric_subspace_basis(d, k), omega
        )
    if theorem_id == "thm8":
        rng = as_generator(seed)
        d_in = int(p.get("d_in", rng.integers(2, 5)))
        d_out = int(p.get("d_out", rng.integers(2, 5)))
        rho = ginibre_random_density(d_in, seed=rng)
        sigma = ginibre_random_density(d_in, seed=rng)
        N = chm.random_channel(d_in, d_out, n_kraus=int(p.get("n_kraus", 2)), seed=rng)
        return checks.check_petz_bound(rho, sigma, N)
    if theorem_id == "thm14":
        fix = _fixture(p, seed, "symmetrized")
        return checks.check_broadcast_difference(fix, p.get("variant", "R"))
    if theorem_id == "duality":
        return checks.check_duality(int(p.get("d", 2)), int(p.get("n", 2)), int(p.get("k", 1)), seed)
    if theorem_id == "pinsker":
        rng = as_generator(seed)
        d = int(p.get("d", rng.integers(2, 5)))
        rho, sigma = _nested_pair(rng, d)
        return checks.check_functional(rho, sigma)
    raise ValueError(f"unknown theorem id {theorem_id!r}; choose from {THEOREMS}")


@dataclass
class EnsembleResult:
    theorem_id: str
    params: dict
    seed: int
    reports: list
    trial_seeds: list

    @property
    def failures(self):
        return sum(not r.all_passed for r in self.reports)

    @property
    def min_slack(self):
        return min(r.min_slack for r in self.reports)

    @property
    def mean_slack(self):
        vals = [r.slack for r in self.reports if math.isfinite(r.slack)]
        return float(np.mean(vals)) if vals else math.inf

    @property
    def worst_seed(self):
        i = int(np.argmin([r.min_slack for r in self.reports]))
        return self.trial_seeds[i]

    @property
    def tolerance(self):
        return max(r.tolerance for r in self.reports)

    def summary(self):
        return {
            "theorem": self.theorem_id,
            "params": dict(self.params),
            "trials": len(self.reports),
            "seed": self.seed,
            "tolerance": self.tolerance,
            "min_slack": self.min_slack,
            "mean_slack": self.mean_slack,
            "failures": self.failures,
            "worst_seed": self.worst_seed,
        }


def _run_star(args):
    return run_check(*args)


def run_ensemble(theorem_id, params=None, trials=1, seed=0, workers=1, seeds=None):
    """Run ``trials`` independent checks; reports come back in trial order.

    Trial seeds are spawned from ``seed``; pass ``seeds`` to replay specific
    trials (``run_check(theorem_id, params, worst_seed)`` reproduces the
    worst one).
    """
    if theorem_id not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem_id!r}; choose from {THEOREMS}")
    if seeds is None:
        if trials < 1:
            raise ValueError("trials must be at least 1")
        seeds = split_seeds(seed, trials)
    params = dict(params or {})
    jobs = [(theorem_id, params, s) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reports = list(pool.map(_run_star, jobs))
    else:
        reports = [run_check(*j) for j in jobs]
    return EnsembleResult(theorem_id, params, seed, reports, seeds)
