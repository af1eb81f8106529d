"""Closed-form values reproduced numerically by ``petzlab demo``."""

from math import comb, log

import numpy as np

from .channel import compose, subspace_cloner, subspace_partial_trace, uqcm
from .functional import fidelity, von_neumann_entropy
from .qstate import haar_random_vector, partial_trace_matrix, random_orthonormal_vectors
from .subspace import antisymmetric_subspace_basis, slater_determinant, symmetric_dimension


def werner(d=2, k=1, n=2, seed=0):
    phi = haar_random_vector(d, seed)
    pk, pn = phi, phi
    for _ in range(k - 1):
        pk = np.kron(pk, phi)
    for _ in range(n - 1):
        pn = np.kron(pn, phi)
    f = fidelity(np.outer(pn, pn.conj()), uqcm(d, k, n)(np.outer(pk, pk.conj())))
    bound = symmetric_dimension(d, k) / symmetric_dimension(d, n)
    return f"Werner fidelity F(phi^n, C_(k->n)(phi^k)) at d={d}, k={k}, n={n}", f, bound


def antisym(d=3, n=2, k=1, seed=0):
    xb, yb = antisymmetric_subspace_basis(d, n), antisymmetric_subspace_basis(d, k)
    phi = slater_determinant(random_orthonormal_vectors(d, n, seed)).matrix
    cp = compose(subspace_cloner(xb, yb), subspace_partial_trace(xb, yb))
    f = fidelity(phi, cp(phi))
    return f"antisymmetric cloner fidelity at d={d}, n={n}, k={k}", f, 1.0 / comb(d - k, d - n)


def slater(d=4, n=3, k=2, seed=0):
    phi = slater_determinant(random_orthonormal_vectors(d, n, seed))
    marg = partial_trace_matrix(phi.matrix, phi.dims, range(k))[0]
    return f"entropy of the {k}-marginal of a Slater determinant (d={d}, n={n})", \
        von_neumann_entropy(marg), log(comb(n, k))


DEMOS = {"werner": werner, "antisym": antisym, "slater": slater}
