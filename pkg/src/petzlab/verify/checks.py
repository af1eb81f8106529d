"""Theorem checkers: each returns a SlackReport with lhs, rhs and diagnostics."""

from math import comb, log

import numpy as np

from .. import channel as chm
from ..errors import HypothesisViolation, SupportError
from ..functional import (
    fidelity,
    neg_log_fidelity,
    relative_entropy,
    trace_distance,
)
from ..matfun import schatten_norm
from ..qstate import (
    as_generator,
    as_matrix,
    complex_gaussian,
    epsilon_mix,
    haar_random_vector,
    partial_trace_matrix,
    tensor_power,
)
from ..recovery import (
    _petz_pt_superops,
    averaged_petz,
    beta_nodes,
    improved_cloning_channel,
    local_recovery,
    recovery_difference_CL,
    recovery_difference_R,
    rotated_petz_family,
)
from ..subspace import (
    SubspaceBasis,
    maximally_mixed,
    symmetric_dimension,
    symmetric_subspace_basis,
)
from .fixtures import Fixture
from .report import EIG_TOL, QUAD_TOL, SlackReport

HYPOTHESIS_TOL = 1e-8
SUPPORT_TOL = 1e-10


def _fix_params(fix, **more):
    s = fix.spec
    return {"family": s.family, "d": s.d, "n": fix.n, "k_copies": s.k_copies, "seed": s.seed, **more}


def check_clone_broadcast(fix: Fixture, n=None, tolerance=EIG_TOL):
    """D(s1||s2) - D(t1||t2) >= (n-1) D(t1||t2) >= (n-1)/2 ||t1 - t2||_1^2."""
    n = fix.n if n is None else n
    if n != fix.n:
        raise ValueError(f"fixture has {fix.n} output factors, not {n}")
    if fix.k_copies != 1:
        raise ValueError("the n-fold cloning bound takes a single input copy")
    defects = fix.require_clone(HYPOTHESIS_TOL)
    s1, s2 = fix.sigma1, fix.sigma2
    t1, t2 = fix.sigma1_tilde, fix.sigma2_tilde
    d_in = relative_entropy(s1, s2)
    d_out = relative_entropy(t1, t2)
    lhs = d_in - d_out
    rhs = (n - 1) * d_out
    pinsker_rhs = 0.5 * (n - 1) * trace_distance(t1, t2) ** 2

    delta = trace_distance(s1, s2) ** 2 / 6.0
    poor1 = trace_distance(s1, t1) ** 2 / 2.0
    poor2 = trace_distance(s2, t2) ** 2 / 2.0
    # drop + poor1 + poor2 >= delta, so one of the three terms reaches delta/3
    trilemma = {
        "delta": delta,
        "poor_action_sigma1": poor1 >= delta / 3 and delta > 0,
        "poor_action_sigma2": poor2 >= delta / 3 and delta > 0,
        "distinguishability_drop": lhs >= delta / 3 and delta > 0,
        "slack": lhs + poor1 + poor2 - delta,
    }
    extras = {
        "hypothesis_defects": defects,
        "pinsker_slack": rhs - pinsker_rhs,
        "pinsker_rhs": pinsker_rhs,
        "trilemma": trilemma,
    }
    chain = {"pinsker": rhs - pinsker_rhs}
    if n == 2:
        chain["trilemma"] = trilemma["slack"]
    return SlackReport("thm3", _fix_params(fix), lhs, rhs, tolerance, extras, chain)


def check_clone_broadcast_recovery(fix: Fixture, n=None, m=1, k_copies=None, quad=None,
                                   tolerance=QUAD_TOL):
    """k D(s1||s2) - m D(t1||t2) >= -log F(s1^k, (R o tr o Lam)(s1^k)).

    R is the beta-averaged Petz map of ``tr_{m+1..n} o Lam`` at ``s2^(x)k``.
    With ``k_copies = 1`` and ``m = 1`` the improved-channel identities are
    reported too.
    """
    n = fix.n if n is None else n
    k = fix.k_copies if k_copies is None else k_copies
    if n != fix.n or k != fix.k_copies:
        raise ValueError("n and k_copies must match the fixture")
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}")
    quad = beta_nodes() if quad is None else quad
    defects = fix.require_clone(HYPOTHESIS_TOL)
    lam = fix.channel
    in1, in2 = fix.inputs
    t1, t2 = fix.sigma1_tilde, fix.sigma2_tilde

    recovery = local_recovery(lam, in2, quad, m=m)
    N = chm.compose(chm.partial_trace_channel(lam.out_dims, range(m)), lam)
    lhs = k * relative_entropy(fix.sigma1, fix.sigma2) - m * relative_entropy(t1, t2)
    recovered = recovery(N(in1))
    rhs = neg_log_fidelity(in1, recovered)

    t2m = t2
    for _ in range(m - 1):
        t2m = np.kron(t2m, t2)
    extras = {
        "hypothesis_defects": defects,
        "recovery_identity_defect": trace_distance(recovery(t2m), in2),
        "recovered_trace": float(np.real(np.trace(recovered))),
        "m": m,
    }
    if m == 1 and k == 1:
        improved = improved_cloning_channel(lam, fix.sigma2, quad)
        r1 = local_recovery(lam, fix.sigma2, quad, m=1)
        target = r1(t1)
        out1 = improved(in1)
        marg = max(
            float(np.max(np.abs(partial_trace_matrix(out1, lam.out_dims, [j])[0] - target)))
            for j in range(n)
        )
        s2n = tensor_power(fix.sigma2, n).matrix
        extras["improved_marginal_defect"] = marg
        extras["improved_product_defect"] = float(np.max(np.abs(improved(in2) - s2n)))
    params = _fix_params(fix, m=m)
    tid = "thm13" if k > 1 else "thm4"
    return SlackReport(tid, params, lhs, rhs, tolerance, extras)


def _support_defect(omega, basis: SubspaceBasis):
    p = basis.projector()
    om = as_matrix(omega)
    return float(np.max(np.abs(p @ om @ p - om)))


def symmetric_state(d, n, kind="random", seed=None, rank=None):
    """States supported in the symmetric subspace.

    ``kind`` is ``tensor-power`` (phi^(x)n for Haar-random phi), ``random``
    (Ginibre state on the subspace) or ``maximally-mixed``.
    """
    basis = symmetric_subspace_basis(d, n)
    rng = as_generator(seed)
    if kind == "tensor-power":
        phi = haar_random_vector(d, rng)
        v = phi
        for _ in range(n - 1):
            v = np.kron(v, phi)
        return np.outer(v, v.conj()), phi
    if kind == "maximally-mixed":
        return maximally_mixed(basis).matrix, None
    if kind == "random":
        r = basis.r if rank is None else rank
        g = complex_gaussian(rng, (basis.r, r))
        m = basis.isometry @ (g @ g.conj().T) @ basis.isometry.conj().T
        return m / np.trace(m).real, None
    raise ValueError(f"unknown omega source {kind!r}")


def _as_omega(omega_source, d, n, seed):
    if isinstance(omega_source, str):
        return symmetric_state(d, n, omega_source, seed)
    return as_matrix(omega_source), None


def check_uqcm_recovery(d, n, k, omega_source="tensor-power", seed=None, tolerance=EIG_TOL):
    """D(w||pi_n) >= D(P(w)||P(pi_n)) + D(w||(C o P)(w)) for symmetric w."""
    xb, yb = symmetric_subspace_basis(d, n), symmetric_subspace_basis(d, k)
    omega, phi = _as_omega(omega_source, d, n, seed)
    sd = _support_defect(omega, xb)
    if sd > SUPPORT_TOL:
        raise SupportError(f"omega is not supported in the symmetric subspace (defect {sd:.3e})")
    P = chm.symmetrized_partial_trace(d, n, k)
    C = chm.uqcm(d, k, n)
    CP = chm.compose(C, P)
    pi_n = maximally_mixed(xb).matrix
    lhs = relative_entropy(omega, pi_n) - relative_entropy(P(omega), P(pi_n))
    rhs = relative_entropy(omega, CP(omega))
    ratio = symmetric_dimension(d, k) / symmetric_dimension(d, n)
    extras = {"dimension_ratio": ratio}
    if phi is not None:
        phik = phi
        for _ in range(k - 1):
            phik = np.kron(phik, phi)
        extras["lhs_identity"] = -log(ratio)
        extras["lhs_identity_defect"] = abs(lhs + log(ratio))
        extras["werner_fidelity"] = fidelity(omega, C(np.outer(phik, phik.conj())))
        extras["werner_bound"] = ratio
    params = {"d": d, "n": n, "k": k, "omega": omega_source if isinstance(omega_source, str) else "custom",
              "seed": seed}
    return SlackReport("thm5", params, lhs, rhs, tolerance, extras)


def check_reverse_recovery(d, n, k, omega_source="random", seed=None, tolerance=EIG_TOL):
    """D(w||pi_k) >= D(C(w)||C(pi_k)) + D(w||(P o C)(w)) for symmetric k-qudit w."""
    yb = symmetric_subspace_basis(d, k)
    omega, _ = _as_omega(omega_source, d, k, seed)
    sd = _support_defect(omega, yb)
    if sd > SUPPORT_TOL:
        raise SupportError(f"omega is not supported in the symmetric subspace (defect {sd:.3e})")
    P = chm.symmetrized_partial_trace(d, n, k)
    C = chm.uqcm(d, k, n)
    PC = chm.compose(P, C)
    pi_k = maximally_mixed(yb).matrix
    lhs = relative_entropy(omega, pi_k) - relative_entropy(C(omega), C(pi_k))
    rhs = relative_entropy(omega, PC(omega))
    params = {"d": d, "n": n, "k": k, "omega": omega_source if isinstance(omega_source, str) else "custom",
              "seed": seed}
    return SlackReport("thm6", params, lhs, rhs, tolerance, {})


def check_subspace_recovery(x_n: SubspaceBasis, y_k: SubspaceBasis, omega, tolerance=EIG_TOL):
    """D(w||pi_X) >= D(P(w)||pi_Y) + D(w||(C o P)(w)) for w supported in X_n."""
    d, n, k = x_n.d, x_n.n, y_k.n
    omega = as_matrix(omega)
    sx = _support_defect(omega, x_n)
    if sx > SUPPORT_TOL:
        raise SupportError(f"omega is not supported in X_n (defect {sx:.3e})")
    marg = partial_trace_matrix(omega, x_n.dims, range(k))[0]
    sy = _support_defect(marg, y_k)
    if sy > SUPPORT_TOL:
        raise SupportError(f"the k-marginal of omega is not supported in Y_k (defect {sy:.3e})")
    P = chm.subspace_partial_trace(x_n, y_k)
    C = chm.subspace_cloner(x_n, y_k)
    pi_x, pi_y = maximally_mixed(x_n).matrix, maximally_mixed(y_k).matrix
    CP = chm.compose(C, P)
    pw = P(omega)
    cpw = CP(omega)
    lhs = relative_entropy(omega, pi_x) - relative_entropy(pw, P(pi_x))
    rhs = relative_entropy(omega, cpw)
    pi_x_marg = partial_trace_matrix(pi_x, x_n.dims, range(k))[0]
    extras = {
        "recovered_trace": float(np.real(np.trace(cpw))),
        "fidelity": fidelity(omega, cpw),
        "maximally_mixed_marginal_defect": float(np.max(np.abs(pi_x_marg - pi_y))),
    }
    if x_n.kind == "antisymmetric" and y_k.kind == "antisymmetric":
        b = comb(d - k, d - n)
        extras["antisymmetric_lhs_bound"] = log(b)
        extras["antisymmetric_fidelity_bound"] = 1.0 / b
    params = {"d": d, "n": n, "k": k, "X": x_n.kind, "Y": y_k.kind}
    return SlackReport("thm7", params, lhs, rhs, tolerance, extras)


def commutator_norm(a, b):
    a, b = as_matrix(a), as_matrix(b)
    return schatten_norm(a @ b - b @ a, 1)


def _kernel_included(s1, s2):
    return np.isfinite(relative_entropy(s1, s2))


def _lemma15_branches(fix, quad, d_in):
    """Slacks of the two key-estimate bounds (trace out A, trace out B)."""
    rho1, rho2 = fix.outputs
    dims = fix.channel.out_dims
    out = {}
    for traced, keep in (("A", 1), ("B", 0)):
        r1k = partial_trace_matrix(rho1, dims, [keep])[0]
        r2k = partial_trace_matrix(rho2, dims, [keep])[0]
        maps = _petz_pt_superops(rho2, dims, traced, quad.nodes)
        integral = sum(w * neg_log_fidelity(rho1, mp(r1k)) for w, mp in zip(quad.weights, maps))
        out[f"trace_{traced}"] = d_in - relative_entropy(r1k, r2k) - integral
    return out


def check_broadcast_difference(fix: Fixture, variant="R", eps=None, quad=None, tolerance=None):
    """D(s1||s2) - D(t1||t2) >= Delta for a two-fold simultaneous broadcast.

    ``variant`` selects the Petz recovery difference (``R``) or the
    strengthened-monotonicity remainder (``CL``). When ker s2 is not inside ker s1 the input
    s2 is replaced by ``eps*s1 + (1-eps)*s2`` (default eps = 1e-3).
    """
    if fix.n != 2 or fix.k_copies != 1:
        raise ValueError("two-fold broadcast checks need n = 2 and one input copy")
    if variant not in ("R", "CL"):
        raise ValueError("variant must be 'R' or 'CL'")
    quad = beta_nodes() if quad is None else quad
    tolerance = (QUAD_TOL if variant == "R" else EIG_TOL) if tolerance is None else tolerance
    extras = {}
    if not _kernel_included(fix.sigma1, fix.sigma2):
        eps = 1e-3 if eps is None else eps
        fix = fix.with_sigma2(epsilon_mix(fix.sigma1, fix.sigma2, eps))
        extras["epsilon_mix"] = eps
    extras["hypothesis_defects"] = fix.require_broadcast(HYPOTHESIS_TOL)
    t1, t2 = fix.sigma1_tilde, fix.sigma2_tilde
    rho2 = fix.outputs[1]
    d_in = relative_entropy(fix.sigma1, fix.sigma2)
    lhs = d_in - relative_entropy(t1, t2)
    if variant == "R":
        rhs = recovery_difference_R(t1, rho2, quad, dims=fix.channel.out_dims)
    else:
        rhs = recovery_difference_CL(t1, t2, rho2, dims=fix.channel.out_dims)
    if np.isfinite(d_in):
        extras["lemma15"] = _lemma15_branches(fix, quad, d_in)
    if rhs <= 1e-6:
        extras["commutator_norm"] = commutator_norm(t1, t2)
    return SlackReport(f"thm14{variant}", _fix_params(fix, variant=variant), lhs, rhs, tolerance, extras)


def check_duality(d, n, k, seed=0, tolerance=1e-10):
    """Max-entry deviation between adjoint(P_{n->k}) and (d[n]/d[k]) C_{k->n}."""
    P = chm.symmetrized_partial_trace(d, n, k)
    C = chm.uqcm(d, k, n)
    c = chm.duality_constant(d, n, k)
    dev = float(np.max(np.abs(chm.adjoint(P).superop - c * C.superop)))
    rng = as_generator(seed)
    x = complex_gaussian(rng, (d**k, d**k))
    y = complex_gaussian(rng, (d**n, d**n))
    lhs_ip = np.trace(x.conj().T @ P(y))
    rhs_ip = np.trace(C(x).conj().T @ y) * c
    extras = {"inner_product_defect": float(abs(lhs_ip - rhs_ip)), "constant": c}
    return SlackReport("duality", {"d": d, "n": n, "k": k}, 0.0, dev, tolerance, extras)


def check_petz_bound(rho, sigma, N, quad=None, tolerance=QUAD_TOL):
    """D(rho||sigma) - D(N rho||N sigma) >= -int log F(rho, R^t(N rho)) dbeta(t)."""
    quad = beta_nodes() if quad is None else quad
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    n_rho = N(rho)
    drop = relative_entropy(rho, sigma) - relative_entropy(n_rho, N(sigma))
    maps = rotated_petz_family(N, sigma, quad.nodes)
    rhs = sum(w * neg_log_fidelity(rho, mp(n_rho)) for w, mp in zip(quad.weights, maps))
    avg = averaged_petz(N, sigma, quad)
    avg_rhs = neg_log_fidelity(rho, avg(n_rho))
    extras = {
        "monotonicity_slack": drop,
        "averaged_slack": drop - avg_rhs,
        "averaged_exactness": trace_distance(avg(N(sigma)), sigma),
        "node_exactness": max(trace_distance(mp(N(sigma)), sigma) for mp in maps),
    }
    params = {"d_in": N.in_dim, "d_out": N.out_dim}
    chain = {"monotonicity": drop, "averaged": drop - avg_rhs}
    return SlackReport("thm8", params, drop, rhs, tolerance, extras, chain)


def check_functional(rho, sigma, tolerance=1e-9):
    """Pinsker, D >= -log F and Fuchs-van de Graaf on one pair."""
    dv = relative_entropy(rho, sigma)
    td = trace_distance(rho, sigma)
    f = fidelity(rho, sigma)
    nlf = neg_log_fidelity(rho, sigma)
    chain = {
        "d_vs_neg_log_f": dv - nlf,
        "neg_log_f_vs_one_minus_f": nlf - (1 - f),
        "one_minus_f_vs_trace": (1 - f) - td**2 / 4,
    }
    extras = {"fidelity": f, "trace_distance": td}
    return SlackReport("pinsker", {"dim": as_matrix(rho).shape[0]}, dv, 0.5 * td**2, tolerance,
                       extras, chain)
