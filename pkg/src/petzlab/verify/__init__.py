from .checks import (
    check_broadcast_difference,
    check_clone_broadcast,
    check_clone_broadcast_recovery,
    check_duality,
    check_functional,
    check_petz_bound,
    check_reverse_recovery,
    check_subspace_recovery,
    check_uqcm_recovery,
    commutator_norm,
    symmetric_state,
)
from .ensemble import THEOREMS, EnsembleResult, run_check, run_ensemble, split_seeds
from .fixtures import CLONING_FAMILIES, FAMILIES, Fixture, FixtureSpec, build_fixture, corrupt
from .report import EIG_TOL, QUAD_TOL, SlackReport
