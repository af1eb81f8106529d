"""Numerical checks of entropic limits on approximate cloning and broadcasting."""

from .channel import QuantumChannel, adjoint, apply, compose, symmetrized_partial_trace, uqcm
from .functional import fidelity, relative_entropy, trace_distance, von_neumann_entropy
from .qstate import DensityOperator, partial_trace, tensor_product
from .recovery import averaged_petz, beta_nodes, rotated_petz

__version__ = "0.1.0"
