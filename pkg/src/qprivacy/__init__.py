"""Numerical lower bounds on quantum privacy for finite-dimensional channels."""

from .entropy import (
    binary_entropy,
    coherent_information,
    entanglement_fidelity,
    entropy_exchange,
    holevo_chi,
    von_neumann_entropy,
)
from .privacy import (
    PrivacyBoundReport,
    additivity_check,
    coherent_privacy_bound,
    fano_bound_from_channel,
    fano_max_location,
    fano_max_value,
    fano_privacy_bound,
    multipartite_bound_rhs,
    multipartite_chain_check,
)
from .qchannel import KrausChannel, apply, environment_state, make_channel, random_channel, validate_channel
from .qstate import (
    DensityOperator,
    MultipartiteState,
    PureState,
    partial_trace,
    purify,
    random_density,
    random_pure,
    tensor,
    trace_distance,
    validate_density,
)

__version__ = "0.1.0"
