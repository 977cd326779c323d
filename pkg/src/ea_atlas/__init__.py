"""Quantum channels on bipartite systems: representations, positivity
criteria, and entanglement annihilation under depolarizing noise."""

from .channels import (
    Channel,
    EbOperation,
    LambdaST,
    compose,
    depolarizing,
    depolarizing_global,
    depolarizing_local,
    identity_channel,
    lambda_st,
    load_channel,
    mix,
    save_channel,
    tensor,
    trace_map,
)
from .criteria import (
    BlockPositiveWitnessSearch,
    Classification,
    Criterion,
    Status,
    ea_status,
    eb_status,
    is_cp,
    is_tp,
    is_unital,
    pea_witness_search,
    positivity_status,
)
from .linalg import DimPair

__version__ = "0.1.0"
