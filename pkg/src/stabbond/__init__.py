"""Stabilizer groups, measurement truncation and entanglement bonds."""
from .pauli import SignedPauli, parse
from .group import StabilizerState, from_generators
from .catalog import GraphSpec, graph_state, named_state

__all__ = [
    "GraphSpec",
    "SignedPauli",
    "StabilizerState",
    "from_generators",
    "graph_state",
    "named_state",
    "parse",
]
__version__ = "0.1.0"
