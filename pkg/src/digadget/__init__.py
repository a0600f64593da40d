"""Gadget graphs, one-pass stream simulation and INDEX protocols for
digraph connectivity lower bounds."""

from digadget.graph_core import (
    Digraph,
    Edge,
    GraphError,
    digraph_from_edges,
    is_acyclic,
    is_strongly_connected,
    reaches_all,
)
from digadget.gadgets import (
    BitVector,
    GadgetInstance,
    GadgetParams,
    IndexInstance,
    PropertyTag,
    build_e1,
    build_e2,
    build_instance,
    derive_params,
    ground_truth,
)

__all__ = [
    "BitVector",
    "Digraph",
    "Edge",
    "GadgetInstance",
    "GadgetParams",
    "GraphError",
    "IndexInstance",
    "PropertyTag",
    "build_e1",
    "build_e2",
    "build_instance",
    "derive_params",
    "digraph_from_edges",
    "ground_truth",
    "is_acyclic",
    "is_strongly_connected",
    "reaches_all",
]

__version__ = "0.1.0"
