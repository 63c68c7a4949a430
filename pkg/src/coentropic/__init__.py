"""Graphs as bipartite pure states, Laplacian entropies and coentropic pairs."""

from .entropy import EntropyFingerprint, compare_entropy, unnormalized_entropy, von_neumann_entropy
from .graph import Graph, from_edge_list, graph6_decode, graph6_encode, parse_edge_text

__all__ = [
    "EntropyFingerprint",
    "Graph",
    "compare_entropy",
    "from_edge_list",
    "graph6_decode",
    "graph6_encode",
    "parse_edge_text",
    "unnormalized_entropy",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
