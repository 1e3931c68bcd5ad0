"""Symmetry-breaking constraint compiler and search toolkit for connected graph search."""

from .graph import (
    Graph,
    Permutation,
    apply_permutation,
    canonical_form,
    degree,
    edge_count,
    has_forbidden_cycle,
    is_connected,
)
from .sbp import (
    BfsCertificate,
    bfs_star_renumber,
    check_bfs,
    check_bfs_ascending_variant,
    check_bfs_plus,
    check_bfs_star,
    compute_parents,
    compute_weights,
)

__version__ = "0.1.0"

__all__ = [
    "BfsCertificate",
    "Graph",
    "Permutation",
    "apply_permutation",
    "bfs_star_renumber",
    "canonical_form",
    "check_bfs",
    "check_bfs_ascending_variant",
    "check_bfs_plus",
    "check_bfs_star",
    "compute_parents",
    "compute_weights",
    "degree",
    "edge_count",
    "has_forbidden_cycle",
    "is_connected",
]
