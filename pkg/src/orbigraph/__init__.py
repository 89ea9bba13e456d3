"""Finite windows into infinite tree-like digraphs.

Orbital digraphs of permutation groups, biconnected decompositions and
block-cut-vertex trees, amalgamated free products acting on their coset
trees, radius-bounded tree-like graph truncations, and end counting with
a structural end-orbit classification.
"""

__version__ = "0.1.0"

from .digraphs import (
    BlockCutVertexTree,
    Digraph,
    Lobe,
    block_cut_vertex_tree,
    complete_digraph,
    cut_vertices_and_lobes,
    digraph_from_text,
    digraph_isomorphic,
    digraph_to_text,
    directed_cycle,
    is_connected,
    undirected_distance,
    z_grading,
)
from .errors import CapacityError, InputError, ParseError, PreconditionError, ScaleError
from .permgroups import (
    Orbital,
    PermGroup,
    Permutation,
    find_block_system,
    group_from_text,
    group_to_text,
    is_primitive_higman,
    orbital_digraph,
    paired_orbital,
)
