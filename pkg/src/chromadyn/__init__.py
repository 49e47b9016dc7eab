"""Exact and constructive r-dynamic graph coloring."""
from .colorings import Coloring, bad_set, greedy_bounded_palette, is_proper, is_r_dynamic
from .exact import chromatic_number, find_coloring, invariant_numbers, r_dynamic_number
from .generators import generate
from .graphcore import Graph, degree_stats, from_edge_list, induced_subgraph, parse, remove_edges, serialize, square
from .harness import bound_table, montgomery_scan, verify_instance
from .lll import (
    balanced_hypergraph_coloring,
    dset_selection,
    dynamic_coloring_general,
    dynamic_coloring_regular,
    moser_tardos,
    product_r_dynamic,
    r_dynamic_partition_coloring,
)
from .transversal import bad_class_partition, build_class_gadget, square_bound_coloring, transversal_forest

__version__ = "0.1.0"
