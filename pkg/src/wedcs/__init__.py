"""Weighted edge-degree-constrained subgraphs for maximum-weight b-matching,
with offline builders, exact/greedy solvers, and a random-order streaming
algorithm."""

from .edcs import (
    BuildTrace,
    EdcsParams,
    LocalSearchError,
    ViolationReport,
    build_w_edcs,
    build_wb_edcs,
    parameters_for,
    potential,
    validate,
)
from .generators import (
    GenSpec,
    MulticopyInstance,
    TightInstance,
    multicopy_instance,
    random_instance,
    tight_instance,
)
from .graph import (
    Capacities,
    MultiGraph,
    Subgraph,
    WeightedEdge,
    index_labeled_edges,
    relevant_subgraph,
)
from .graph_io import GraphFormatError, format_graph, parse_graph, read_graph, write_graph
from .matching import (
    BMatching,
    OracleBudgetExceeded,
    SplitResult,
    WVertexCover,
    bipartite_b_matching,
    bipartition_sides,
    branch_and_bound_b_matching,
    distribute_edges,
    max_weight_b_matching_exact,
    max_weight_b_matching_greedy,
    min_w_vertex_cover_bipartite,
    split_vertices,
)
from .streaming import (
    EdgeStream,
    StreamInvariantError,
    StreamRunResult,
    StreamRunStats,
    file_order_stream,
    is_underfull,
    make_stream,
    run_single_pass,
    run_with_fallbacks,
)

__version__ = "0.1.0"

__all__ = [
    "BMatching",
    "BuildTrace",
    "Capacities",
    "EdcsParams",
    "EdgeStream",
    "GenSpec",
    "GraphFormatError",
    "LocalSearchError",
    "MultiGraph",
    "MulticopyInstance",
    "OracleBudgetExceeded",
    "SplitResult",
    "StreamInvariantError",
    "StreamRunResult",
    "StreamRunStats",
    "Subgraph",
    "TightInstance",
    "ViolationReport",
    "WVertexCover",
    "WeightedEdge",
    "bipartite_b_matching",
    "bipartition_sides",
    "branch_and_bound_b_matching",
    "build_w_edcs",
    "build_wb_edcs",
    "distribute_edges",
    "file_order_stream",
    "format_graph",
    "index_labeled_edges",
    "is_underfull",
    "make_stream",
    "max_weight_b_matching_exact",
    "max_weight_b_matching_greedy",
    "min_w_vertex_cover_bipartite",
    "multicopy_instance",
    "parameters_for",
    "parse_graph",
    "potential",
    "random_instance",
    "read_graph",
    "relevant_subgraph",
    "run_single_pass",
    "run_with_fallbacks",
    "split_vertices",
    "tight_instance",
    "validate",
    "write_graph",
]
