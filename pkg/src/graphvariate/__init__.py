"""Graph-variate signal analysis.

A multivariate signal is paired with a weighted graph over its nodes; a
bivariate function of the instantaneous node values, weighted by the graph,
gives connectivity and network metrics at every sample.
"""

from .connectivity import (
    GvdResult,
    WindowScheme,
    coherence_matrix,
    connectivity_graph,
    correlation_matrix,
    gvd,
    modular_connectivity,
    pli_matrix,
    prepare_node_function,
    windowed_gvd,
)
from .core import (
    column_signal_product,
    dirichlet_energy,
    graph_weighted_tensor,
    local_clustering,
    node_function_row_sums,
    node_function_tensor,
    node_normalize,
    proposition1_equivalence_check,
    signal_product,
)
from .gsp import GraphOperator, build_operator, filter_and_argmax, heat_kernel
from .io import ingest_csv, write_matrix
from .signals import (
    DimensionError,
    GraphVariateSignal,
    InstantaneousNetworkTensor,
    MultivariateSignal,
    NodeFunctionKind,
    WeightedGraph,
)
from .spectral import analytic_signal, bandpass, welch_spectra

__all__ = [
    "DimensionError",
    "GraphOperator",
    "GraphVariateSignal",
    "GvdResult",
    "InstantaneousNetworkTensor",
    "MultivariateSignal",
    "NodeFunctionKind",
    "WeightedGraph",
    "WindowScheme",
    "analytic_signal",
    "bandpass",
    "build_operator",
    "coherence_matrix",
    "column_signal_product",
    "connectivity_graph",
    "correlation_matrix",
    "dirichlet_energy",
    "filter_and_argmax",
    "graph_weighted_tensor",
    "gvd",
    "heat_kernel",
    "ingest_csv",
    "local_clustering",
    "modular_connectivity",
    "node_function_row_sums",
    "node_function_tensor",
    "node_normalize",
    "pli_matrix",
    "prepare_node_function",
    "proposition1_equivalence_check",
    "signal_product",
    "welch_spectra",
    "windowed_gvd",
    "write_matrix",
]
