"""Exact tools for L(h,k)-edge labelings of the king graph (octagonal grid T_8)."""

from .grid import DIHEDRAL, Edge, EdgeClass, Symmetry, Vertex, angular_distance, edge, edge_distance
from .labeling import (
    FormatError, Labeling, LabelingError, PeriodicLabeling, Violation, ViolationReport,
    forbidden_colors, load, dump, span, verify, verify_periodic,
)
from .subgraph import EdgeSet, K4Site, build_G, build_GS, enumerate_k3, enumerate_k4
from .packing import check_packing, packing_lower_bound
from .solver import (
    SearchCertificate, SearchConfig, Verdict, brute_force_min_span, feasible, linear_search, min_span,
    periodic_search,
)

__version__ = "0.1.0"
