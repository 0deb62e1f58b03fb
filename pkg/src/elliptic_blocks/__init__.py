"""Exact toolkit for 5/3 graph-Laplacian eigenvectors over F_p, torus-valued
linear systems on red/green decorated graphs, and building-block surgery."""

from .blocks import (
    BuildingBlock,
    ConstructionPlan,
    OpenBlock,
    check_distance2_distinct,
    check_strong_irreducibility,
    close_h,
    insert,
    make_h,
    plan,
    replay,
    validate_block,
)
from .corpus import load_corpus, verify_corpus
from .exact_algebra import (
    KernelSize,
    TorusPoint,
    embed_fp_diagonally,
    nullspace_mod_p,
    rank_over_rationals,
    smith_normal_form,
    torus_kernel,
)
from .graph_core import (
    GraphError,
    WeightedGraph,
    distance,
    first_betti,
    parse_graph,
    serialize_graph,
    weighted_degree,
)
from .laplacian import (
    ModularLabeling,
    eigen_residual,
    is_eigenvector,
    laplacian_normalized,
    laplacian_unnormalized,
    no_adjacent_degree3,
    rational_triviality,
)
from .search import search
from .torus_system import (
    DecoratedBipartiteGraph,
    build_system,
    check_torus_solution,
    finiteness,
    reduce_to_gprime,
    validate_decorations,
)

__all__ = [
    "build_system",
    "BuildingBlock",
    "check_distance2_distinct",
    "check_strong_irreducibility",
    "check_torus_solution",
    "close_h",
    "ConstructionPlan",
    "DecoratedBipartiteGraph",
    "distance",
    "eigen_residual",
    "embed_fp_diagonally",
    "finiteness",
    "first_betti",
    "GraphError",
    "insert",
    "is_eigenvector",
    "KernelSize",
    "laplacian_normalized",
    "laplacian_unnormalized",
    "load_corpus",
    "make_h",
    "ModularLabeling",
    "no_adjacent_degree3",
    "nullspace_mod_p",
    "OpenBlock",
    "parse_graph",
    "plan",
    "rank_over_rationals",
    "rational_triviality",
    "reduce_to_gprime",
    "replay",
    "search",
    "serialize_graph",
    "smith_normal_form",
    "torus_kernel",
    "TorusPoint",
    "validate_block",
    "validate_decorations",
    "verify_corpus",
    "weighted_degree",
    "WeightedGraph",
]

__version__ = "0.1.0"
