"""Certified Cheeger isoperimetric bounds on graphs, rooted trees, metric
spaces and their hyperbolic approximations.

Every bound the library emits is an interval with re-verifiable witnesses:
brute-force window minima give upper endpoints, function certificates and the
tree/decomposition theorems give lower endpoints, and all finite-horizon
results disclose the window they were proved on.
"""

from .errors import (
    BudgetExceededError,
    CheegerLabError,
    ConstructionError,
    EmptyWindowError,
    InvalidHorizonError,
    InvalidInputError,
    InvalidSupportError,
)
from .graphs import (
    BoundEndpoint,
    CheegerBound,
    CertificateResult,
    DEFAULT_SUBSET_BUDGET,
    Graph,
    admissible_vertices,
    auto_max_size,
    boundary,
    certificate_lower_bound,
    cheeger_ratio,
    corollary_connected_bound,
    cycle_graph,
    gradient,
    green_identity_check,
    grid_window,
    interior_cheeger_bruteforce,
    laplacian,
    path_window,
    quasi_isometry_check,
    relabeled,
    vertex_function,
)
from .hyperbolicity import (
    DEFAULT_DELTA_BUDGET,
    DeltaReport,
    delta_four_point,
    evaluate_witness,
    gromov_product,
    pole_defect,
)
from .metric import (
    FiniteMetricSpace,
    GeometryProfile,
    PerfectnessCertificate,
    cantor_sample,
    epsilon_net,
    greedy_separated,
    interval_sample,
    line_space,
    one_point_to_two_point_constant,
    rescale_eps0,
    strongly_bounded_geometry_profile,
    two_point,
    two_point_perfectness_check,
    two_point_to_one_point_constant,
    uniformly_perfect_check,
)
from .trees import (
    RootedTree,
    TreeAnalysis,
    comb_tree,
    complementedness_index,
    end_space,
    essential_boundary,
    even_branching_tree,
    full_branching_tree,
    grafted_dead_branches,
    growing_chain,
    homogeneous_tree,
    lemma_suite,
    maximal_complete_subtree,
    pseudo_regularity_index,
    random_branching_tree,
    random_tree,
    subtree_past,
    theorem_lower_bound,
    tree_cheeger_bounds,
    tree_from_parents,
)
from .approximation import (
    LeveledGraph,
    boundary_identification_check,
    build_truncated,
    level_certificate,
    relevel,
    structural_checks,
)
from .decomposition import (
    DecompositionSpec,
    GraftResult,
    PieceCertificate,
    bound_general,
    bound_strong,
    converse_scan,
    decomposition_bound,
    graft,
    graft_decomposition,
    validate,
)

__version__ = "0.1.0"
